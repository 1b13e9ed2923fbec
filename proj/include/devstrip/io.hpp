#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "devstrip/conversion.hpp"
#include "devstrip/energy.hpp"
#include "devstrip/optimizer.hpp"
#include "devstrip/preprocess.hpp"

namespace devstrip::io {

using nlohmann::json;

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// ---- JSON schemas -------------------------------------------------------
// curve:   {"degree": p, "knots": [...], "points": [[x,y,z], ...]}
// mapping: {"degree": d, "knots": [...], "epsilons": [...]}
// surface: {"degree_s": 1, "degree_t": pd, "knots_s": [...], "knots_t": [...],
//           "control_net": [[...row0...], [...row1...]]}

inline json curve_to_json(const BSplineCurve& c) {
    json j;
    j["degree"] = c.degree();
    j["knots"] = c.knots().knots;
    json pts = json::array();
    for (const Vec3& p : c.control_points()) pts.push_back({p.x(), p.y(), p.z()});
    j["points"] = std::move(pts);
    return j;
}

inline BSplineCurve curve_from_json(const json& j) {
    if (!j.contains("degree")) throw std::invalid_argument("curve JSON: missing field 'degree'");
    if (!j.contains("knots")) throw std::invalid_argument("curve JSON: missing field 'knots'");
    if (!j.contains("points")) throw std::invalid_argument("curve JSON: missing field 'points'");
    KnotVector kv(j.at("degree").get<int>(), j.at("knots").get<std::vector<double>>());
    std::vector<Vec3> pts;
    for (const auto& p : j.at("points")) {
        if (p.size() != 3) throw std::invalid_argument("curve JSON: 'points' entries must be [x,y,z]");
        pts.emplace_back(p[0].get<double>(), p[1].get<double>(), p[2].get<double>());
    }
    return BSplineCurve(std::move(kv), std::move(pts));
}

inline json mapping_to_json(const MappingFunction& m) {
    json j;
    j["degree"] = m.degree();
    j["knots"] = m.knots().knots;
    j["epsilons"] = m.epsilons();
    return j;
}

inline MappingFunction mapping_from_json(const json& j) {
    for (const char* f : {"degree", "knots", "epsilons"})
        if (!j.contains(f))
            throw std::invalid_argument(std::string("mapping JSON: missing field '") + f + "'");
    KnotVector kv(j.at("degree").get<int>(), j.at("knots").get<std::vector<double>>());
    return MappingFunction::from_epsilons(std::move(kv),
                                          j.at("epsilons").get<std::vector<double>>());
}

inline json surface_to_json(const BSplineSurface& s) {
    json j;
    j["degree_s"] = 1;
    j["degree_t"] = s.degree_t;
    j["knots_s"] = s.knots_s().knots;
    j["knots_t"] = s.knots_t.knots;
    json r0 = json::array(), r1 = json::array();
    for (const Vec3& p : s.row0) r0.push_back({p.x(), p.y(), p.z()});
    for (const Vec3& p : s.row1) r1.push_back({p.x(), p.y(), p.z()});
    j["control_net"] = {std::move(r0), std::move(r1)};
    return j;
}

inline BSplineSurface surface_from_json(const json& j) {
    BSplineSurface s;
    s.degree_t = j.at("degree_t").get<int>();
    s.knots_t = KnotVector(s.degree_t, j.at("knots_t").get<std::vector<double>>());
    for (int r = 0; r < 2; ++r) {
        auto& row = (r == 0) ? s.row0 : s.row1;
        for (const auto& p : j.at("control_net").at(r))
            row.emplace_back(p[0].get<double>(), p[1].get<double>(), p[2].get<double>());
    }
    return s;
}

inline json transform_to_json(const BoxTransform& tf) {
    return {{"scale", tf.scale}, {"offset", {tf.offset.x(), tf.offset.y(), tf.offset.z()}}};
}

inline BoxTransform transform_from_json(const json& j) {
    BoxTransform tf;
    tf.scale = j.at("scale").get<double>();
    tf.offset = Vec3(j.at("offset")[0].get<double>(), j.at("offset")[1].get<double>(),
                     j.at("offset")[2].get<double>());
    return tf;
}

// ---- CSV / OBJ writers --------------------------------------------------

inline void write_warp_csv(std::ostream& os, const WarpProfile& w) {
    os << "# beta_max_deg=" << fmt17(w.beta_max) << " beta_ave_deg=" << fmt17(w.beta_ave) << "\n";
    os << "t,beta_deg\n";
    for (size_t i = 0; i < w.t_params.size(); ++i)
        os << fmt17(w.t_params[i]) << "," << fmt17(w.angles_deg[i]) << "\n";
}

inline void write_mapping_csv(std::ostream& os, const MappingFunction& m, int samples = 200) {
    os << "t,sigma\n";
    for (int i = 0; i < samples; ++i) {
        const double t = static_cast<double>(i) / (samples - 1);
        os << fmt17(t) << "," << fmt17(m.eval(t)) << "\n";
    }
}

inline void write_report_csv(std::ostream& os, const OptimizationReport& rep) {
    os << "iteration,objective,beta_ave,seconds\n";
    for (size_t i = 0; i < rep.objective_trace.size(); ++i) {
        const double beta = i < rep.beta_ave_trace.size() ? rep.beta_ave_trace[i] : -1.0;
        const double sec = rep.objective_trace.size() > 1
                               ? rep.wall_time_seconds * static_cast<double>(i) /
                                     (rep.objective_trace.size() - 1)
                               : rep.wall_time_seconds;
        os << i << "," << fmt17(rep.objective_trace[i]) << "," << fmt17(beta) << ","
           << fmt17(sec) << "\n";
    }
}

inline void write_obj(std::ostream& os, const StripMesh& mesh) {
    os << "# devstrip quad mesh, vt.x carries the warp angle (degrees) of the ruling column\n";
    for (size_t i = 0; i < mesh.vertices.size(); ++i) {
        const Vec3& v = mesh.vertices[i];
        os << "v " << fmt17(v.x()) << " " << fmt17(v.y()) << " " << fmt17(v.z()) << "\n";
    }
    for (double w : mesh.warp_deg) os << "vt " << fmt17(w) << " 0\n";
    for (const auto& q : mesh.quads)
        os << "f " << q[0] + 1 << "/" << q[0] + 1 << " " << q[1] + 1 << "/" << q[1] + 1 << " "
           << q[2] + 1 << "/" << q[2] + 1 << " " << q[3] + 1 << "/" << q[3] + 1 << "\n";
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open input file: " + path);
    json j;
    in >> j;
    return j;
}

inline void save_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << content;
}

} // namespace devstrip::io
