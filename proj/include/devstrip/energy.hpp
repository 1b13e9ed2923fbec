#pragma once

#include <array>
#include <cmath>

#include "devstrip/surface.hpp"

namespace devstrip {

/// Per-sample normal variables N_i, the developability certificates: at a
/// minimum each N_i is a unit vector orthogonal to both curve tangents and
/// the ruling vector.
struct NormalVariables {
    std::vector<Vec3> normals;
};

struct ObjectiveConfig {
    double lambda1 = 100.0;       // weight of the developability term
    double lambda2 = 1.0;         // weight of the normal regularization term
    double endpoint_weight = 0.0; // optional penalty pinning sigma(0)=0, sigma(1)=1
    std::vector<double> sample_params;

    static std::vector<double> uniform_samples(int count) {
        std::vector<double> t(count);
        for (int i = 0; i < count; ++i) t[i] = static_cast<double>(i) / (count - 1);
        return t;
    }

    static ObjectiveConfig defaults(int sample_count = 100) {
        ObjectiveConfig cfg;
        cfg.sample_params = uniform_samples(sample_count);
        return cfg;
    }
};

/// Warp angles (degrees) at sampled rulings. Samples with degenerate normals
/// are flagged and excluded from the statistics.
struct WarpProfile {
    std::vector<double> t_params;
    std::vector<double> angles_deg; // -1 at flagged samples
    std::vector<int> flagged;
    double beta_max = 0.0;
    double beta_ave = 0.0;
};

// Rulings shorter than this are treated as touching boundaries: the residual
// terms involving L are dropped at that sample.
inline constexpr double kRulingLengthTol = 1e-12;

/// Signed coplanarity determinant det(C1(t)-C2(sigma(t)), C1'(t), C2'(sigma(t))).
/// Zero iff the ruling at t is developable.
inline double e1_determinant(const BSplineCurve& c1, const BSplineCurve& c2,
                             const MappingFunction& m, double t) {
    const double T = m.eval_ext(t);
    const Vec3 L = c1.eval_ext(t) - c2.eval_ext(T);
    const Vec3 d1 = c1.derivatives_ext(t, 1)[1];
    const Vec3 d2 = c2.derivatives_ext(T, 1)[1];
    Eigen::Matrix3d M;
    M.col(0) = L;
    M.col(1) = d1;
    M.col(2) = d2;
    return M.determinant();
}

/// The three residuals (N.C1'(t), N.C2'(sigma(t)), N.L(t)) of the
/// normal-variable developability condition.
inline std::array<double, 3> e2_residuals(const BSplineCurve& c1, const BSplineCurve& c2,
                                          const MappingFunction& m, double t, const Vec3& N) {
    const double T = m.eval_ext(t);
    const Vec3 L = c1.eval_ext(t) - c2.eval_ext(T);
    const Vec3 d1 = c1.derivatives_ext(t, 1)[1];
    const Vec3 d2 = c2.derivatives_ext(T, 1)[1];
    const double rL = (L.norm() >= kRulingLengthTol) ? N.dot(L) : 0.0;
    return {N.dot(d1), N.dot(d2), rL};
}

/// lambda1 * F_Dvlp + lambda2 * F_Reg (+ optional endpoint penalty).
inline double objective(const BSplineCurve& c1, const BSplineCurve& c2, const MappingFunction& m,
                        const NormalVariables& N, const ObjectiveConfig& cfg) {
    if (N.normals.size() != cfg.sample_params.size())
        throw std::invalid_argument("objective: sample/normal count mismatch");
    double f_dvlp = 0.0, f_reg = 0.0;
    for (size_t i = 0; i < cfg.sample_params.size(); ++i) {
        const auto r = e2_residuals(c1, c2, m, cfg.sample_params[i], N.normals[i]);
        f_dvlp += r[0] * r[0] + r[1] * r[1] + r[2] * r[2];
        const double nn = N.normals[i].squaredNorm() - 1.0;
        f_reg += nn * nn;
    }
    double f = cfg.lambda1 * f_dvlp + cfg.lambda2 * f_reg;
    if (cfg.endpoint_weight > 0.0) {
        const double s0 = m.range_lo(), s1 = m.range_hi();
        f += cfg.endpoint_weight * (s0 * s0 + (s1 - 1.0) * (s1 - 1.0));
    }
    return f;
}

/// Analytic gradient of `objective` in the flat variable order
/// (eps_0..eps_n, N_0.xyz, ..., N_K.xyz).
inline std::vector<double> gradient(const BSplineCurve& c1, const BSplineCurve& c2,
                                    const MappingFunction& m, const NormalVariables& N,
                                    const ObjectiveConfig& cfg) {
    if (N.normals.size() != cfg.sample_params.size())
        throw std::invalid_argument("gradient: sample/normal count mismatch");
    const int n_eps = m.num_coeffs();
    const size_t K1 = cfg.sample_params.size();
    const auto& eps = m.epsilons();
    std::vector<double> g(n_eps + 3 * K1, 0.0);

    for (size_t i = 0; i < K1; ++i) {
        const double t = cfg.sample_params[i];
        const double T = m.eval_ext(t);
        const Vec3& Ni = N.normals[i];
        const Vec3 L = c1.eval_ext(t) - c2.eval_ext(T);
        const Vec3 d1 = c1.derivatives_ext(t, 1)[1];
        const auto d2s = c2.derivatives_ext(T, 2);
        const Vec3 d2 = d2s[1], dd2 = d2s[2];
        const bool drop_L = L.norm() < kRulingLengthTol;
        const double r1 = Ni.dot(d1);
        const double r2 = Ni.dot(d2);
        const double r3 = drop_L ? 0.0 : Ni.dot(L);

        // normal-variable block
        Vec3 gN = 2.0 * r1 * d1 + 2.0 * r2 * d2;
        if (!drop_L) gN += 2.0 * r3 * L;
        gN *= cfg.lambda1;
        gN += cfg.lambda2 * 4.0 * (Ni.squaredNorm() - 1.0) * Ni;
        g[n_eps + 3 * i + 0] += gN.x();
        g[n_eps + 3 * i + 1] += gN.y();
        g[n_eps + 3 * i + 2] += gN.z();

        // chain rule through sigma(t_i): d sigma/d eps_j = 2 eps_j tail_j(t_i)
        double dE_dT = 2.0 * r2 * Ni.dot(dd2);
        if (!drop_L) dE_dT += 2.0 * r3 * (-Ni.dot(d2));
        dE_dT *= cfg.lambda1;
        if (dE_dT != 0.0) {
            const auto tail = m.basis_tail_sums(t);
            for (int j = 0; j < n_eps; ++j) g[j] += dE_dT * 2.0 * eps[j] * tail[j];
        }
    }

    if (cfg.endpoint_weight > 0.0) {
        const double s0 = m.range_lo(), s1 = m.range_hi();
        const auto tail0 = m.basis_tail_sums(0.0);
        const auto tail1 = m.basis_tail_sums(1.0);
        for (int j = 0; j < n_eps; ++j) {
            g[j] += cfg.endpoint_weight * 2.0 * s0 * 2.0 * eps[j] * tail0[j];
            g[j] += cfg.endpoint_weight * 2.0 * (s1 - 1.0) * 2.0 * eps[j] * tail1[j];
        }
    }
    return g;
}

/// Normals maximally consistent with the current mapping: N_i = normalize(C1' x L).
inline NormalVariables init_normals(const BSplineCurve& c1, const BSplineCurve& c2,
                                    const MappingFunction& m, const std::vector<double>& samples) {
    NormalVariables N;
    N.normals.reserve(samples.size());
    for (double t : samples) {
        const double T = m.eval_ext(t);
        const Vec3 L = c1.eval_ext(t) - c2.eval_ext(T);
        const Vec3 d1 = c1.derivatives_ext(t, 1)[1];
        Vec3 n = d1.cross(L);
        const double len = n.norm();
        N.normals.push_back(len > 1e-14 ? Vec3(n / len) : Vec3(0.0, 0.0, 1.0));
    }
    return N;
}

/// Warp angles between the surface normals at the two ends of sampled rulings.
inline WarpProfile warp_profile(const RuledStrip& strip, int sample_count) {
    if (sample_count < 2) throw std::domain_error("warp_profile: need at least 2 samples");
    WarpProfile w;
    w.t_params = ObjectiveConfig::uniform_samples(sample_count);
    w.angles_deg.assign(sample_count, -1.0);
    double sum = 0.0, mx = 0.0;
    int valid = 0;
    for (int i = 0; i < sample_count; ++i) {
        const double t = w.t_params[i];
        try {
            const Vec3 n0 = strip.normal(0.0, t);
            const Vec3 n1 = strip.normal(1.0, t);
            const double ang = std::acos(std::clamp(n0.dot(n1), -1.0, 1.0)) * 180.0 / M_PI;
            w.angles_deg[i] = ang;
            sum += ang;
            mx = std::max(mx, ang);
            ++valid;
        } catch (const DegeneracyError&) {
            w.flagged.push_back(i);
        }
    }
    w.beta_max = mx;
    w.beta_ave = valid > 0 ? sum / valid : 0.0;
    return w;
}

} // namespace devstrip
