#pragma once

#include <array>
#include <cmath>

#include "devstrip/mapping.hpp"

namespace devstrip {

/// Ruled surface S(s,t) = (1-s) C1(t) + s C2(sigma(t)). The boundary curves
/// are interpolated exactly and monotone sigma keeps parameter-domain rulings
/// from crossing.
struct RuledStrip {
    BSplineCurve c1;
    BSplineCurve c2;
    MappingFunction sigma;

    Vec3 eval(double s, double t) const {
        if (s < 0.0 || s > 1.0 || t < 0.0 || t > 1.0)
            throw std::domain_error("RuledStrip::eval: (s,t) outside unit square");
        return eval_ext(s, t);
    }

    Vec3 eval_ext(double s, double t) const {
        return (1.0 - s) * c1.eval_ext(t) + s * c2.eval_ext(sigma.eval_ext(t));
    }

    /// dS/ds = C2(sigma(t)) - C1(t), independent of s.
    Vec3 partial_s(double t) const { return c2.eval_ext(sigma.eval_ext(t)) - c1.eval_ext(t); }

    /// dS/dt = (1-s) C1'(t) + s sigma'(t) C2'(sigma(t)).
    Vec3 partial_t(double s, double t) const {
        const double T = sigma.eval_ext(t);
        return (1.0 - s) * c1.derivatives_ext(t, 1)[1] +
               s * sigma.eval_prime_ext(t) * c2.derivatives_ext(T, 1)[1];
    }

    /// Unit normal, oriented as dS/ds x dS/dt.
    Vec3 normal(double s, double t) const {
        const Vec3 n = partial_s(t).cross(partial_t(s, t));
        const double len = n.norm();
        if (len < 1e-14) throw DegeneracyError("RuledStrip::normal: degenerate tangents");
        return n / len;
    }

    /// Restriction to t in [t_lo,t_hi], reparametrized to [0,1]. The mapped
    /// interval of C2 is [sigma(t_lo), sigma(t_hi)].
    RuledStrip trim_to_original(double t_lo, double t_hi) const {
        if (!(t_lo < t_hi) || t_lo < 0.0 || t_hi > 1.0)
            throw std::domain_error("trim_to_original: empty or invalid interval");
        if (t_lo == 0.0 && t_hi == 1.0) return *this;
        const double T_lo = sigma.eval(t_lo), T_hi = sigma.eval(t_hi);
        if (T_hi - T_lo < 1e-12)
            throw DegeneracyError("trim_to_original: sigma is flat on the interval");
        BSplineCurve sig_sub = sigma.to_scalar_spline().subcurve(t_lo, t_hi);
        std::vector<double> betas(sig_sub.num_points());
        for (int i = 0; i < sig_sub.num_points(); ++i)
            betas[i] = (sig_sub.control_points()[i].x() - T_lo) / (T_hi - T_lo);
        RuledStrip out;
        out.c1 = c1.subcurve(t_lo, t_hi);
        out.c2 = c2.subcurve(T_lo, T_hi);
        out.sigma = MappingFunction::from_betas(sig_sub.knots(), betas);
        return out;
    }
};

/// Quad mesh of a strip with a per-vertex warp scalar (degrees, per ruling
/// column) for external color mapping.
struct StripMesh {
    int nu = 0, nv = 0;
    std::vector<Vec3> vertices;          // row-major, index = i*nv + j
    std::vector<std::array<int, 4>> quads;
    std::vector<double> warp_deg;        // one value per vertex (constant per column j)
};

inline StripMesh tessellate(const RuledStrip& strip, int nu, int nv) {
    if (nu < 2 || nv < 2) throw std::domain_error("tessellate: nu,nv must be >= 2");
    StripMesh mesh;
    mesh.nu = nu;
    mesh.nv = nv;
    std::vector<double> col_warp(nv, 0.0);
    for (int j = 0; j < nv; ++j) {
        const double t = static_cast<double>(j) / (nv - 1);
        try {
            const Vec3 n0 = strip.normal(0.0, t), n1 = strip.normal(1.0, t);
            col_warp[j] = std::acos(std::clamp(n0.dot(n1), -1.0, 1.0)) * 180.0 / M_PI;
        } catch (const DegeneracyError&) {
            col_warp[j] = -1.0; // flagged column
        }
    }
    for (int i = 0; i < nu; ++i) {
        const double s = static_cast<double>(i) / (nu - 1);
        for (int j = 0; j < nv; ++j) {
            const double t = static_cast<double>(j) / (nv - 1);
            mesh.vertices.push_back(strip.eval(s, t));
            mesh.warp_deg.push_back(col_warp[j]);
        }
    }
    for (int i = 0; i + 1 < nu; ++i)
        for (int j = 0; j + 1 < nv; ++j)
            mesh.quads.push_back({i * nv + j, i * nv + j + 1, (i + 1) * nv + j + 1, (i + 1) * nv + j});
    return mesh;
}

} // namespace devstrip
