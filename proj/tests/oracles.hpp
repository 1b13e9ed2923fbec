#pragma once

// Independent reference implementations used only as test oracles. They stay
// deliberately naive and separate from the library's evaluation paths.

#include <random>

#include "devstrip/devstrip.hpp"

namespace oracles {

using devstrip::BSplineCurve;
using devstrip::KnotVector;
using devstrip::Vec3;

/// Naive Cox-de Boor recursion (exponential, reference only).
inline double cox_de_boor(const std::vector<double>& U, int i, int d, double t) {
    if (d == 0) {
        const bool last = (static_cast<size_t>(i + 2) == U.size()) ||
                          (U[i + 1] >= 1.0 && t >= 1.0);
        return (U[i] <= t && t < U[i + 1]) || (last && t == U[i + 1]) ? 1.0 : 0.0;
    }
    double a = 0.0, b = 0.0;
    if (U[i + d] > U[i]) a = (t - U[i]) / (U[i + d] - U[i]) * cox_de_boor(U, i, d - 1, t);
    if (U[i + d + 1] > U[i + 1])
        b = (U[i + d + 1] - t) / (U[i + d + 1] - U[i + 1]) * cox_de_boor(U, i + 1, d - 1, t);
    return a + b;
}

/// Curve point via the naive recursion over all basis functions.
inline Vec3 eval_recursive(const BSplineCurve& c, double t) {
    Vec3 p = Vec3::Zero();
    for (int i = 0; i < c.num_points(); ++i)
        p += cox_de_boor(c.knots().knots, i, c.degree(), t) * c.control_points()[i];
    return p;
}

/// Central finite difference of a scalar or vector function.
template <typename F>
auto central_diff(F&& f, double t, double h = 1e-6) {
    return (f(t + h) - f(t - h)) / (2.0 * h);
}

/// Max distance between two curves over uniform samples.
inline double max_trace_distance(const BSplineCurve& a, const BSplineCurve& b, int samples = 1000) {
    double mx = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double t = static_cast<double>(i) / (samples - 1);
        mx = std::max(mx, (a.eval(t) - b.eval(t)).norm());
    }
    return mx;
}

inline std::mt19937& rng() {
    static std::mt19937 gen(20240817);
    return gen;
}

inline double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng());
}

/// Random clamped curve with coordinates in [0,1].
inline BSplineCurve random_curve(int degree, int n_ctrl) {
    KnotVector kv = KnotVector::uniform_clamped(degree, n_ctrl);
    std::vector<Vec3> pts(n_ctrl);
    for (auto& p : pts) p = Vec3(uniform(0, 1), uniform(0, 1), uniform(0, 1));
    return BSplineCurve(kv, pts);
}

inline devstrip::MappingFunction random_monotone_mapping(int degree, int n_coeffs) {
    std::vector<double> eps(n_coeffs);
    for (double& e : eps) e = uniform(0.05, 0.4);
    auto m = devstrip::MappingFunction::from_epsilons(
        KnotVector::uniform_clamped(degree, n_coeffs), eps);
    std::vector<double> betas = m.betas();
    for (double& b : betas) b /= betas.back();
    return devstrip::MappingFunction::from_betas(m.knots(), betas);
}

} // namespace oracles
