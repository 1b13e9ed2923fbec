#pragma once

// Constructed inputs shared by the unit, CLI and acceptance suites. All of
// them are exact polynomial developables built as generalized cylinders
// gamma(u) + s*w, so the optimal parametrization mapping is known in closed
// form and near-zero warp is reachable.

#include "devstrip/devstrip.hpp"

namespace fixtures {

using devstrip::BSplineCurve;
using devstrip::KnotVector;
using devstrip::MappingFunction;
using devstrip::PolyCoeffs;
using devstrip::Vec3;

/// Single-span Bezier curve from power-basis coefficients (ascending degree).
inline BSplineCurve bezier_from_power(const PolyCoeffs<Vec3>& coeffs, int degree) {
    KnotVector kv;
    kv.degree = degree;
    kv.knots.assign(degree + 1, 0.0);
    kv.knots.insert(kv.knots.end(), degree + 1, 1.0);
    return BSplineCurve(kv, devstrip::power_to_bernstein(coeffs, degree));
}

struct CurvePair {
    BSplineCurve c1, c2;
};

/// Parabolic cylinder: C1(t) = (t^2, t^4, 0), C2(T) = (T, T^2, 1).
/// Exactly developable with sigma*(t) = t^2.
inline CurvePair cylinder() {
    PolyCoeffs<Vec3> p1 = {Vec3::Zero(), Vec3::Zero(), Vec3(1, 0, 0), Vec3::Zero(), Vec3(0, 1, 0)};
    PolyCoeffs<Vec3> p2 = {Vec3(0, 0, 1), Vec3(1, 0, 0), Vec3(0, 1, 0)};
    return {bezier_from_power(p1, 4), bezier_from_power(p2, 2)};
}

/// S-shaped planar profile gamma(u) = (u, 4u^3 - 6u^2 + 3u, 0), swept along z.
/// C1(t) = gamma(t^2), C2(T) = gamma(T) + (0,0,1); sigma*(t) = t^2.
inline CurvePair fold() {
    auto gamma_power = [](double z_shift) {
        return PolyCoeffs<Vec3>{Vec3(0, 0, z_shift), Vec3(1, 3, 0), Vec3(0, -6, 0), Vec3(0, 4, 0)};
    };
    // gamma(t^2): substitute u = t^2
    PolyCoeffs<Vec3> c1(7, Vec3::Zero());
    c1[2] = Vec3(1, 3, 0);
    c1[4] = Vec3(0, -6, 0);
    c1[6] = Vec3(0, 4, 0);
    return {bezier_from_power(c1, 6), bezier_from_power(gamma_power(1.0), 3)};
}

/// Twisted-cubic cylinder (nonplanar rails): gamma(u) = (u, u^2, u^3),
/// C1(t) = gamma(t^2), C2(T) = gamma(T) + (0,0,1); sigma*(t) = t^2.
inline CurvePair helix() {
    PolyCoeffs<Vec3> c1(7, Vec3::Zero());
    c1[2] = Vec3(1, 0, 0);
    c1[4] = Vec3(0, 1, 0);
    c1[6] = Vec3(0, 0, 1);
    PolyCoeffs<Vec3> c2 = {Vec3(0, 0, 1), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)};
    return {bezier_from_power(c1, 6), bezier_from_power(c2, 3)};
}

/// Cylinder-family instance whose exact mapping t^3 is NOT representable by a
/// quadratic spline, so approximation power (degree, coefficient count)
/// shows: C1(t) = (t^3, t^6, 0), C2(T) = (T, T^2, 1); sigma*(t) = t^3.
inline CurvePair ablation() {
    PolyCoeffs<Vec3> c1(7, Vec3::Zero());
    c1[3] = Vec3(1, 0, 0);
    c1[6] = Vec3(0, 1, 0);
    PolyCoeffs<Vec3> c2 = {Vec3(0, 0, 1), Vec3(1, 0, 0), Vec3(0, 1, 0)};
    return {bezier_from_power(c1, 6), bezier_from_power(c2, 2)};
}

/// Degree-3 curve pair on the knot vector [0,0,0,0,0.5,1,1,1,1] (5 control
/// points each), used by the structural conversion checks.
inline CurvePair two_span_cubics() {
    KnotVector kv(3, {0, 0, 0, 0, 0.5, 1, 1, 1, 1});
    std::vector<Vec3> p1 = {{0, 0, 0}, {0.25, 0.35, 0.05}, {0.5, 0.45, 0.1},
                            {0.75, 0.3, 0.05}, {1, 0.1, 0}};
    std::vector<Vec3> p2 = {{0, 0.1, 1}, {0.3, 0.5, 0.95}, {0.55, 0.6, 1.0},
                            {0.8, 0.4, 1.05}, {1, 0.2, 1}};
    return {BSplineCurve(kv, p1), BSplineCurve(kv, p2)};
}

/// A quadratic 10-coefficient mapping on the near-uniform knot vector of the
/// two-span worked example, shaped like t^2 (so the inverse image of 0.5 is a
/// new breakpoint).
inline MappingFunction quadratic_10coeff_mapping() {
    KnotVector kv(2, {0, 0, 0, 1.0 / 6, 5.0 / 18, 7.0 / 18, 0.5, 11.0 / 18, 13.0 / 18,
                      5.0 / 6, 1, 1, 1});
    std::vector<double> betas = devstrip::greville(kv);
    for (double& b : betas) b = b * b;
    return MappingFunction::from_betas(kv, betas);
}

/// A reproducible nontrivial monotone mapping for property tests.
inline MappingFunction wavy_mapping(int degree = 2, int n_coeffs = 8) {
    MappingFunction id = MappingFunction::identity(degree, n_coeffs);
    std::vector<double> eps = id.epsilons();
    for (size_t j = 0; j < eps.size(); ++j) eps[j] *= 1.0 + 0.35 * std::sin(2.7 * j + 0.4);
    MappingFunction m = MappingFunction::from_epsilons(id.knots(), eps);
    // renormalize to sigma(1) = 1
    std::vector<double> betas = m.betas();
    for (double& b : betas) b /= betas.back();
    return MappingFunction::from_betas(id.knots(), betas);
}

} // namespace fixtures
