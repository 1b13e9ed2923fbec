#pragma once

#include <array>
#include <tuple>

#include <Eigen/Dense>

#include "devstrip/polynomial.hpp"

namespace devstrip {

/// User-directed extension of one curve end to an extra point.
struct ExtensionRequest {
    enum class Curve { C1, C2 };
    enum class End { Start, End };
    Curve which_curve = Curve::C1;
    End which_end = End::End;
    Vec3 target_point = Vec3::Zero();
};

/// Brings both curves to the same degree (max of the two) and merges the knot
/// vectors (union with multiplicities). Traces are unchanged.
inline std::pair<BSplineCurve, BSplineCurve> make_compatible(const BSplineCurve& a,
                                                             const BSplineCurve& b) {
    BSplineCurve ca = a, cb = b;
    const int p = std::max(ca.degree(), cb.degree());
    if (ca.degree() < p) ca = ca.elevate_degree(p);
    if (cb.degree() < p) cb = cb.elevate_degree(p);

    auto merge_into = [p](BSplineCurve& target, const KnotVector& other) {
        for (double u : other.distinct_interior()) {
            const int want = other.multiplicity(u);
            const int have = target.knots().multiplicity(u);
            if (want > have) target = target.insert_knot(u, std::min(want, p) - have);
        }
    };
    const KnotVector ka = ca.knots(), kb = cb.knots();
    merge_into(ca, kb);
    merge_into(cb, ka);
    return {std::move(ca), std::move(cb)};
}

namespace detail {

inline double polyline_length(const BSplineCurve& c, int samples = 200) {
    double len = 0.0;
    Vec3 prev = c.eval(0.0);
    for (int i = 1; i < samples; ++i) {
        const Vec3 p = c.eval(static_cast<double>(i) / (samples - 1));
        len += (p - prev).norm();
        prev = p;
    }
    return len;
}

/// Appends one degree-p Bezier piece beyond t=1 that joins the curve with
/// C^{p-1} continuity and ends at `target`. `delta` is the parameter length
/// of the extension before renormalization to [0,1].
inline BSplineCurve extend_at_end(const BSplineCurve& c, const Vec3& target, double delta) {
    const int p = c.degree();
    const auto ders = c.derivatives(1.0, p - 1);

    // forward differences of the extension Bezier from the junction derivatives
    std::vector<Vec3> fwd(p + 1, Vec3::Zero());
    double fact = 1.0; // p! / (p-j)!
    for (int j = 0; j < p; ++j) {
        fwd[j] = ders[j] * std::pow(delta, j) / fact;
        fact *= (p - j);
    }
    std::vector<Vec3> Q(p + 1, Vec3::Zero());
    for (int j = 0; j < p; ++j) {
        Vec3 q = Vec3::Zero();
        for (int i = 0; i <= j; ++i) q += detail::binomial(j, i) * fwd[i];
        Q[j] = q;
    }
    Q[p] = target;

    // new parameter range [0, 1+delta], then rescaled to [0,1]
    const double scale = 1.0 + delta;
    KnotVector kv;
    kv.degree = p;
    const auto& old = c.knots().knots;
    for (size_t i = 0; i + 1 < old.size(); ++i) kv.knots.push_back(old[i] / scale);
    kv.knots.insert(kv.knots.end(), p + 1, 1.0);
    std::vector<Vec3> pts = c.control_points();
    pts.insert(pts.end(), Q.begin() + 1, Q.end());
    return BSplineCurve(std::move(kv), std::move(pts));
}

} // namespace detail

/// Extends one end of the curve to pass through req.target_point with C^{p-1}
/// continuity at the junction. Returns the extended curve and the parameter
/// interval holding the original curve.
inline std::pair<BSplineCurve, std::array<double, 2>> extend_curve(const BSplineCurve& c,
                                                                   const ExtensionRequest& req) {
    const bool at_end = req.which_end == ExtensionRequest::End::End;
    const Vec3 endpoint = at_end ? c.control_points().back() : c.control_points().front();
    const double chord = (req.target_point - endpoint).norm();
    if (chord < 1e-12)
        throw std::invalid_argument("extend_curve: target coincides with the endpoint");
    const double len = std::max(detail::polyline_length(c), 1e-12);
    const double delta = chord / len;

    if (at_end) {
        BSplineCurve ext = detail::extend_at_end(c, req.target_point, delta);
        return {std::move(ext), {0.0, 1.0 / (1.0 + delta)}};
    }
    BSplineCurve ext = detail::extend_at_end(c.reversed(), req.target_point, delta).reversed();
    return {std::move(ext), {delta / (1.0 + delta), 1.0}};
}

/// Least-squares B-spline fit of an ordered polyline under chord-length
/// parameterization, with clamped endpoint interpolation.
struct PolylineFit {
    BSplineCurve curve;
    double max_residual = 0.0;
};

inline PolylineFit fit_polyline(const std::vector<Vec3>& points, int degree, int n_ctrl) {
    const int m = static_cast<int>(points.size());
    if (n_ctrl > m) throw std::invalid_argument("fit_polyline: more control points than data");
    if (n_ctrl < degree + 1) throw std::invalid_argument("fit_polyline: too few control points");

    // chord-length parameters
    std::vector<double> u(m, 0.0);
    for (int i = 1; i < m; ++i) u[i] = u[i - 1] + (points[i] - points[i - 1]).norm();
    const double total = u.back();
    if (total < 1e-14) throw std::invalid_argument("fit_polyline: points are not distinct");
    for (double& v : u) v /= total;

    const KnotVector kv = KnotVector::uniform_clamped(degree, n_ctrl);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, n_ctrl);
    for (int i = 0; i < m; ++i) {
        const int span = find_span(kv, u[i]);
        const auto N = basis_functions(kv, u[i], span);
        for (int j = 0; j <= degree; ++j) A(i, span - degree + j) = N[j];
    }

    std::vector<Vec3> ctrl(n_ctrl, Vec3::Zero());
    ctrl.front() = points.front();
    ctrl.back() = points.back();
    if (n_ctrl > 2) {
        Eigen::MatrixXd Ai = A.middleCols(1, n_ctrl - 2);
        Eigen::MatrixXd rhs(m, 3);
        for (int i = 0; i < m; ++i)
            rhs.row(i) = (points[i] - A(i, 0) * ctrl.front() - A(i, n_ctrl - 1) * ctrl.back())
                             .transpose();
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Ai);
        if (qr.rank() < n_ctrl - 2)
            throw std::runtime_error("fit_polyline: rank-deficient fitting system");
        Eigen::MatrixXd sol = qr.solve(rhs);
        for (int j = 0; j < n_ctrl - 2; ++j) ctrl[j + 1] = sol.row(j).transpose();
    }

    PolylineFit fit{BSplineCurve(kv, ctrl), 0.0};
    for (int i = 0; i < m; ++i)
        fit.max_residual = std::max(fit.max_residual, (fit.curve.eval(u[i]) - points[i]).norm());
    return fit;
}

/// Uniform similarity transform placing the joint control net of two curves
/// inside the unit box. Already-contained inputs get the identity transform.
struct BoxTransform {
    double scale = 1.0;
    Vec3 offset = Vec3::Zero(); // scaled = (p - offset) * scale

    Vec3 apply(const Vec3& p) const { return (p - offset) * scale; }
    Vec3 invert(const Vec3& p) const { return p / scale + offset; }
    bool is_identity() const { return scale == 1.0 && offset == Vec3::Zero(); }

    BSplineCurve apply(const BSplineCurve& c) const {
        std::vector<Vec3> pts = c.control_points();
        for (Vec3& p : pts) p = apply(p);
        return BSplineCurve(c.knots(), std::move(pts));
    }
    BSplineCurve invert(const BSplineCurve& c) const {
        std::vector<Vec3> pts = c.control_points();
        for (Vec3& p : pts) p = invert(p);
        return BSplineCurve(c.knots(), std::move(pts));
    }
};

inline std::tuple<BSplineCurve, BSplineCurve, BoxTransform> unit_box_scale(const BSplineCurve& a,
                                                                           const BSplineCurve& b) {
    Vec3 lo = a.control_points().front(), hi = lo;
    for (const auto* c : {&a, &b})
        for (const Vec3& p : c->control_points()) {
            lo = lo.cwiseMin(p);
            hi = hi.cwiseMax(p);
        }
    const double extent = (hi - lo).maxCoeff();
    if (extent < 1e-14) throw std::invalid_argument("unit_box_scale: degenerate (zero extent)");

    BoxTransform tf;
    if (!(lo.minCoeff() >= 0.0 && hi.maxCoeff() <= 1.0)) {
        tf.scale = 1.0 / extent;
        tf.offset = lo;
    }
    return {tf.apply(a), tf.apply(b), tf};
}

} // namespace devstrip
