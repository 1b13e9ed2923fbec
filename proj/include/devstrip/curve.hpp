#pragma once

#include <vector>

#include "devstrip/knots.hpp"

namespace devstrip {

/// Polynomial Bezier piece of a B-spline curve, together with the parameter
/// interval of the source curve it came from. Evaluating at local t in [0,1]
/// equals evaluating the source at a + t*(b-a).
struct BezierSegment {
    int degree = 0;
    std::vector<Vec3> control_points;
    double interval_lo = 0.0;
    double interval_hi = 1.0;

    Vec3 eval(double t) const {
        std::vector<Vec3> q = control_points;
        for (int k = 1; k <= degree; ++k)
            for (int i = 0; i <= degree - k; ++i)
                q[i] = (1.0 - t) * q[i] + t * q[i + 1];
        return q[0];
    }

    /// Classical single-step degree elevation.
    BezierSegment elevate_once() const {
        BezierSegment out;
        out.degree = degree + 1;
        out.interval_lo = interval_lo;
        out.interval_hi = interval_hi;
        out.control_points.resize(degree + 2);
        out.control_points.front() = control_points.front();
        out.control_points.back() = control_points.back();
        for (int i = 1; i <= degree; ++i) {
            const double a = static_cast<double>(i) / (degree + 1);
            out.control_points[i] = a * control_points[i - 1] + (1.0 - a) * control_points[i];
        }
        return out;
    }
};

class BSplineCurve {
public:
    BSplineCurve() = default;
    BSplineCurve(KnotVector kv, std::vector<Vec3> points)
        : kv_(std::move(kv)), points_(std::move(points)) {
        kv_.validate();
        if (static_cast<int>(points_.size()) != kv_.num_basis())
            throw std::invalid_argument("BSplineCurve: control point count does not match knots");
    }

    int degree() const { return kv_.degree; }
    const KnotVector& knots() const { return kv_; }
    const std::vector<Vec3>& control_points() const { return points_; }
    int num_points() const { return static_cast<int>(points_.size()); }

    Vec3 eval(double t) const {
        if (t < 0.0 || t > 1.0) throw std::domain_error("BSplineCurve::eval: t outside [0,1]");
        return eval_ext(t);
    }

    /// Evaluation with polynomial extension beyond [0,1] (boundary span
    /// polynomials extended), used while an optimizer iterate overshoots.
    Vec3 eval_ext(double t) const {
        const int span = find_span(kv_, t, true);
        const auto N = basis_functions(kv_, t, span);
        Vec3 p = Vec3::Zero();
        for (int j = 0; j <= kv_.degree; ++j) p += N[j] * points_[span - kv_.degree + j];
        return p;
    }

    /// Derivatives of order 0..k at t; orders above the degree are zero.
    std::vector<Vec3> derivatives(double t, int k) const {
        if (t < 0.0 || t > 1.0)
            throw std::domain_error("BSplineCurve::derivatives: t outside [0,1]");
        return derivatives_ext(t, k);
    }

    std::vector<Vec3> derivatives_ext(double t, int k) const {
        const int span = find_span(kv_, t, true);
        const auto ders = basis_derivatives(kv_, t, span, k);
        std::vector<Vec3> out(k + 1, Vec3::Zero());
        for (int o = 0; o <= k; ++o)
            for (int j = 0; j <= kv_.degree; ++j)
                out[o] += ders[o][j] * points_[span - kv_.degree + j];
        return out;
    }

    /// Boehm single-value knot insertion, repeated `times` times.
    BSplineCurve insert_knot(double u, int times = 1) const {
        if (u <= kKnotTol || u >= 1.0 - kKnotTol)
            throw std::domain_error("insert_knot: u must be strictly interior");
        if (kv_.multiplicity(u) + times > kv_.degree)
            throw std::invalid_argument("insert_knot: interior multiplicity would exceed degree");
        BSplineCurve c = *this;
        for (int r = 0; r < times; ++r) c = c.insert_once(u);
        return c;
    }

    /// Inserts each value once unless it is already a knot (tolerance kKnotTol).
    BSplineCurve refined_with(const std::vector<double>& values) const {
        BSplineCurve c = *this;
        for (double v : values) {
            if (v <= kKnotTol || v >= 1.0 - kKnotTol) continue;
            if (c.kv_.multiplicity(v) == 0) c = c.insert_once(v);
        }
        return c;
    }

    /// The curve restricted to [a,b], reparametrized to [0,1]. Interior knots
    /// of (a,b) are kept (rescaled).
    BSplineCurve subcurve(double a, double b) const {
        if (!(a < b) || a < -kKnotTol || b > 1.0 + kKnotTol)
            throw std::domain_error("subcurve: invalid interval");
        const int p = kv_.degree;
        BSplineCurve c = *this;
        if (a > kKnotTol) {
            const int m = c.kv_.multiplicity(a);
            for (int r = m; r < p; ++r) c = c.insert_once(a);
        }
        if (b < 1.0 - kKnotTol) {
            const int m = c.kv_.multiplicity(b);
            for (int r = m; r < p; ++r) c = c.insert_once(b);
        }
        const auto& U = c.kv_.knots;
        // first control point of the restriction
        int first = 0;
        if (a > kKnotTol) {
            int f = 0;
            while (std::abs(U[f] - a) > kKnotTol) ++f;
            first = f - 1;
        }
        KnotVector sub;
        sub.degree = p;
        sub.knots.assign(p + 1, 0.0);
        for (double u : U)
            if (u > a + kKnotTol && u < b - kKnotTol)
                sub.knots.push_back((u - a) / (b - a));
        sub.knots.insert(sub.knots.end(), p + 1, 1.0);
        const int count = sub.num_basis();
        std::vector<Vec3> pts(c.points_.begin() + first, c.points_.begin() + first + count);
        return BSplineCurve(std::move(sub), std::move(pts));
    }

    /// One Bezier piece per distinct interior span of the (clamped) knot vector.
    std::vector<BezierSegment> extract_bezier_segments() const {
        std::vector<double> breaks = kv_.distinct_interior();
        breaks.insert(breaks.begin(), 0.0);
        breaks.push_back(1.0);
        std::vector<BezierSegment> segs;
        for (size_t j = 0; j + 1 < breaks.size(); ++j)
            segs.push_back(bezier_segment(breaks[j], breaks[j + 1]));
        return segs;
    }

    /// Bezier control points of the curve over [a,b]; the interval must not
    /// contain interior knots strictly inside.
    BezierSegment bezier_segment(double a, double b) const {
        BSplineCurve sub = subcurve(a, b);
        if (!sub.kv_.distinct_interior().empty())
            throw std::invalid_argument("bezier_segment: interval contains interior knots");
        BezierSegment seg;
        seg.degree = kv_.degree;
        seg.control_points = sub.points_;
        seg.interval_lo = a;
        seg.interval_hi = b;
        return seg;
    }

    /// Degree elevation via per-span Bezier elevation; the result carries full
    /// interior multiplicity, the trace is unchanged.
    BSplineCurve elevate_degree(int target) const {
        if (target < kv_.degree)
            throw std::domain_error("elevate_degree: target below current degree");
        if (target == kv_.degree) return *this;
        auto segs = extract_bezier_segments();
        for (auto& s : segs)
            while (s.degree < target) s = s.elevate_once();
        return assemble_from_bezier(segs, target);
    }

    /// Stitch contiguous Bezier pieces back into a clamped B-spline with full
    /// interior multiplicity; consecutive pieces share one control point.
    static BSplineCurve assemble_from_bezier(const std::vector<BezierSegment>& segs, int degree) {
        KnotVector kv;
        kv.degree = degree;
        kv.knots.assign(degree + 1, 0.0);
        std::vector<Vec3> pts;
        for (size_t j = 0; j < segs.size(); ++j) {
            if (segs[j].degree != degree)
                throw std::invalid_argument("assemble_from_bezier: degree mismatch");
            const size_t start = (j == 0) ? 0 : 1;
            for (size_t i = start; i < segs[j].control_points.size(); ++i)
                pts.push_back(segs[j].control_points[i]);
            if (j + 1 < segs.size())
                kv.knots.insert(kv.knots.end(), degree, segs[j].interval_hi);
        }
        kv.knots.insert(kv.knots.end(), degree + 1, 1.0);
        return BSplineCurve(std::move(kv), std::move(pts));
    }

    BSplineCurve reversed() const {
        KnotVector kv;
        kv.degree = kv_.degree;
        kv.knots.resize(kv_.knots.size());
        for (size_t i = 0; i < kv_.knots.size(); ++i)
            kv.knots[i] = 1.0 - kv_.knots[kv_.knots.size() - 1 - i];
        std::vector<Vec3> pts(points_.rbegin(), points_.rend());
        return BSplineCurve(std::move(kv), std::move(pts));
    }

private:
    BSplineCurve insert_once(double u) const {
        const int p = kv_.degree;
        const int k = find_span(kv_, u);
        const auto& U = kv_.knots;
        std::vector<Vec3> Q(points_.size() + 1);
        for (int i = 0; i <= k - p; ++i) Q[i] = points_[i];
        for (int i = k - p + 1; i <= k; ++i) {
            const double alpha = (u - U[i]) / (U[i + p] - U[i]);
            Q[i] = alpha * points_[i] + (1.0 - alpha) * points_[i - 1];
        }
        for (size_t i = k + 1; i < Q.size(); ++i) Q[i] = points_[i - 1];
        KnotVector kv = kv_;
        kv.knots.insert(kv.knots.begin() + k + 1, u);
        BSplineCurve out;
        out.kv_ = std::move(kv);
        out.points_ = std::move(Q);
        return out;
    }

    KnotVector kv_;
    std::vector<Vec3> points_;
};

} // namespace devstrip
