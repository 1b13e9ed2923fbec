#pragma once

#include "devstrip/polynomial.hpp"
#include "devstrip/surface.hpp"

namespace devstrip {

/// Degree 1 x pd tensor-product B-spline surface: two control rows over a
/// shared t-knot vector with full interior multiplicity.
struct BSplineSurface {
    int degree_t = 0;                 // degree_s is always 1
    KnotVector knots_t;               // interior multiplicity = degree_t
    std::vector<Vec3> row0, row1;     // control net rows at s=0 and s=1

    static constexpr int degree_s = 1;
    KnotVector knots_s() const { return KnotVector(1, {0.0, 0.0, 1.0, 1.0}); }

    int num_pieces() const { return static_cast<int>(knots_t.distinct_interior().size()) + 1; }

    Vec3 eval(double s, double t) const {
        if (s < 0.0 || s > 1.0 || t < 0.0 || t > 1.0)
            throw std::domain_error("BSplineSurface::eval: (s,t) outside unit square");
        const int span = find_span(knots_t, t);
        const auto N = basis_functions(knots_t, t, span);
        Vec3 p0 = Vec3::Zero(), p1 = Vec3::Zero();
        for (int j = 0; j <= degree_t; ++j) {
            p0 += N[j] * row0[span - degree_t + j];
            p1 += N[j] * row1[span - degree_t + j];
        }
        return (1.0 - s) * p0 + s * p1;
    }

    BSplineCurve boundary_curve(int which) const {
        return BSplineCurve(knots_t, which == 0 ? row0 : row1);
    }
};

/// Placement of the output's interior t-knots.
enum class KnotMode {
    Uniform,        // j/h spacing (the conventional clamped uniform layout)
    SpanPreserving, // source breakpoints kept, so output t equals strip t
};

/// Step 1 of the conversion: refine the three knot vectors so that sigma and
/// C1 share breakpoints and C2's breakpoints are their image under sigma.
struct AlignedKnotTriple {
    std::vector<double> breakpoints_t; // v_0=0 < ... < v_h+1=1, merged at kKnotTol
    std::vector<double> breakpoints_T; // sigma(v_i)
    BSplineCurve sigma_refined;        // scalar spline (coefficient in x)
    BSplineCurve c1_refined;
    BSplineCurve c2_refined;
};

inline AlignedKnotTriple step1_align_knots(const BSplineCurve& c1, const BSplineCurve& c2,
                                           const MappingFunction& m) {
    AlignedKnotTriple out;
    // Gamma_sigma* = Gamma_sigma + { sigma^{-1}(Gamma_2 interior), Gamma_1 interior }
    std::vector<double> candidates;
    for (double T : c2.knots().distinct_interior()) {
        if (T <= m.range_lo() + kKnotTol || T >= m.range_hi() - kKnotTol) continue;
        bool strictly = true;
        const double v = m.inverse(T, &strictly);
        if (!strictly)
            throw ConversionError("step1_align_knots: sigma is flat at knot T=" +
                                  std::to_string(T));
        candidates.push_back(v);
    }
    for (double v : c1.knots().distinct_interior()) candidates.push_back(v);

    std::vector<double> breaks = m.knots().distinct_interior();
    for (double v : candidates) {
        if (v <= kKnotTol || v >= 1.0 - kKnotTol) continue;
        bool dup = false;
        for (double b : breaks)
            if (std::abs(b - v) <= kKnotTol) { dup = true; break; }
        if (!dup) breaks.push_back(v);
    }
    std::sort(breaks.begin(), breaks.end());

    out.breakpoints_t.push_back(0.0);
    out.breakpoints_t.insert(out.breakpoints_t.end(), breaks.begin(), breaks.end());
    out.breakpoints_t.push_back(1.0);
    for (double v : out.breakpoints_t) out.breakpoints_T.push_back(m.eval(v));

    out.sigma_refined = m.to_scalar_spline().refined_with(breaks);
    out.c1_refined = c1.refined_with(breaks);
    std::vector<double> image(breaks.size());
    for (size_t i = 0; i < breaks.size(); ++i) image[i] = m.eval(breaks[i]);
    out.c2_refined = c2.refined_with(image);
    return out;
}

/// Step 3: compose one Bezier piece of C2 (degree p, over [sigma(a),sigma(b)])
/// with the matching Bezier piece of sigma (degree d, over [a,b]) into a
/// degree p*d Bezier curve in the local parameter of [a,b]. Realized in the
/// power basis, then converted back to Bernstein form.
inline BezierSegment step3_reparametrize_segment(const BezierSegment& c2_seg,
                                                 const BezierSegment& sigma_seg) {
    const double sa = sigma_seg.control_points.front().x();
    const double sb = sigma_seg.control_points.back().x();
    if (sb - sa < 1e-12)
        throw ConversionError("step3_reparametrize_segment: flat sigma piece over [" +
                              std::to_string(sigma_seg.interval_lo) + "," +
                              std::to_string(sigma_seg.interval_hi) + "]");
    // inner polynomial T_hat(t_hat) = (sigma_hat(t_hat) - sigma(a)) / (sigma(b) - sigma(a))
    std::vector<double> sig_coeffs(sigma_seg.control_points.size());
    for (size_t i = 0; i < sig_coeffs.size(); ++i) sig_coeffs[i] = sigma_seg.control_points[i].x();
    PolyCoeffs<double> inner = bernstein_to_power(sig_coeffs);
    inner[0] -= sa;
    for (double& c : inner) c /= (sb - sa);

    PolyCoeffs<Vec3> outer = bezier_to_power(c2_seg);
    PolyCoeffs<Vec3> composed = compose_polynomials(outer, inner);

    const int pd = c2_seg.degree * sigma_seg.degree;
    BezierSegment out;
    out.degree = pd;
    out.control_points = power_to_bernstein(composed, pd);
    out.interval_lo = sigma_seg.interval_lo;
    out.interval_hi = sigma_seg.interval_hi;
    return out;
}

/// Step 4: elevate one Bezier piece of C1 to degree pd via the power basis.
inline BezierSegment step4_elevate_segment(const BezierSegment& c1_seg, int pd) {
    if (pd == c1_seg.degree) return c1_seg;
    BezierSegment out;
    out.degree = pd;
    out.control_points = power_to_bernstein(bezier_to_power(c1_seg), pd);
    out.interval_lo = c1_seg.interval_lo;
    out.interval_hi = c1_seg.interval_hi;
    return out;
}

/// Step 5: stitch matching piece lists into the surface (shared interface
/// control points, interior t-knot multiplicity pd).
inline BSplineSurface assemble(const std::vector<BezierSegment>& c1_pieces,
                               const std::vector<BezierSegment>& c2_pieces, KnotMode mode) {
    if (c1_pieces.empty() || c1_pieces.size() != c2_pieces.size())
        throw std::invalid_argument("assemble: piece count mismatch");
    const int pd = c1_pieces.front().degree;
    for (size_t j = 0; j < c1_pieces.size(); ++j)
        if (c1_pieces[j].degree != pd || c2_pieces[j].degree != pd)
            throw std::invalid_argument("assemble: piece degree mismatch");

    const size_t h1 = c1_pieces.size();
    BSplineSurface srf;
    srf.degree_t = pd;
    srf.knots_t.degree = pd;
    srf.knots_t.knots.assign(pd + 1, 0.0);
    for (size_t j = 0; j + 1 < h1; ++j) {
        const double v = (mode == KnotMode::Uniform)
                             ? static_cast<double>(j + 1) / static_cast<double>(h1)
                             : c1_pieces[j].interval_hi;
        srf.knots_t.knots.insert(srf.knots_t.knots.end(), pd, v);
    }
    srf.knots_t.knots.insert(srf.knots_t.knots.end(), pd + 1, 1.0);

    for (size_t j = 0; j < h1; ++j) {
        const size_t start = (j == 0) ? 0 : 1;
        for (size_t i = start; i <= static_cast<size_t>(pd); ++i) {
            srf.row0.push_back(c1_pieces[j].control_points[i]);
            srf.row1.push_back(c2_pieces[j].control_points[i]);
        }
    }
    return srf;
}

/// Algorithm-1 pipeline: align knots, extract Bezier pieces, reparametrize
/// C2, elevate C1, assemble. Requires equal curve degrees (preprocess first).
inline BSplineSurface convert(const RuledStrip& strip, KnotMode mode = KnotMode::Uniform) {
    const auto& c1 = strip.c1;
    const auto& c2 = strip.c2;
    const auto& m = strip.sigma;
    if (c1.degree() != c2.degree())
        throw std::invalid_argument("convert: curves must share a degree (run make_compatible)");
    const int p = c1.degree();
    const int d = m.degree();
    const int pd = p * d;

    const AlignedKnotTriple triple = step1_align_knots(c1, c2, m);
    const auto& v = triple.breakpoints_t;
    const auto& V = triple.breakpoints_T;

    std::vector<BezierSegment> c1_pd, c2_pd;
    for (size_t j = 0; j + 1 < v.size(); ++j) {
        BezierSegment sig_seg = triple.sigma_refined.bezier_segment(v[j], v[j + 1]);
        if (V[j + 1] - V[j] < 1e-12)
            throw ConversionError("convert: flat sigma piece over [" + std::to_string(v[j]) +
                                  "," + std::to_string(v[j + 1]) + "]");
        BezierSegment c2_seg = triple.c2_refined.bezier_segment(V[j], V[j + 1]);
        c2_pd.push_back(step3_reparametrize_segment(c2_seg, sig_seg));
        BezierSegment c1_seg = triple.c1_refined.bezier_segment(v[j], v[j + 1]);
        c1_pd.push_back(step4_elevate_segment(c1_seg, pd));
    }
    return assemble(c1_pd, c2_pd, mode);
}

} // namespace devstrip
