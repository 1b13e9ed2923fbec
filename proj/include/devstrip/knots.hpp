#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "devstrip/core.hpp"

namespace devstrip {

/// Clamped nondecreasing knot sequence over [0,1] with an associated degree.
struct KnotVector {
    int degree = 0;
    std::vector<double> knots;

    KnotVector() = default;
    KnotVector(int deg, std::vector<double> k) : degree(deg), knots(std::move(k)) {}

    /// Number of basis functions (= control point count when paired with a curve).
    int num_basis() const { return static_cast<int>(knots.size()) - degree - 1; }

    bool is_clamped() const {
        if (static_cast<int>(knots.size()) < 2 * (degree + 1)) return false;
        for (int i = 0; i <= degree; ++i) {
            if (std::abs(knots[i]) > kKnotTol) return false;
            if (std::abs(knots[knots.size() - 1 - i] - 1.0) > kKnotTol) return false;
        }
        return std::is_sorted(knots.begin(), knots.end());
    }

    void validate() const {
        if (degree < 0) throw std::invalid_argument("KnotVector: negative degree");
        if (!std::is_sorted(knots.begin(), knots.end()))
            throw std::invalid_argument("KnotVector: knots must be nondecreasing");
        if (!is_clamped()) throw std::invalid_argument("KnotVector: not clamped on [0,1]");
        // interior multiplicity must not exceed the degree
        const double* interior_lo = knots.data() + degree + 1;
        const double* interior_hi = knots.data() + knots.size() - degree - 1;
        for (const double* p = interior_lo; p < interior_hi;) {
            const double* q = p;
            while (q < interior_hi && *q - *p <= kKnotTol) ++q;
            if (q - p > degree)
                throw std::invalid_argument("KnotVector: interior multiplicity exceeds degree");
            p = q;
        }
    }

    /// Multiplicity of the value u in the full knot sequence (tolerance kKnotTol).
    int multiplicity(double u) const {
        int m = 0;
        for (double k : knots)
            if (std::abs(k - u) <= kKnotTol) ++m;
        return m;
    }

    /// Distinct interior knot values in (0,1), merged at kKnotTol.
    std::vector<double> distinct_interior() const {
        std::vector<double> out;
        for (size_t i = degree + 1; i + degree + 1 < knots.size(); ++i) {
            if (out.empty() || knots[i] - out.back() > kKnotTol) out.push_back(knots[i]);
        }
        return out;
    }

    /// Uniform clamped knot vector with n_basis coefficients.
    static KnotVector uniform_clamped(int degree, int n_basis) {
        if (n_basis < degree + 1)
            throw std::domain_error("KnotVector: need at least degree+1 basis functions");
        KnotVector kv;
        kv.degree = degree;
        kv.knots.assign(degree + 1, 0.0);
        const int n_interior = n_basis - degree - 1;
        for (int j = 1; j <= n_interior; ++j)
            kv.knots.push_back(static_cast<double>(j) / (n_interior + 1));
        kv.knots.insert(kv.knots.end(), degree + 1, 1.0);
        return kv;
    }
};

/// Span index i with knots[i] <= t < knots[i+1]; t=1 maps to the last
/// nondegenerate span. With extrapolate=true, t outside [0,1] selects the
/// boundary span (basis polynomials extend smoothly beyond it).
inline int find_span(const KnotVector& kv, double t, bool extrapolate = false) {
    if (!extrapolate && (t < 0.0 || t > 1.0))
        throw std::domain_error("find_span: parameter outside [0,1]");
    const int n = kv.num_basis() - 1;
    if (t >= kv.knots[n + 1]) return n;
    if (t <= kv.knots[kv.degree]) return kv.degree;
    auto it = std::upper_bound(kv.knots.begin() + kv.degree + 1, kv.knots.begin() + n + 1, t);
    return static_cast<int>(it - kv.knots.begin()) - 1;
}

/// The degree+1 nonzero basis values at t (iterative triangular scheme).
inline std::vector<double> basis_functions(const KnotVector& kv, double t, int span) {
    const int p = kv.degree;
    const auto& U = kv.knots;
    std::vector<double> N(p + 1, 0.0), left(p + 1), right(p + 1);
    N[0] = 1.0;
    for (int j = 1; j <= p; ++j) {
        left[j] = t - U[span + 1 - j];
        right[j] = U[span + j] - t;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            const double temp = N[r] / (right[r + 1] + left[j - r]);
            N[r] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        N[j] = saved;
    }
    return N;
}

/// Basis values and derivatives up to order n_ders: result[k][j] is the k-th
/// derivative of the (span-degree+j)-th basis function at t.
inline std::vector<std::vector<double>> basis_derivatives(const KnotVector& kv, double t,
                                                          int span, int n_ders) {
    const int p = kv.degree;
    const auto& U = kv.knots;
    const int n = std::min(n_ders, p);
    std::vector<std::vector<double>> ders(n_ders + 1, std::vector<double>(p + 1, 0.0));
    std::vector<std::vector<double>> ndu(p + 1, std::vector<double>(p + 1, 0.0));
    std::vector<double> left(p + 1), right(p + 1);
    ndu[0][0] = 1.0;
    for (int j = 1; j <= p; ++j) {
        left[j] = t - U[span + 1 - j];
        right[j] = U[span + j] - t;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            ndu[j][r] = right[r + 1] + left[j - r];
            const double temp = ndu[r][j - 1] / ndu[j][r];
            ndu[r][j] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        ndu[j][j] = saved;
    }
    for (int j = 0; j <= p; ++j) ders[0][j] = ndu[j][p];

    std::vector<std::vector<double>> a(2, std::vector<double>(p + 1, 0.0));
    for (int r = 0; r <= p; ++r) {
        int s1 = 0, s2 = 1;
        a[0][0] = 1.0;
        for (int k = 1; k <= n; ++k) {
            double d = 0.0;
            const int rk = r - k, pk = p - k;
            if (r >= k) {
                a[s2][0] = a[s1][0] / ndu[pk + 1][rk];
                d = a[s2][0] * ndu[rk][pk];
            }
            const int j1 = (rk >= -1) ? 1 : -rk;
            const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
            for (int j = j1; j <= j2; ++j) {
                a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][rk + j];
                d += a[s2][j] * ndu[rk + j][pk];
            }
            if (r <= pk) {
                a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][r];
                d += a[s2][k] * ndu[r][pk];
            }
            ders[k][r] = d;
            std::swap(s1, s2);
        }
    }
    double r = p;
    for (int k = 1; k <= n; ++k) {
        for (int j = 0; j <= p; ++j) ders[k][j] *= r;
        r *= (p - k);
    }
    return ders;
}

/// Greville abscissae: knot averages at which spline coefficients reproduce
/// linear functions.
inline std::vector<double> greville(const KnotVector& kv) {
    std::vector<double> g(kv.num_basis());
    for (int i = 0; i < kv.num_basis(); ++i) {
        double s = 0.0;
        for (int j = 1; j <= kv.degree; ++j) s += kv.knots[i + j];
        g[i] = kv.degree > 0 ? s / kv.degree : 0.5 * (kv.knots[i] + kv.knots[i + 1]);
    }
    return g;
}

} // namespace devstrip
