#pragma once

#include <vector>

#include "devstrip/curve.hpp"

namespace devstrip {

/// Power-basis polynomial coefficients, ascending degree. T is double for
/// scalar polynomials or Vec3 for curve coordinates.
template <typename T>
using PolyCoeffs = std::vector<T>;

namespace detail {
inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    long double r = 1.0L;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return static_cast<double>(r);
}
template <typename T>
T poly_zero();
template <>
inline double poly_zero<double>() { return 0.0; }
template <>
inline Vec3 poly_zero<Vec3>() { return Vec3::Zero(); }
} // namespace detail

template <typename T>
T eval_power(const PolyCoeffs<T>& a, double t) {
    T r = detail::poly_zero<T>();
    for (size_t i = a.size(); i-- > 0;) r = r * t + a[i];
    return r;
}

template <typename T>
PolyCoeffs<T> poly_mul(const PolyCoeffs<T>& a, const PolyCoeffs<double>& b) {
    PolyCoeffs<T> out(a.size() + b.size() - 1, detail::poly_zero<T>());
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

/// outer(inner(t)) in the power basis (Horner over polynomial arithmetic).
/// Result degree = deg(outer) * deg(inner).
template <typename T>
PolyCoeffs<T> compose_polynomials(const PolyCoeffs<T>& outer, const PolyCoeffs<double>& inner) {
    PolyCoeffs<T> result(1, outer.back());
    for (size_t k = outer.size() - 1; k-- > 0;) {
        result = poly_mul(result, inner);
        result[0] += outer[k];
    }
    return result;
}

/// Bernstein coefficients of degree D for a power-basis polynomial of degree
/// <= D, via t^k = sum_i C(i,k)/C(D,k) B_{i,D}(t). Long-double accumulation.
template <typename T>
std::vector<T> power_to_bernstein(const PolyCoeffs<T>& a, int D) {
    if (static_cast<int>(a.size()) - 1 > D)
        throw std::domain_error("power_to_bernstein: polynomial degree exceeds target");
    std::vector<T> b(D + 1, detail::poly_zero<T>());
    for (int i = 0; i <= D; ++i) {
        for (int k = 0; k < static_cast<int>(a.size()); ++k) {
            if (k > i) break;
            const double w = detail::binomial(i, k) / detail::binomial(D, k);
            b[i] += w * a[k];
        }
    }
    return b;
}

/// Inverse of power_to_bernstein: power coefficients of a Bernstein-form
/// polynomial, a_k = C(D,k) * sum_{i<=k} (-1)^{k-i} C(k,i) b_i.
template <typename T>
PolyCoeffs<T> bernstein_to_power(const std::vector<T>& b) {
    const int D = static_cast<int>(b.size()) - 1;
    PolyCoeffs<T> a(D + 1, detail::poly_zero<T>());
    for (int k = 0; k <= D; ++k) {
        T s = detail::poly_zero<T>();
        for (int i = 0; i <= k; ++i) {
            const double sign = ((k - i) % 2 == 0) ? 1.0 : -1.0;
            s += sign * detail::binomial(k, i) * b[i];
        }
        a[k] = detail::binomial(D, k) * s;
    }
    return a;
}

inline PolyCoeffs<Vec3> bezier_to_power(const BezierSegment& seg) {
    return bernstein_to_power(seg.control_points);
}

} // namespace devstrip
