#pragma once

#include <cmath>
#include <numeric>
#include <vector>

#include "devstrip/curve.hpp"

namespace devstrip {

/// Monotone scalar B-spline parametrization-mapping function sigma(t).
/// Coefficients are beta_i = sum_{j<=i} eps_j^2, so sigma is nondecreasing for
/// every choice of the free shape parameters eps.
class MappingFunction {
public:
    MappingFunction() = default;

    static MappingFunction from_epsilons(KnotVector kv, std::vector<double> eps) {
        kv.validate();
        if (static_cast<int>(eps.size()) != kv.num_basis())
            throw std::invalid_argument("MappingFunction: epsilon count must match knot arity");
        MappingFunction m;
        m.kv_ = std::move(kv);
        m.eps_ = std::move(eps);
        m.rebuild_betas();
        return m;
    }

    /// Builds eps from nondecreasing coefficients beta (tiny negative
    /// increments from rounding are clamped to zero).
    static MappingFunction from_betas(KnotVector kv, const std::vector<double>& betas) {
        std::vector<double> eps(betas.size());
        double prev = 0.0;
        for (size_t i = 0; i < betas.size(); ++i) {
            double inc = betas[i] - prev;
            if (inc < 0.0) {
                if (inc < -1e-9)
                    throw std::invalid_argument("MappingFunction: decreasing coefficients");
                inc = 0.0;
            }
            eps[i] = std::sqrt(inc);
            prev = betas[i];
        }
        return from_epsilons(std::move(kv), std::move(eps));
    }

    /// Identity mapping sigma(t)=t on a uniform clamped knot vector, exact by
    /// linear precision: beta = Greville abscissae.
    static MappingFunction identity(int degree, int n_coeffs) {
        if (n_coeffs < degree + 1)
            throw std::domain_error("MappingFunction::identity: too few coefficients");
        KnotVector kv = KnotVector::uniform_clamped(degree, n_coeffs);
        return from_betas(kv, greville(kv));
    }

    /// Identity mapping on a caller-supplied knot vector.
    static MappingFunction identity_on(KnotVector kv) {
        auto g = greville(kv);
        return from_betas(std::move(kv), g);
    }

    int degree() const { return kv_.degree; }
    int num_coeffs() const { return static_cast<int>(eps_.size()); }
    const KnotVector& knots() const { return kv_; }
    const std::vector<double>& epsilons() const { return eps_; }
    const std::vector<double>& betas() const { return beta_; }

    double eval(double t) const {
        if (t < 0.0 || t > 1.0) throw std::domain_error("MappingFunction::eval: t outside [0,1]");
        return eval_ext(t);
    }
    double operator()(double t) const { return eval(t); }

    double eval_ext(double t) const {
        const int span = find_span(kv_, t, true);
        const auto N = basis_functions(kv_, t, span);
        double s = 0.0;
        for (int j = 0; j <= kv_.degree; ++j) s += N[j] * beta_[span - kv_.degree + j];
        return s;
    }

    /// sigma'(t) >= 0 for all t, by the nondecreasing-coefficient construction.
    double eval_prime(double t) const {
        if (t < 0.0 || t > 1.0)
            throw std::domain_error("MappingFunction::eval_prime: t outside [0,1]");
        return eval_prime_ext(t);
    }

    double eval_prime_ext(double t) const {
        const int span = find_span(kv_, t, true);
        const auto ders = basis_derivatives(kv_, t, span, 1);
        double s = 0.0;
        for (int j = 0; j <= kv_.degree; ++j) s += ders[1][j] * beta_[span - kv_.degree + j];
        return s;
    }

    double range_lo() const { return beta_.front(); } // sigma(0)
    double range_hi() const { return beta_.back(); }  // sigma(1)

    /// Preimage of T under sigma: bisection bracket then Newton refinement.
    /// On a flat plateau containing T the leftmost preimage is returned and
    /// *strictly (if given) is set false.
    double inverse(double T, bool* strictly = nullptr) const {
        if (strictly) *strictly = true;
        const double lo_v = range_lo(), hi_v = range_hi();
        const double range_tol = 1e-12 * std::max(1.0, std::abs(hi_v));
        if (T < lo_v - range_tol || T > hi_v + range_tol)
            throw std::out_of_range("MappingFunction::inverse: value outside sigma range");
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (eval_ext(mid) < T)
                lo = mid;
            else
                hi = mid;
        }
        // leftmost preimage: hi is the first parameter with sigma >= T
        double t = hi;
        for (int it = 0; it < 100; ++it) {
            const double f = eval_ext(t) - T;
            if (std::abs(f) <= 1e-13) break;
            const double fp = eval_prime_ext(t);
            if (fp <= 1e-14) break;
            t -= f / fp;
            t = std::clamp(t, 0.0, 1.0);
        }
        if (std::abs(eval_ext(t) - T) > 1e-10 && strictly) *strictly = false;
        if (strictly && eval_prime_ext(t) <= 1e-12) *strictly = false;
        return std::clamp(t, 0.0, 1.0);
    }

    /// Coefficients clamped into [0,1]; removes tiny optimizer overshoot of
    /// the range endpoints before representation conversion.
    MappingFunction clamped_to_unit() const {
        std::vector<double> b = beta_;
        for (double& v : b) v = std::clamp(v, 0.0, 1.0);
        return from_betas(kv_, b);
    }

    /// The mapping as an explicit scalar spline (coefficient in x, y=z=0),
    /// sharing all curve algebra.
    BSplineCurve to_scalar_spline() const {
        std::vector<Vec3> pts(beta_.size());
        for (size_t i = 0; i < beta_.size(); ++i) pts[i] = Vec3(beta_[i], 0.0, 0.0);
        return BSplineCurve(kv_, std::move(pts));
    }

    /// Suffix sums of basis values: tail[j] = sum_{k>=j} B_{k,d}(t), the inner
    /// factor of d sigma(t)/d eps_j = 2 eps_j * tail[j].
    std::vector<double> basis_tail_sums(double t) const {
        std::vector<double> tail(eps_.size(), 0.0);
        const int span = find_span(kv_, t, true);
        const auto N = basis_functions(kv_, t, span);
        for (int j = 0; j <= kv_.degree; ++j) tail[span - kv_.degree + j] = N[j];
        for (size_t j = tail.size() - 1; j-- > 0;) tail[j] += tail[j + 1];
        return tail;
    }

private:
    void rebuild_betas() {
        beta_.resize(eps_.size());
        double acc = 0.0;
        for (size_t i = 0; i < eps_.size(); ++i) {
            acc += eps_[i] * eps_[i];
            beta_[i] = acc;
        }
    }

    KnotVector kv_;
    std::vector<double> eps_;
    std::vector<double> beta_;
};

/// Discrete mapping of Eq-style per-sample parameters: T_i = sum_{j<=i} alpha_j^2.
struct DiscreteMapping {
    std::vector<double> t_samples;
    std::vector<double> alphas;

    std::vector<double> targets() const {
        std::vector<double> T(alphas.size());
        double acc = 0.0;
        for (size_t i = 0; i < alphas.size(); ++i) {
            acc += alphas[i] * alphas[i];
            T[i] = acc;
        }
        return T;
    }

    static DiscreteMapping identity(const std::vector<double>& t_samples) {
        DiscreteMapping d;
        d.t_samples = t_samples;
        d.alphas.resize(t_samples.size());
        double prev = 0.0;
        for (size_t i = 0; i < t_samples.size(); ++i) {
            d.alphas[i] = std::sqrt(std::max(0.0, t_samples[i] - prev));
            prev = t_samples[i];
        }
        return d;
    }
};

} // namespace devstrip
