#pragma once

#include <chrono>
#include <functional>
#include <limits>
#include <tuple>

#include "devstrip/energy.hpp"

namespace devstrip {

struct LbfgsConfig {
    int memory = 10;
    int max_iterations = 200;
    double gradient_tolerance = 1e-8; // sup-norm stop
    double wolfe_c1 = 1e-4;
    double wolfe_c2 = 0.9;
    double f_rel_tolerance = 1e-12;   // relative decrease over plateau_iterations
    int plateau_iterations = 3;
};

struct OptimizationReport {
    int iterations = 0;
    std::vector<double> objective_trace;
    std::vector<double> beta_ave_trace;
    double wall_time_seconds = 0.0;
    bool converged = false;
    bool feasible_all_iterates = true;
    std::string message;
};

/// Objective with gradient: f(x, &grad). grad has x's size when requested.
using ObjectiveFn =
    std::function<double(const std::vector<double>& x, std::vector<double>* grad)>;

/// Optional per-accepted-iterate observer (records warp traces, feasibility).
using IterateCallback = std::function<void(const std::vector<double>& x, OptimizationReport&)>;

namespace detail {

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double sup_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

struct LineSearchResult {
    double alpha = 0.0;
    double f = 0.0;
    std::vector<double> x, g;
    bool ok = false;
};

/// Strong-Wolfe line search: bracketing with expansion, then zoom with cubic
/// interpolation and bisection fallback.
inline LineSearchResult strong_wolfe(const ObjectiveFn& fn, const std::vector<double>& x0,
                                     double f0, const std::vector<double>& g0,
                                     const std::vector<double>& dir, const LbfgsConfig& cfg) {
    LineSearchResult res;
    const double dphi0 = dot(g0, dir);
    if (!(dphi0 < 0.0)) return res;

    auto phi = [&](double alpha, double& dphi, std::vector<double>& x, std::vector<double>& g) {
        x.resize(x0.size());
        for (size_t i = 0; i < x0.size(); ++i) x[i] = x0[i] + alpha * dir[i];
        const double f = fn(x, &g);
        dphi = dot(g, dir);
        return f;
    };

    // cubic minimizer of the interpolant through (a,fa,da) and (b,fb,db)
    auto cubic = [](double a, double fa, double da, double b, double fb, double db) {
        const double d1 = da + db - 3.0 * (fa - fb) / (a - b);
        const double disc = d1 * d1 - da * db;
        if (disc < 0.0) return 0.5 * (a + b);
        const double d2 = std::copysign(std::sqrt(disc), b - a);
        const double t = b - (b - a) * ((db + d2 - d1) / (db - da + 2.0 * d2));
        if (!std::isfinite(t)) return 0.5 * (a + b);
        return t;
    };

    double a_lo = 0.0, f_lo = f0, d_lo = dphi0;
    double a_hi = 0.0, f_hi = 0.0, d_hi = 0.0;
    std::vector<double> x_lo = x0, g_lo = g0;
    bool bracketed = false;

    double alpha = 1.0, alpha_prev = 0.0, f_prev = f0, d_prev = dphi0;
    std::vector<double> x_try, g_try;
    for (int it = 0; it < 30 && !bracketed; ++it) {
        double dphi;
        const double f = phi(alpha, dphi, x_try, g_try);
        if (!std::isfinite(f)) { // step too large, treat as an upper bracket
            a_hi = alpha; f_hi = std::numeric_limits<double>::infinity(); d_hi = 0.0;
            bracketed = true;
            break;
        }
        if (f > f0 + cfg.wolfe_c1 * alpha * dphi0 || (it > 0 && f >= f_prev)) {
            a_hi = alpha; f_hi = f; d_hi = dphi;
            bracketed = true;
            break;
        }
        if (std::abs(dphi) <= -cfg.wolfe_c2 * dphi0) {
            res.alpha = alpha; res.f = f; res.x = std::move(x_try); res.g = std::move(g_try);
            res.ok = true;
            return res;
        }
        if (dphi >= 0.0) {
            a_hi = a_lo; f_hi = f_lo; d_hi = d_lo;
            a_lo = alpha; f_lo = f; d_lo = dphi; x_lo = x_try; g_lo = g_try;
            bracketed = true;
            break;
        }
        a_lo = alpha; f_lo = f; d_lo = dphi; x_lo = x_try; g_lo = g_try;
        alpha_prev = alpha; f_prev = f; d_prev = dphi;
        alpha *= 2.0;
        if (alpha > 1e10) break;
    }
    (void)alpha_prev; (void)d_prev;
    if (!bracketed) return res;

    for (int it = 0; it < 60; ++it) {
        double a;
        if (std::isfinite(f_hi)) {
            a = cubic(a_lo, f_lo, d_lo, a_hi, f_hi, d_hi);
            const double lo = std::min(a_lo, a_hi), hi = std::max(a_lo, a_hi);
            const double margin = 0.1 * (hi - lo);
            if (!(a > lo + margin && a < hi - margin)) a = 0.5 * (a_lo + a_hi);
        } else {
            a = 0.5 * (a_lo + a_hi);
        }
        if (std::abs(a_hi - a_lo) < 1e-16) break;
        double dphi;
        const double f = phi(a, dphi, x_try, g_try);
        if (!std::isfinite(f) || f > f0 + cfg.wolfe_c1 * a * dphi0 || f >= f_lo) {
            a_hi = a; f_hi = f; d_hi = dphi;
        } else {
            if (std::abs(dphi) <= -cfg.wolfe_c2 * dphi0) {
                res.alpha = a; res.f = f; res.x = std::move(x_try); res.g = std::move(g_try);
                res.ok = true;
                return res;
            }
            if (dphi * (a_hi - a_lo) >= 0.0) { a_hi = a_lo; f_hi = f_lo; d_hi = d_lo; }
            a_lo = a; f_lo = f; d_lo = dphi; x_lo = x_try; g_lo = g_try;
        }
    }
    // Wolfe pair not found; fall back to the best Armijo point seen.
    if (a_lo > 0.0 && f_lo < f0) {
        res.alpha = a_lo; res.f = f_lo; res.x = x_lo; res.g = g_lo;
        res.ok = true;
    }
    return res;
}

} // namespace detail

/// L-BFGS with strong-Wolfe line search. Accepted objective values are
/// nonincreasing; stops on gradient sup-norm, objective plateau, or the
/// iteration cap.
inline std::pair<std::vector<double>, OptimizationReport>
minimize(const ObjectiveFn& fn, std::vector<double> x, const LbfgsConfig& cfg,
         const IterateCallback& callback = nullptr) {
    const auto t_start = std::chrono::steady_clock::now();
    OptimizationReport rep;
    const size_t n = x.size();
    std::vector<double> g(n);
    double f = fn(x, &g);
    if (!std::isfinite(f)) {
        rep.message = "objective not finite at the start point";
        return {x, rep};
    }
    rep.objective_trace.push_back(f);
    if (callback) callback(x, rep);

    std::vector<std::vector<double>> s_hist, y_hist;
    std::vector<double> rho_hist;

    for (int iter = 0; iter < cfg.max_iterations; ++iter) {
        if (detail::sup_norm(g) <= cfg.gradient_tolerance) {
            rep.converged = true;
            rep.message = "gradient tolerance reached";
            break;
        }

        // two-loop recursion
        std::vector<double> q = g;
        const int m = static_cast<int>(s_hist.size());
        std::vector<double> alpha_hist(m);
        for (int i = m - 1; i >= 0; --i) {
            alpha_hist[i] = rho_hist[i] * detail::dot(s_hist[i], q);
            for (size_t k = 0; k < n; ++k) q[k] -= alpha_hist[i] * y_hist[i][k];
        }
        double gamma = 1.0;
        if (m > 0) {
            const double yy = detail::dot(y_hist[m - 1], y_hist[m - 1]);
            if (yy > 0.0) gamma = detail::dot(s_hist[m - 1], y_hist[m - 1]) / yy;
        }
        for (double& qi : q) qi *= gamma;
        for (int i = 0; i < m; ++i) {
            const double beta = rho_hist[i] * detail::dot(y_hist[i], q);
            for (size_t k = 0; k < n; ++k) q[k] += (alpha_hist[i] - beta) * s_hist[i][k];
        }
        std::vector<double> dir(n);
        for (size_t k = 0; k < n; ++k) dir[k] = -q[k];
        if (!(detail::dot(g, dir) < 0.0)) {
            for (size_t k = 0; k < n; ++k) dir[k] = -g[k]; // reset to steepest descent
            s_hist.clear(); y_hist.clear(); rho_hist.clear();
        }

        auto ls = detail::strong_wolfe(fn, x, f, g, dir, cfg);
        if (!ls.ok) {
            rep.message = "line search failed; returning best iterate";
            break;
        }

        std::vector<double> s(n), yv(n);
        for (size_t k = 0; k < n; ++k) {
            s[k] = ls.x[k] - x[k];
            yv[k] = ls.g[k] - g[k];
        }
        const double sy = detail::dot(s, yv);
        if (sy > 1e-14) {
            s_hist.push_back(std::move(s));
            y_hist.push_back(std::move(yv));
            rho_hist.push_back(1.0 / sy);
            if (static_cast<int>(s_hist.size()) > cfg.memory) {
                s_hist.erase(s_hist.begin());
                y_hist.erase(y_hist.begin());
                rho_hist.erase(rho_hist.begin());
            }
        }

        const double f_prev = f;
        x = std::move(ls.x);
        g = std::move(ls.g);
        f = ls.f;
        rep.iterations = iter + 1;
        rep.objective_trace.push_back(f);
        if (callback) callback(x, rep);

        // objective plateau stop
        const int pl = cfg.plateau_iterations;
        if (static_cast<int>(rep.objective_trace.size()) > pl) {
            const double then = rep.objective_trace[rep.objective_trace.size() - 1 - pl];
            const double scale = std::max(1.0, std::abs(then));
            if (then - f <= cfg.f_rel_tolerance * scale) {
                rep.converged = true;
                rep.message = "objective plateau";
                break;
            }
        }
        (void)f_prev;
    }
    if (!rep.converged && rep.message.empty()) rep.message = "iteration cap reached";
    rep.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return {x, rep};
}

/// Continuous-mapping problem: variables are sigma's shape parameters eps and
/// the per-sample normals.
inline std::tuple<MappingFunction, NormalVariables, OptimizationReport>
solve_continuous(const BSplineCurve& c1, const BSplineCurve& c2, const MappingFunction& m0,
                 const ObjectiveConfig& cfg_obj, const LbfgsConfig& cfg_opt) {
    const int n_eps = m0.num_coeffs();
    const size_t K1 = cfg_obj.sample_params.size();
    NormalVariables N0 = init_normals(c1, c2, m0, cfg_obj.sample_params);

    std::vector<double> x0(n_eps + 3 * K1);
    std::copy(m0.epsilons().begin(), m0.epsilons().end(), x0.begin());
    for (size_t i = 0; i < K1; ++i)
        for (int k = 0; k < 3; ++k) x0[n_eps + 3 * i + k] = N0.normals[i][k];

    auto unpack = [&](const std::vector<double>& x) {
        std::vector<double> eps(x.begin(), x.begin() + n_eps);
        MappingFunction m = MappingFunction::from_epsilons(m0.knots(), std::move(eps));
        NormalVariables N;
        N.normals.resize(K1);
        for (size_t i = 0; i < K1; ++i)
            N.normals[i] = Vec3(x[n_eps + 3 * i], x[n_eps + 3 * i + 1], x[n_eps + 3 * i + 2]);
        return std::make_pair(std::move(m), std::move(N));
    };

    ObjectiveFn fn = [&](const std::vector<double>& x, std::vector<double>* grad) {
        auto [m, N] = unpack(x);
        if (grad) *grad = gradient(c1, c2, m, N, cfg_obj);
        return objective(c1, c2, m, N, cfg_obj);
    };

    IterateCallback cb = [&](const std::vector<double>& x, OptimizationReport& rep) {
        auto [m, N] = unpack(x);
        // feasibility by construction, asserted anyway
        const auto& b = m.betas();
        for (size_t i = 1; i < b.size(); ++i)
            if (b[i] < b[i - 1]) rep.feasible_all_iterates = false;
        for (int i = 0; i < 1000; ++i)
            if (m.eval_prime_ext(i / 999.0) < 0.0) rep.feasible_all_iterates = false;
        RuledStrip strip{c1, c2, std::move(m)};
        rep.beta_ave_trace.push_back(
            warp_profile(strip, static_cast<int>(cfg_obj.sample_params.size())).beta_ave);
    };

    auto [x_opt, rep] = minimize(fn, std::move(x0), cfg_opt, cb);
    auto [m, N] = unpack(x_opt);
    return {std::move(m), std::move(N), std::move(rep)};
}

/// Discrete-mapping problem: variables are the squared-increment parameters
/// alpha_i of the per-sample targets T_i, plus the normals.
inline std::tuple<DiscreteMapping, NormalVariables, OptimizationReport>
solve_discrete(const BSplineCurve& c1, const BSplineCurve& c2,
               const std::vector<double>& t_samples, const LbfgsConfig& cfg_opt,
               double lambda1 = 100.0, double lambda2 = 1.0) {
    const size_t K1 = t_samples.size();
    DiscreteMapping d0 = DiscreteMapping::identity(t_samples);

    // initial normals from the identity targets
    std::vector<double> T0 = d0.targets();
    std::vector<double> x0(K1 + 3 * K1);
    std::copy(d0.alphas.begin(), d0.alphas.end(), x0.begin());
    for (size_t i = 0; i < K1; ++i) {
        const Vec3 L = c1.eval_ext(t_samples[i]) - c2.eval_ext(T0[i]);
        const Vec3 d1 = c1.derivatives_ext(t_samples[i], 1)[1];
        Vec3 n = d1.cross(L);
        const double len = n.norm();
        const Vec3 ni = len > 1e-14 ? Vec3(n / len) : Vec3(0.0, 0.0, 1.0);
        for (int k = 0; k < 3; ++k) x0[K1 + 3 * i + k] = ni[k];
    }

    ObjectiveFn fn = [&](const std::vector<double>& x, std::vector<double>* grad) {
        std::vector<double> T(K1);
        double acc = 0.0;
        for (size_t i = 0; i < K1; ++i) {
            acc += x[i] * x[i];
            T[i] = acc;
        }
        double f = 0.0;
        std::vector<double> gT;
        if (grad) {
            grad->assign(x.size(), 0.0);
            gT.assign(K1, 0.0);
        }
        for (size_t i = 0; i < K1; ++i) {
            const Vec3 Ni(x[K1 + 3 * i], x[K1 + 3 * i + 1], x[K1 + 3 * i + 2]);
            const Vec3 P1 = c1.eval_ext(t_samples[i]);
            const Vec3 d1 = c1.derivatives_ext(t_samples[i], 1)[1];
            const auto d2s = c2.derivatives_ext(T[i], 2);
            const Vec3 L = P1 - d2s[0];
            const bool drop_L = L.norm() < kRulingLengthTol;
            const double r1 = Ni.dot(d1), r2 = Ni.dot(d2s[1]);
            const double r3 = drop_L ? 0.0 : Ni.dot(L);
            f += lambda1 * (r1 * r1 + r2 * r2 + r3 * r3);
            const double nn = Ni.squaredNorm() - 1.0;
            f += lambda2 * nn * nn;
            if (grad) {
                Vec3 gN = 2.0 * r1 * d1 + 2.0 * r2 * d2s[1];
                if (!drop_L) gN += 2.0 * r3 * L;
                gN *= lambda1;
                gN += lambda2 * 4.0 * nn * Ni;
                for (int k = 0; k < 3; ++k) (*grad)[K1 + 3 * i + k] = gN[k];
                double dE_dT = 2.0 * r2 * Ni.dot(d2s[2]);
                if (!drop_L) dE_dT -= 2.0 * r3 * Ni.dot(d2s[1]);
                gT[i] = lambda1 * dE_dT;
            }
        }
        if (grad) {
            // dT_i/d alpha_j = 2 alpha_j for j <= i: suffix sums of gT
            double suffix = 0.0;
            for (size_t j = K1; j-- > 0;) {
                suffix += gT[j];
                (*grad)[j] = 2.0 * x[j] * suffix;
            }
        }
        return f;
    };

    auto [x_opt, rep] = minimize(fn, std::move(x0), cfg_opt);
    DiscreteMapping d;
    d.t_samples = t_samples;
    d.alphas.assign(x_opt.begin(), x_opt.begin() + K1);
    NormalVariables N;
    N.normals.resize(K1);
    for (size_t i = 0; i < K1; ++i)
        N.normals[i] = Vec3(x_opt[K1 + 3 * i], x_opt[K1 + 3 * i + 1], x_opt[K1 + 3 * i + 2]);
    return {std::move(d), std::move(N), std::move(rep)};
}

} // namespace devstrip
