#pragma once

// Conditional mean of X_t when both sojourn laws share one (lambda, alpha)
// pair: the general gamma series, the closed forms for integer shapes 1..4,
// and the velocity-sign parity expectation E[(-1)^{N_s}] the mean integrates.

#include <cmath>
#include <stdexcept>

#include "gammatel/specfun.hpp"
#include "gammatel/types.hpp"

namespace gammatel {

/// Parameters for the identically-distributed-sojourns case. The mean
/// formulas only exist under this restriction, so the API makes an
/// asymmetric configuration unrepresentable rather than rejecting it.
struct SymmetricGammaParams {
    double c;
    double v;
    double lambda;
    double alpha;

    void validate() const {
        auto check = [](double value, const char* name) {
            if (!(value > 0.0))
                throw std::domain_error(std::string("SymmetricGammaParams: ") + name +
                                        " must be positive");
        };
        check(c, "c");
        check(v, "v");
        check(lambda, "lambda");
        check(alpha, "alpha");
    }

    MotionParams motion() const { return {c, v, lambda, alpha, lambda, alpha}; }
};

namespace detail {

// t P(k alpha, lambda t) - (k alpha / lambda) P(k alpha + 1, lambda t),
// rescaled by lambda: the closed form of the integral of P(k alpha, lambda s)
// over (0, t). Non-negative and decreasing in k.
inline double mean_series_term(double alpha, double u, int k) {
    const double ka = k * alpha;
    return u * reg_lower_gamma(ka, u) - ka * reg_lower_gamma(ka + 1.0, u);
}

}  // namespace detail

/// E[X_t | V0]: the drift V0 t plus the alternating renewal correction
/// ((c+v)/lambda) sgn(V0) sum_k (-1)^k [lambda t P(k a, lambda t)
/// - k a P(k a + 1, lambda t)]. Terms alternate in sign, so adjacent pairs
/// (k odd + k even) are summed as blocks and the stopping rule watches the
/// block magnitudes, which decay monotonically.
inline double mean_conditional(const SymmetricGammaParams& p, double t, InitialVelocity v0,
                               const SeriesControl& ctl = {}) {
    p.validate();
    ctl.validate();
    if (!(t > 0.0))
        throw std::domain_error("mean_conditional: t must be positive");

    const double u = p.lambda * t;
    const double sgn = v0 == InitialVelocity::Forward ? 1.0 : -1.0;
    const double drift = (v0 == InitialVelocity::Forward ? p.c : -p.v) * t;

    double sum = 0.0;
    int small_run = 0;
    for (int k = 1; k + 1 <= ctl.max_terms; k += 2) {
        const double block =
            detail::mean_series_term(p.alpha, u, k + 1) - detail::mean_series_term(p.alpha, u, k);
        sum += block;
        const double mag = std::fabs(block);
        if (mag == 0.0 || mag < ctl.rel_tol * std::fabs(sum)) {
            if (++small_run >= ctl.consecutive_small)
                return drift + (p.c + p.v) / p.lambda * sgn * sum;
        } else {
            small_run = 0;
        }
    }
    throw ConvergenceError("mean series hit the term cap",
                           drift + (p.c + p.v) / p.lambda * sgn * sum, ctl.max_terms);
}

/// Exact closed-form mean for integer shape n in {1,2,3,4} (sojourns are
/// then Erlang). p.alpha is ignored; the shape is n by construction.
inline double erlang_mean_closed_form(int n, const SymmetricGammaParams& p, double t,
                                      InitialVelocity v0) {
    p.validate();
    if (!(t > 0.0))
        throw std::domain_error("erlang_mean_closed_form: t must be positive");
    const double sgn = v0 == InitialVelocity::Forward ? 1.0 : -1.0;
    const double base = 0.5 * (p.c - p.v) * t;
    const double u = p.lambda * t;
    const double amp = (p.c + p.v) / (2.0 * p.lambda) * sgn;
    switch (n) {
        case 1:
            return base + 0.5 * amp * (1.0 - std::exp(-2.0 * u));
        case 2:
            return base + amp * (1.0 - std::exp(-u) * std::cos(u));
        case 3:
            return base + amp * ((1.0 - std::exp(-2.0 * u)) / 6.0 +
                                 4.0 / 3.0 *
                                     (1.0 - std::exp(-0.5 * u) *
                                                std::cos(0.5 * std::sqrt(3.0) * u)));
        case 4: {
            const double r = 0.5 * std::sqrt(2.0);
            return base + amp * ((1.0 - (1.0 + r) * std::exp(-u * (1.0 - r)) * std::cos(r * u)) +
                                 (1.0 - (1.0 - r) * std::exp(-u * (1.0 + r)) * std::cos(r * u)));
        }
        default:
            throw std::domain_error("erlang_mean_closed_form: n must be in {1,2,3,4}");
    }
}

/// E[(-1)^{N_s}], the autocorrelation kernel of the velocity sign:
/// 1 + 2 sum_k (-1)^k P(k alpha, lambda s). Summed in adjacent pairs like
/// the mean series. Returns 1 at s = 0.
inline double parity_expectation(const SymmetricGammaParams& p, double s,
                                 const SeriesControl& ctl = {}) {
    p.validate();
    ctl.validate();
    if (!(s >= 0.0))
        throw std::domain_error("parity_expectation: s must be non-negative");
    if (s == 0.0) return 1.0;

    const double u = p.lambda * s;
    double sum = 0.0;
    int small_run = 0;
    for (int k = 1; k + 1 <= ctl.max_terms; k += 2) {
        const double block =
            reg_lower_gamma((k + 1) * p.alpha, u) - reg_lower_gamma(k * p.alpha, u);
        sum += block;
        const double mag = std::fabs(block);
        if (mag == 0.0 || mag < ctl.rel_tol * std::fabs(sum)) {
            if (++small_run >= ctl.consecutive_small) return 1.0 + 2.0 * sum;
        } else {
            small_run = 0;
        }
    }
    throw ConvergenceError("parity series hit the term cap", 1.0 + 2.0 * sum, ctl.max_terms);
}

/// E[(-1)^{N_s}] for integer shape n: reversals happen at every n-th event
/// of a Poisson(lambda) clock, so the sign of (-1)^{N_s} is decided by the
/// event count modulo 2n and the expectation is 1 - 2 e^{-lambda s} times
/// the Poisson mass of the odd blocks {nk + n, ..., nk + 2n - 1} (k even).
/// Block terms are assembled in log space; the outer sum stops once a whole
/// block contributes less than 1e-15 of the accumulated mass past the bulk.
inline double erlang_parity_expectation(int n, double lambda, double s) {
    if (n < 1)
        throw std::domain_error("erlang_parity_expectation: n must be >= 1");
    if (!(lambda > 0.0))
        throw std::domain_error("erlang_parity_expectation: lambda must be positive");
    if (!(s >= 0.0))
        throw std::domain_error("erlang_parity_expectation: s must be non-negative");
    if (s == 0.0) return 1.0;

    const double u = lambda * s;
    const double log_u = std::log(u);
    double mass = 0.0;  // sum over odd blocks of e^{-u} u^j / j!
    for (long k = 0;; ++k) {
        const long j_lo = 2 * n * k + n;
        double block = 0.0;
        for (long j = j_lo; j < j_lo + n; ++j)
            block += std::exp(j * log_u - log_gamma(static_cast<double>(j) + 1.0) - u);
        mass += block;
        if (block < 1e-15 * mass && static_cast<double>(j_lo) > u) break;
        if (k > 100000)
            throw ConvergenceError("erlang parity block sum hit the block cap",
                                   1.0 - 2.0 * mass, static_cast<int>(k));
    }
    return 1.0 - 2.0 * mass;
}

}  // namespace gammatel
