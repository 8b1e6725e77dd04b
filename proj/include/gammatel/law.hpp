#pragma once

// Exact conditional law of the motion (X_t, V_t): the discrete mass at
// x = V0 t (no reversal yet), the forward/backward density components on the
// open support (-v t, c t), and their closed-form one-sided limits at the
// support endpoints.
//
// The density series are summed term-by-term with every power/Gamma ratio
// assembled in log space, exp'd once per term: the term index can reach
// thousands before truncation and direct powers would overflow long before
// the ratio does.

#include <cmath>
#include <stdexcept>

#include "gammatel/specfun.hpp"
#include "gammatel/types.hpp"

namespace gammatel {

/// One truncated series value plus the index its stopping rule fired at.
struct SeriesValue {
    double value;
    int terms;
};

/// P{no velocity reversal in (0, t]} = P{X_t = V0 t}: the survival function
/// of the first sojourn of the starting direction.
inline double atom_probability(const MotionParams& p, double t, InitialVelocity v0) {
    p.validate();
    if (!(t > 0.0))
        throw std::domain_error("atom_probability: t must be positive");
    return v0 == InitialVelocity::Forward ? reg_upper_gamma(p.alpha, p.lambda * t)
                                          : reg_upper_gamma(p.beta, p.mu * t);
}

namespace detail {

// Point evaluation this close to an endpoint (relative to t) is refused:
// recovering x_bar from x loses all precision there. Quadrature avoids the
// problem by integrating in the time coordinates directly.
inline constexpr double kBoundaryGuard = 1e-12;

// Density of {X_t in dx, V_t = +c | V0 = +c} expressed in the time
// coordinates x_bar (backward time spent) and x_star = t - x_bar. Requires
// 0 < x_bar and 0 < x_star but tolerates values arbitrarily close to the
// endpoints; the log-space term evaluation stays finite there.
inline SeriesValue forward_density_tc(const MotionParams& p, double x_bar, double x_star,
                                      const SeriesControl& ctl) {
    const double log_mu = std::log(p.mu);
    const double log_xb = std::log(x_bar);
    const double u = p.lambda * x_star;

    double sum = 0.0;
    int small_run = 0;
    double p_lo = reg_lower_gamma(p.alpha, u);  // P(k alpha, u) at k = 1
    for (int k = 1; k <= ctl.max_terms; ++k) {
        const double p_hi = reg_lower_gamma((k + 1) * p.alpha, u);
        double bracket = p_lo - p_hi;  // >= 0 exactly; clamp roundoff
        if (bracket < 0.0) bracket = 0.0;
        p_lo = p_hi;

        const double kb = k * p.beta;
        const double term =
            bracket == 0.0
                ? 0.0
                : std::exp(kb * log_mu + (kb - 1.0) * log_xb - log_gamma(kb)) * bracket;
        sum += term;

        if (term == 0.0 || term < ctl.rel_tol * sum) {
            if (++small_run >= ctl.consecutive_small)
                return {std::exp(-p.mu * x_bar) * sum / (p.c + p.v), k};
        } else {
            small_run = 0;
        }
    }
    throw ConvergenceError("forward density series hit the term cap",
                           std::exp(-p.mu * x_bar) * sum / (p.c + p.v), ctl.max_terms);
}

// Density of {X_t in dx, V_t = -v | V0 = +c} in the same time coordinates.
// The k = 0 term (exactly one reversal so far) sits outside the series and
// seeds the running sum for the stopping rule.
inline SeriesValue backward_density_tc(const MotionParams& p, double x_bar, double x_star,
                                       const SeriesControl& ctl) {
    const double log_lambda = std::log(p.lambda);
    const double log_xs = std::log(x_star);
    const double u = p.mu * x_bar;
    const double damp = -p.lambda * x_star;

    double sum = std::exp(p.alpha * log_lambda + damp + (p.alpha - 1.0) * log_xs -
                          log_gamma(p.alpha)) *
                 reg_upper_gamma(p.beta, u);
    int small_run = 0;
    double p_lo = reg_lower_gamma(p.beta, u);
    for (int k = 1; k <= ctl.max_terms; ++k) {
        const double p_hi = reg_lower_gamma((k + 1) * p.beta, u);
        double bracket = p_lo - p_hi;
        if (bracket < 0.0) bracket = 0.0;
        p_lo = p_hi;

        const double ka = (k + 1) * p.alpha;
        const double term =
            bracket == 0.0
                ? 0.0
                : std::exp(ka * log_lambda + (ka - 1.0) * log_xs - log_gamma(ka) + damp) *
                      bracket;
        sum += term;

        if (term == 0.0 || term < ctl.rel_tol * sum) {
            if (++small_run >= ctl.consecutive_small) return {sum / (p.c + p.v), k};
        } else {
            small_run = 0;
        }
    }
    throw ConvergenceError("backward density series hit the term cap", sum / (p.c + p.v),
                           ctl.max_terms);
}

inline void require_off_boundary(const SpaceTimePoint& pt) {
    if (pt.x_bar < kBoundaryGuard * pt.t || pt.x_star < kBoundaryGuard * pt.t)
        throw std::domain_error(
            "density: x is inside the numerical guard band at the support boundary; "
            "use boundary_limit for the edge behavior");
}

}  // namespace detail

/// Density of arriving at `point` while currently moving forward, given
/// V0 = +c. Non-negative; throws ConvergenceError if the series cap is hit.
inline SeriesValue forward_density(const MotionParams& p, const SpaceTimePoint& point,
                                   const SeriesControl& ctl = {}) {
    p.validate();
    ctl.validate();
    detail::require_off_boundary(point);
    return detail::forward_density_tc(p, point.x_bar, point.x_star, ctl);
}

/// Density of arriving at `point` while currently moving backward, given
/// V0 = +c. Same contract as forward_density.
inline SeriesValue backward_density(const MotionParams& p, const SpaceTimePoint& point,
                                    const SeriesControl& ctl = {}) {
    p.validate();
    ctl.validate();
    detail::require_off_boundary(point);
    return detail::backward_density_tc(p, point.x_bar, point.x_star, ctl);
}

/// Full continuous law p = f + b at (x, t) for either starting direction.
/// The Backward case is evaluated by mirroring: run the Forward formulas on
/// the reflected parameters at -x and swap which component counts as
/// "forward-moving".
inline LawPoint density(const MotionParams& p, double x, double t, InitialVelocity v0,
                        const SeriesControl& ctl = {}) {
    p.validate();
    ctl.validate();
    if (v0 == InitialVelocity::Backward) {
        const MotionParams q = p.reflected();
        const SpaceTimePoint pt = SpaceTimePoint::of(q, -x, t);
        detail::require_off_boundary(pt);
        const SeriesValue fwd = detail::forward_density_tc(q, pt.x_bar, pt.x_star, ctl);
        const SeriesValue bwd = detail::backward_density_tc(q, pt.x_bar, pt.x_star, ctl);
        return {bwd.value, fwd.value, bwd.value + fwd.value, bwd.terms, fwd.terms};
    }
    const SpaceTimePoint pt = SpaceTimePoint::of(p, x, t);
    detail::require_off_boundary(pt);
    const SeriesValue fwd = detail::forward_density_tc(p, pt.x_bar, pt.x_star, ctl);
    const SeriesValue bwd = detail::backward_density_tc(p, pt.x_bar, pt.x_star, ctl);
    return {fwd.value, bwd.value, fwd.value + bwd.value, fwd.terms, bwd.terms};
}

/// Which one-sided endpoint limit of the V0 = +c density components to take.
enum class BoundaryCase { FAtMinusVt, FAtCt, BAtCt, BAtMinusVt };

/// An extended-real limit: either a finite value or an explicit divergence
/// flag. The flag is set analytically, never produced by overflow.
struct BoundaryLimit {
    double value;  // meaningful only when !is_infinite
    bool is_infinite;
};

/// Closed-form one-sided limits of f and b at the support endpoints.
/// The regime at x -> ct is decided by beta (the backward shape): divergent
/// below 1, finite at 1, zero above; at x -> -vt by alpha symmetrically.
/// b at ct is finite for every shape, and f vanishes at -vt for every shape.
inline BoundaryLimit boundary_limit(const MotionParams& p, BoundaryCase which, double t) {
    p.validate();
    if (!(t > 0.0))
        throw std::domain_error("boundary_limit: t must be positive");
    switch (which) {
        case BoundaryCase::FAtMinusVt:
            return {0.0, false};
        case BoundaryCase::FAtCt:
            if (p.beta < 1.0) return {0.0, true};
            if (p.beta == 1.0)
                return {p.mu / (p.c + p.v) *
                            (reg_lower_gamma(p.alpha, p.lambda * t) -
                             reg_lower_gamma(2.0 * p.alpha, p.lambda * t)),
                        false};
            return {0.0, false};
        case BoundaryCase::BAtCt:
            return {std::exp(p.alpha * std::log(p.lambda) - p.lambda * t +
                             (p.alpha - 1.0) * std::log(t) - log_gamma(p.alpha)) /
                        (p.c + p.v),
                    false};
        case BoundaryCase::BAtMinusVt:
            if (p.alpha < 1.0) return {0.0, true};
            if (p.alpha == 1.0)
                return {p.lambda * reg_upper_gamma(p.beta, p.mu * t) /
                            ((p.c + p.v) * std::exp(log_gamma(p.alpha))),
                        false};
            return {0.0, false};
    }
    throw std::logic_error("boundary_limit: unreachable");
}

}  // namespace gammatel
