#pragma once

#include <stdexcept>
#include <string>

namespace gammatel {

/// Thrown when a truncated series reaches its hard term cap before the
/// relative stopping rule fires. Carries the partial sum and the number of
/// terms consumed so callers can inspect how far the sum got.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double partial_sum, int terms_used)
        : std::runtime_error(what + " (partial sum " + std::to_string(partial_sum) +
                             " after " + std::to_string(terms_used) + " terms)"),
          partial_sum_(partial_sum),
          terms_used_(terms_used) {}

    double partial_sum() const noexcept { return partial_sum_; }
    int terms_used() const noexcept { return terms_used_; }

private:
    double partial_sum_;
    int terms_used_;
};

/// Thrown when adaptive quadrature cannot meet the requested tolerance.
/// Carries the best estimate reached and its error estimate.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double estimate, double error_estimate)
        : std::runtime_error(what + " (estimate " + std::to_string(estimate) +
                             ", error estimate " + std::to_string(error_estimate) + ")"),
          estimate_(estimate),
          error_estimate_(error_estimate) {}

    double estimate() const noexcept { return estimate_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double estimate_;
    double error_estimate_;
};

/// Sign of the velocity at time zero: Forward means V0 = +c, Backward V0 = -v.
enum class InitialVelocity { Forward, Backward };

/// Parameters of the motion: speeds c (forward) and v (backward), and the
/// gamma sojourn laws in rate/shape form, (lambda, alpha) for forward
/// stretches and (mu, beta) for backward ones. All six must be positive.
struct MotionParams {
    double c;
    double v;
    double lambda;
    double alpha;
    double mu;
    double beta;

    void validate() const {
        auto check = [](double value, const char* name) {
            if (!(value > 0.0))
                throw std::domain_error(std::string("MotionParams: ") + name +
                                        " must be positive");
        };
        check(c, "c");
        check(v, "v");
        check(lambda, "lambda");
        check(alpha, "alpha");
        check(mu, "mu");
        check(beta, "beta");
    }

    /// Parameters of the mirrored motion x -> -x, which swaps the roles of
    /// the forward and backward directions.
    MotionParams reflected() const { return {v, c, mu, beta, lambda, alpha}; }

    /// True when the two sojourn laws are identical (the mean formulas
    /// require this).
    bool symmetric() const { return lambda == mu && alpha == beta; }
};

/// Truncation policy for the series expansions: stop once
/// `consecutive_small` successive terms each fall below rel_tol times the
/// running sum, or fail with ConvergenceError at max_terms.
struct SeriesControl {
    double rel_tol = 1e-12;
    int consecutive_small = 3;
    int max_terms = 10000;

    void validate() const {
        if (!(rel_tol > 0.0))
            throw std::domain_error("SeriesControl: rel_tol must be positive");
        if (consecutive_small < 1)
            throw std::domain_error("SeriesControl: consecutive_small must be >= 1");
        if (max_terms < consecutive_small)
            throw std::domain_error("SeriesControl: max_terms must be >= consecutive_small");
    }
};

/// A point (x, t) inside the open support -v t < x < c t, together with the
/// time-split coordinates: x_bar = (c t - x)/(c + v) is the total time spent
/// moving backward and x_star = (v t + x)/(c + v) the time spent moving
/// forward, so x_bar + x_star = t.
struct SpaceTimePoint {
    double x;
    double t;
    double x_bar;
    double x_star;

    static SpaceTimePoint of(const MotionParams& p, double x, double t) {
        p.validate();
        if (!(t > 0.0))
            throw std::domain_error("SpaceTimePoint: t must be positive");
        const double x_bar = (p.c * t - x) / (p.c + p.v);
        const double x_star = (p.v * t + x) / (p.c + p.v);
        if (!(x_bar > 0.0) || !(x_star > 0.0))
            throw std::domain_error("SpaceTimePoint: x is outside the open support (-v t, c t)");
        return {x, t, x_bar, x_star};
    }
};

/// The continuous part of the law at one point: density of arriving there
/// while currently moving forward (f), backward (b), and their sum (p),
/// plus the truncation index each series stopped at.
struct LawPoint {
    double forward_density;
    double backward_density;
    double total_density;
    int truncation_index_f;
    int truncation_index_b;
};

}  // namespace gammatel
