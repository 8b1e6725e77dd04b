#pragma once

// Quantitative validation tying the analytic law to the simulator:
// normalization audits via quadrature, histogram comparison against
// bin-averaged analytic masses, mean z-scores, and boundary-behavior probes
// along a geometric epsilon sequence.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "gammatel/law.hpp"
#include "gammatel/moments.hpp"
#include "gammatel/quadrature.hpp"
#include "gammatel/simulate.hpp"
#include "gammatel/types.hpp"

namespace gammatel {

/// Integral of the continuous density over its open support. The integration
/// runs in the backward-time coordinate x_bar over (0, t), where the
/// endpoint power singularities x_bar^{beta-1} and x_star^{alpha-1} (shapes
/// below 1) are absorbed by the tanh-sinh nodes and the coordinates stay
/// exact arbitrarily close to the endpoints.
inline double integrate_density(const MotionParams& p, double t, InitialVelocity v0,
                                double tol) {
    p.validate();
    if (!(t > 0.0))
        throw std::domain_error("integrate_density: t must be positive");
    if (!(tol > 0.0))
        throw std::domain_error("integrate_density: tol must be positive");
    const MotionParams q = v0 == InitialVelocity::Forward ? p : p.reflected();
    const SeriesControl ctl{};
    auto integrand = [&](double /*x_bar*/, double dist_lo, double dist_hi) {
        // dist_lo is the exact x_bar, dist_hi the exact x_star = t - x_bar
        return detail::forward_density_tc(q, dist_lo, dist_hi, ctl).value +
               detail::backward_density_tc(q, dist_lo, dist_hi, ctl).value;
    };
    return (q.c + q.v) * tanh_sinh(integrand, 0.0, t, tol / (q.c + q.v));
}

/// Analytic probability mass of each histogram bin: the integral of p over
/// the bin (so comparisons against empirical bin frequencies are
/// like-for-like even where the density is singular or strongly curved).
/// bin_edges are positions in x, ascending, spanning exactly [-v t, c t].
inline std::vector<double> bin_analytic_masses(const MotionParams& p, double t,
                                               InitialVelocity v0,
                                               const std::vector<double>& bin_edges,
                                               double tol_per_bin = 1e-10) {
    p.validate();
    const MotionParams q = v0 == InitialVelocity::Forward ? p : p.reflected();
    // For Backward the law at x mirrors the Forward law of q at -x, so the
    // bin [e_i, e_{i+1}] maps to the reversed bin [-e_{i+1}, -e_i].
    const bool mirrored = v0 == InitialVelocity::Backward;
    const SeriesControl ctl{};
    const int n_bins = static_cast<int>(bin_edges.size()) - 1;
    std::vector<double> masses(n_bins);
    for (int i = 0; i < n_bins; ++i) {
        const double e_lo = mirrored ? -bin_edges[i + 1] : bin_edges[i];
        const double e_hi = mirrored ? -bin_edges[i] : bin_edges[i + 1];
        // x_bar runs from (c t - e_hi)/(c+v) to (c t - e_lo)/(c+v)
        const double xb_lo = (q.c * t - e_hi) / (q.c + q.v);
        const double xb_hi = (q.c * t - e_lo) / (q.c + q.v);
        // offsets of this sub-interval from the support endpoints, exact when
        // the bin touches them
        const double from_zero = xb_lo < 0.0 ? 0.0 : xb_lo;
        const double to_t = t - xb_hi < 0.0 ? 0.0 : t - xb_hi;
        auto integrand = [&](double /*xb*/, double dist_lo, double dist_hi) {
            const double x_bar = from_zero + dist_lo;
            const double x_star = to_t + dist_hi;
            return detail::forward_density_tc(q, x_bar, x_star, ctl).value +
                   detail::backward_density_tc(q, x_bar, x_star, ctl).value;
        };
        masses[i] =
            (q.c + q.v) * tanh_sinh(integrand, xb_lo, xb_hi, tol_per_bin / (q.c + q.v));
    }
    return masses;
}

/// Outcome of one boundary-behavior probe.
struct LimitCheck {
    std::string label;
    std::string regime;  // "finite", "divergent" or "vanishing"
    bool passed = false;
    double observed = std::numeric_limits<double>::quiet_NaN();
    double expected = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

inline const double kProbeEps[3] = {1e-3, 1e-4, 1e-5};

// Evaluate the component named by `which` at the three probe offsets and
// classify the endpoint behavior. Finite regimes compare the closest probe
// against the closed-form limit; divergent/vanishing regimes check strict
// monotonicity plus the observed log10-slope across the two probe decades
// against the exact local power exponent (f ~ x_bar^{beta-1} at ct,
// b ~ x_star^{alpha-1} at -vt, f ~ x_star^{alpha} at -vt).
inline LimitCheck limit_probe(const MotionParams& p, BoundaryCase which, double t) {
    LimitCheck check;
    const SeriesControl ctl{};
    double exponent = 0.0;  // local power of the probed component in eps
    bool probe_forward_component = false;
    bool at_ct_side = false;
    switch (which) {
        case BoundaryCase::FAtMinusVt:
            check.label = "f_at_minus_vt";
            exponent = p.alpha;
            probe_forward_component = true;
            at_ct_side = false;
            break;
        case BoundaryCase::FAtCt:
            check.label = "f_at_ct";
            exponent = p.beta - 1.0;
            probe_forward_component = true;
            at_ct_side = true;
            break;
        case BoundaryCase::BAtCt:
            check.label = "b_at_ct";
            exponent = 0.0;
            probe_forward_component = false;
            at_ct_side = true;
            break;
        case BoundaryCase::BAtMinusVt:
            check.label = "b_at_minus_vt";
            exponent = p.alpha - 1.0;
            probe_forward_component = false;
            at_ct_side = false;
            break;
    }

    double values[3];
    for (int i = 0; i < 3; ++i) {
        // x = ct (1 - eps) gives x_bar = eps * c t / (c + v); mirrored at -vt
        double x_bar, x_star;
        if (at_ct_side) {
            x_bar = kProbeEps[i] * p.c * t / (p.c + p.v);
            x_star = t - x_bar;
        } else {
            x_star = kProbeEps[i] * p.v * t / (p.c + p.v);
            x_bar = t - x_star;
        }
        values[i] = probe_forward_component
                        ? forward_density_tc(p, x_bar, x_star, ctl).value
                        : backward_density_tc(p, x_bar, x_star, ctl).value;
    }

    const bool finite_regime =
        which == BoundaryCase::BAtCt ||
        (which == BoundaryCase::FAtCt && p.beta == 1.0) ||
        (which == BoundaryCase::BAtMinusVt && p.alpha == 1.0);

    if (finite_regime) {
        check.regime = "finite";
        const BoundaryLimit lim = boundary_limit(p, which, t);
        check.expected = lim.value;
        check.observed = values[2];
        double errs[3];
        for (int i = 0; i < 3; ++i) errs[i] = std::fabs(values[i] / lim.value - 1.0);
        bool pass = errs[2] <= 1e-3;
        if (!pass) {
            // a shape below 1 on the probed side slows the edge convergence
            // to O(eps^shape); accept when the error shrinks at that rate
            const double rate =
                at_ct_side ? std::min(1.0, p.beta) : std::min(1.0, p.alpha);
            if (errs[0] > errs[1] && errs[1] > errs[2] && errs[2] > 0.0 &&
                errs[2] <= 0.1) {
                const double err_slope = -std::log10(errs[2] / errs[0]) / 2.0;
                pass = std::fabs(err_slope - rate) <= 0.2;
            }
        }
        check.passed = pass;
        return check;
    }

    check.regime = exponent < 0.0 ? "divergent" : "vanishing";
    // predicted slope of log10(value) against log10(eps)
    check.expected = exponent;
    if (values[0] <= 0.0 || values[1] <= 0.0 || values[2] <= 0.0) {
        // underflowed to zero: accept as vanishing if non-increasing
        check.observed = 0.0;
        check.passed = exponent > 0.0 && values[0] >= values[1] && values[1] >= values[2];
        return check;
    }
    const double slope = std::log10(values[2] / values[0]) / 2.0 * -1.0;
    check.observed = slope;
    const bool monotone = exponent < 0.0
                              ? (values[0] < values[1] && values[1] < values[2])
                              : (values[0] > values[1] && values[1] > values[2]);
    check.passed = monotone && std::fabs(slope - exponent) <= 0.1;
    return check;
}

}  // namespace detail

/// Everything validate() measured, with pass/fail already applied. NaN marks
/// a quantity that was skipped (no samples, or asymmetric parameters for the
/// mean).
struct ValidationReport {
    double normalization_defect = std::numeric_limits<double>::quiet_NaN();
    double l1_histogram_distance = std::numeric_limits<double>::quiet_NaN();
    double bins_within_3sigma = std::numeric_limits<double>::quiet_NaN();
    double atom_z_score = std::numeric_limits<double>::quiet_NaN();
    double mean_z_score = std::numeric_limits<double>::quiet_NaN();
    bool simulation_skipped = false;
    bool mean_checked = false;
    bool normalization_ok = false;
    std::vector<LimitCheck> limit_checks;
    std::vector<std::string> errors;  // component failures folded into the report

    bool all_passed() const {
        if (!errors.empty()) return false;
        if (!normalization_ok) return false;
        for (const auto& check : limit_checks)
            if (!check.passed) return false;
        if (!simulation_skipped) {
            if (!(std::fabs(atom_z_score) <= 4.0)) return false;
            if (!(bins_within_3sigma >= 0.95)) return false;
            if (mean_checked && !(std::fabs(mean_z_score) <= 4.0)) return false;
        }
        return true;
    }
};

/// Full validation pass: normalization defect, the four boundary probes, and
/// (when n_samples > 0) ensemble-versus-analytic atom/histogram/mean checks.
/// Component failures become report entries instead of exceptions, so a
/// report is always produced. Deterministic for fixed arguments.
inline ValidationReport validate(const MotionParams& p, double t, InitialVelocity v0,
                                 long n_samples, std::uint64_t seed, int n_bins = 100) {
    p.validate();
    if (!(t > 0.0))
        throw std::domain_error("validate: t must be positive");
    ValidationReport report;

    double atom = std::numeric_limits<double>::quiet_NaN();
    try {
        atom = atom_probability(p, t, v0);
        const double integral = integrate_density(p, t, v0, 1e-8);
        report.normalization_defect = std::fabs(1.0 - atom - integral);
        report.normalization_ok = report.normalization_defect <= 1e-6;
    } catch (const std::exception& e) {
        report.errors.push_back(std::string("normalization: ") + e.what());
    }

    // probes are defined on the forward-started law; mirror first if needed
    const MotionParams q = v0 == InitialVelocity::Forward ? p : p.reflected();
    for (BoundaryCase which : {BoundaryCase::FAtMinusVt, BoundaryCase::FAtCt,
                               BoundaryCase::BAtCt, BoundaryCase::BAtMinusVt}) {
        try {
            report.limit_checks.push_back(detail::limit_probe(q, which, t));
        } catch (const std::exception& e) {
            LimitCheck failed;
            failed.label = "probe";
            failed.regime = "error";
            failed.passed = false;
            report.limit_checks.push_back(failed);
            report.errors.push_back(std::string("limit probe: ") + e.what());
        }
    }

    if (n_samples <= 0) {
        report.simulation_skipped = true;
        return report;
    }

    try {
        const EmpiricalLaw emp = ensemble(p, t, v0, n_samples, n_bins, seed);
        const std::vector<double> masses = bin_analytic_masses(p, t, v0, emp.bin_edges);

        const double atom_se = std::sqrt(atom * (1.0 - atom) / n_samples);
        report.atom_z_score = (emp.atom_frequency - atom) / atom_se;

        int within = 0;
        double l1 = 0.0;
        for (size_t i = 0; i < masses.size(); ++i) {
            const double se = std::sqrt(masses[i] * (1.0 - masses[i]) / n_samples);
            if (std::fabs(emp.bin_masses[i] - masses[i]) <= 3.0 * se) ++within;
            l1 += std::fabs(emp.bin_masses[i] - masses[i]);
        }
        report.l1_histogram_distance = l1;
        report.bins_within_3sigma = static_cast<double>(within) / masses.size();

        if (p.symmetric()) {
            const SymmetricGammaParams sym{p.c, p.v, p.lambda, p.alpha};
            const double analytic_mean = mean_conditional(sym, t, v0);
            const double se = std::sqrt(emp.position_variance / n_samples);
            report.mean_z_score = (emp.position_mean - analytic_mean) / se;
            report.mean_checked = true;
        }
    } catch (const std::exception& e) {
        report.errors.push_back(std::string("simulation checks: ") + e.what());
    }
    return report;
}

}  // namespace gammatel
