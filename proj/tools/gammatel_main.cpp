// Command-line front end: density curves, mean curves, simulation summaries
// and validation reports as CSV / key=value text, for plotting and CI.
//
// Exit codes: 0 success, 1 parameter error, 2 convergence or quadrature
// failure, 3 validation failure.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "gammatel/gammatel.hpp"

namespace {

using namespace gammatel;

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

struct RunConfig {
    double c = 1.0;
    double v = 1.0;
    double lambda = 1.0;
    double alpha = 1.0;
    double mu = 1.0;
    double beta = 1.0;
    double t = 1.0;
    double t_start = 0.0;
    double t_end = 5.0;
    double t_step = 0.01;
    std::string v0 = "forward";
    long grid_points = 201;
    long samples = 200000;
    int bins = 100;
    std::uint64_t seed = 1;
    double rel_tol = 1e-12;
    std::string out;
};

MotionParams motion_of(const RunConfig& cfg) {
    return {cfg.c, cfg.v, cfg.lambda, cfg.alpha, cfg.mu, cfg.beta};
}

InitialVelocity v0_of(const RunConfig& cfg) {
    return cfg.v0 == "backward" ? InitialVelocity::Backward : InitialVelocity::Forward;
}

SeriesControl ctl_of(const RunConfig& cfg) {
    SeriesControl ctl;
    ctl.rel_tol = cfg.rel_tol;
    return ctl;
}

// Stream to --out when given, stdout otherwise.
class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_)
                throw std::domain_error("--out: cannot open '" + path + "' for writing");
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

int cmd_density(const RunConfig& cfg) {
    const MotionParams p = motion_of(cfg);
    const InitialVelocity v0 = v0_of(cfg);
    const SeriesControl ctl = ctl_of(cfg);
    const double t = cfg.t;
    const double delta = 1e-6 * (p.c + p.v) * t;
    const double lo = -p.v * t + delta;
    const double hi = p.c * t - delta;

    Output out(cfg.out);
    std::ostream& os = out.stream();
    os << "x,f,b,p\n";
    int max_f = 0;
    int max_b = 0;
    const long n = cfg.grid_points;
    for (long i = 0; i < n; ++i) {
        const double x = n == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * i / (n - 1);
        const LawPoint lp = density(p, x, t, v0, ctl);
        os << fmt(x) << ',' << fmt(lp.forward_density) << ',' << fmt(lp.backward_density)
           << ',' << fmt(lp.total_density) << '\n';
        max_f = std::max(max_f, lp.truncation_index_f);
        max_b = std::max(max_b, lp.truncation_index_b);
    }
    os << "# atom_probability=" << fmt(atom_probability(p, t, v0))
       << " truncation_index_f_max=" << max_f << " truncation_index_b_max=" << max_b
       << '\n';
    return 0;
}

int cmd_mean(const RunConfig& cfg, bool mu_given, bool beta_given) {
    if ((mu_given && cfg.mu != cfg.lambda) || (beta_given && cfg.beta != cfg.alpha)) {
        std::cerr << "mean: unsupported configuration: the mean formulas require "
                     "identically distributed sojourns (--mu equal to --lambda and "
                     "--beta equal to --alpha)\n";
        return 1;
    }
    if (cfg.t_start > cfg.t_end) {
        std::cerr << "mean: --t-start must not exceed --t-end\n";
        return 1;
    }
    if (cfg.t_start < cfg.t_end && !(cfg.t_step > 0.0)) {
        std::cerr << "mean: --t-step must be positive for a non-degenerate range\n";
        return 1;
    }

    const SymmetricGammaParams sym{cfg.c, cfg.v, cfg.lambda, cfg.alpha};
    const InitialVelocity v0 = v0_of(cfg);
    const SeriesControl ctl = ctl_of(cfg);
    const bool has_closed_form =
        cfg.alpha == std::floor(cfg.alpha) && cfg.alpha >= 1.0 && cfg.alpha <= 4.0;
    const int n_closed = has_closed_form ? static_cast<int>(cfg.alpha) : 0;

    Output out(cfg.out);
    std::ostream& os = out.stream();
    os << (has_closed_form ? "t,mean,closed_form\n" : "t,mean\n");

    const long count =
        cfg.t_start == cfg.t_end
            ? 1
            : static_cast<long>(std::floor((cfg.t_end - cfg.t_start) / cfg.t_step + 1e-9)) + 1;
    for (long i = 0; i < count; ++i) {
        const double ti = cfg.t_start + i * cfg.t_step;
        const double mean = ti == 0.0 ? 0.0 : mean_conditional(sym, ti, v0, ctl);
        os << fmt(ti) << ',' << fmt(mean);
        if (has_closed_form) {
            const double closed =
                ti == 0.0 ? 0.0 : erlang_mean_closed_form(n_closed, sym, ti, v0);
            os << ',' << fmt(closed);
        }
        os << '\n';
    }
    return 0;
}

int cmd_simulate(const RunConfig& cfg) {
    const MotionParams p = motion_of(cfg);
    const InitialVelocity v0 = v0_of(cfg);
    if (cfg.samples < 1) {
        std::cerr << "simulate: --samples must be at least 1\n";
        return 1;
    }
    const EmpiricalLaw emp = ensemble(p, cfg.t, v0, cfg.samples, cfg.bins, cfg.seed);
    const std::vector<double> masses = bin_analytic_masses(p, cfg.t, v0, emp.bin_edges);

    Output out(cfg.out);
    std::ostream& os = out.stream();
    os << "bin_center,empirical_density,analytic_density\n";
    for (int b = 0; b < cfg.bins; ++b) {
        const double w = emp.bin_edges[b + 1] - emp.bin_edges[b];
        const double center = 0.5 * (emp.bin_edges[b] + emp.bin_edges[b + 1]);
        os << fmt(center) << ',' << fmt(emp.bin_masses[b] / w) << ','
           << fmt(masses[b] / w) << '\n';
    }
    os << "# samples=" << emp.sample_count << " atom_frequency=" << fmt(emp.atom_frequency)
       << " atom_probability=" << fmt(atom_probability(p, cfg.t, v0))
       << " forward_fraction="
       << fmt(static_cast<double>(emp.forward_count) / emp.sample_count) << '\n';
    return 0;
}

int cmd_validate(const RunConfig& cfg) {
    const MotionParams p = motion_of(cfg);
    const ValidationReport report =
        validate(p, cfg.t, v0_of(cfg), cfg.samples, cfg.seed, cfg.bins);

    Output out(cfg.out);
    std::ostream& os = out.stream();
    os << "normalization_defect=" << fmt(report.normalization_defect) << '\n';
    os << "normalization=" << (report.normalization_ok ? "pass" : "fail") << '\n';
    for (const auto& check : report.limit_checks) {
        os << "limit_" << check.label << '=' << (check.passed ? "pass" : "fail") << '\n';
        os << "limit_" << check.label << "_regime=" << check.regime << '\n';
        os << "limit_" << check.label << "_observed=" << fmt(check.observed) << '\n';
        os << "limit_" << check.label << "_expected=" << fmt(check.expected) << '\n';
    }
    if (report.simulation_skipped) {
        os << "simulation=skipped\n";
    } else {
        os << "simulation=ok\n";
        os << "atom_z_score=" << fmt(report.atom_z_score) << '\n';
        os << "l1_histogram_distance=" << fmt(report.l1_histogram_distance) << '\n';
        os << "bins_within_3sigma=" << fmt(report.bins_within_3sigma) << '\n';
        os << "mean_z_score="
           << (report.mean_checked ? fmt(report.mean_z_score) : std::string("skipped"))
           << '\n';
    }
    for (const auto& err : report.errors) os << "error=" << err << '\n';
    const bool ok = report.all_passed();
    os << "overall=" << (ok ? "pass" : "fail") << '\n';
    return ok ? 0 : 3;
}

void add_motion_options(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--c", cfg.c, "forward speed")->check(CLI::PositiveNumber);
    sub->add_option("--v", cfg.v, "backward speed")->check(CLI::PositiveNumber);
    sub->add_option("--lambda", cfg.lambda, "forward sojourn rate")
        ->check(CLI::PositiveNumber);
    sub->add_option("--alpha", cfg.alpha, "forward sojourn shape")
        ->check(CLI::PositiveNumber);
}

void add_v0_option(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--v0", cfg.v0, "initial direction")
        ->check(CLI::IsMember({"forward", "backward"}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "gammatel: exact law, moments and Monte Carlo validation of a "
        "two-velocity random motion with gamma-distributed switching times"};
    app.require_subcommand(1);
    RunConfig cfg;

    CLI::App* density_cmd =
        app.add_subcommand("density", "emit x,f,b,p over a spatial grid at one time");
    add_motion_options(density_cmd, cfg);
    density_cmd->add_option("--mu", cfg.mu, "backward sojourn rate")
        ->check(CLI::PositiveNumber);
    density_cmd->add_option("--beta", cfg.beta, "backward sojourn shape")
        ->check(CLI::PositiveNumber);
    density_cmd->add_option("--t", cfg.t, "time")->required()->check(CLI::PositiveNumber);
    density_cmd->add_option("--grid-points", cfg.grid_points, "number of x rows")
        ->check(CLI::PositiveNumber);
    add_v0_option(density_cmd, cfg);
    density_cmd->add_option("--rel-tol", cfg.rel_tol, "series tolerance")
        ->check(CLI::PositiveNumber);
    density_cmd->add_option("--out", cfg.out, "output path (default stdout)");

    CLI::App* mean_cmd =
        app.add_subcommand("mean", "emit t,mean over a time range (identical sojourn laws)");
    add_motion_options(mean_cmd, cfg);
    CLI::Option* mean_mu = mean_cmd->add_option("--mu", cfg.mu, "backward sojourn rate")
                               ->check(CLI::PositiveNumber);
    CLI::Option* mean_beta = mean_cmd->add_option("--beta", cfg.beta, "backward sojourn shape")
                                 ->check(CLI::PositiveNumber);
    mean_cmd->add_option("--t-start", cfg.t_start, "range start")
        ->required()
        ->check(CLI::NonNegativeNumber);
    mean_cmd->add_option("--t-end", cfg.t_end, "range end")
        ->required()
        ->check(CLI::NonNegativeNumber);
    mean_cmd->add_option("--t-step", cfg.t_step, "range step");
    add_v0_option(mean_cmd, cfg);
    mean_cmd->add_option("--rel-tol", cfg.rel_tol, "series tolerance")
        ->check(CLI::PositiveNumber);
    mean_cmd->add_option("--out", cfg.out, "output path (default stdout)");

    CLI::App* sim_cmd = app.add_subcommand(
        "simulate", "emit bin_center,empirical_density,analytic_density from an ensemble");
    add_motion_options(sim_cmd, cfg);
    sim_cmd->add_option("--mu", cfg.mu, "backward sojourn rate")->check(CLI::PositiveNumber);
    sim_cmd->add_option("--beta", cfg.beta, "backward sojourn shape")
        ->check(CLI::PositiveNumber);
    sim_cmd->add_option("--t", cfg.t, "time")->required()->check(CLI::PositiveNumber);
    sim_cmd->add_option("--samples", cfg.samples, "number of paths")
        ->check(CLI::PositiveNumber);
    sim_cmd->add_option("--bins", cfg.bins, "number of histogram bins")
        ->check(CLI::PositiveNumber);
    sim_cmd->add_option("--seed", cfg.seed, "RNG seed");
    add_v0_option(sim_cmd, cfg);
    sim_cmd->add_option("--rel-tol", cfg.rel_tol, "series tolerance")
        ->check(CLI::PositiveNumber);
    sim_cmd->add_option("--out", cfg.out, "output path (default stdout)");

    CLI::App* val_cmd =
        app.add_subcommand("validate", "run the validation report (exit 3 on failure)");
    add_motion_options(val_cmd, cfg);
    val_cmd->add_option("--mu", cfg.mu, "backward sojourn rate")->check(CLI::PositiveNumber);
    val_cmd->add_option("--beta", cfg.beta, "backward sojourn shape")
        ->check(CLI::PositiveNumber);
    val_cmd->add_option("--t", cfg.t, "time")->required()->check(CLI::PositiveNumber);
    val_cmd->add_option("--samples", cfg.samples,
                        "number of paths (0 skips the simulation checks)")
        ->check(CLI::NonNegativeNumber);
    val_cmd->add_option("--bins", cfg.bins, "number of histogram bins")
        ->check(CLI::PositiveNumber);
    val_cmd->add_option("--seed", cfg.seed, "RNG seed");
    add_v0_option(val_cmd, cfg);
    val_cmd->add_option("--out", cfg.out, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints the offending flag
        return 1;
    }

    try {
        if (app.got_subcommand(density_cmd)) return cmd_density(cfg);
        if (app.got_subcommand(mean_cmd))
            return cmd_mean(cfg, mean_mu->count() > 0, mean_beta->count() > 0);
        if (app.got_subcommand(sim_cmd)) return cmd_simulate(cfg);
        if (app.got_subcommand(val_cmd)) return cmd_validate(cfg);
    } catch (const gammatel::ConvergenceError& e) {
        std::cerr << "convergence failure: " << e.what() << '\n';
        return 2;
    } catch (const gammatel::QuadratureError& e) {
        std::cerr << "quadrature failure: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "parameter error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
