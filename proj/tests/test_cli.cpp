#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace {

struct CliResult {
    int exit_code;
    std::string out;
    std::string err;
};

CliResult run_cli(const std::string& args) {
    static int counter = 0;
    const std::string err_path = "/tmp/gammatel_cli_err_" + std::to_string(counter++) + ".txt";
    const std::string cmd = std::string(GAMMATEL_CLI_PATH) + " " + args + " 2>" + err_path;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
    const int status = pclose(pipe);
    std::ifstream err_file(err_path);
    std::stringstream err;
    err << err_file.rdbuf();
    std::remove(err_path.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out, err.str()};
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) lines.push_back(line);
    return lines;
}

std::vector<double> parse_csv_row(const std::string& line) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    return row;
}

}  // namespace

TEST_CASE("cli density: divergent figure-style curve") {
    const CliResult r = run_cli(
        "density --c 1 --v 1 --lambda 1 --mu 1 --alpha 0.5 --beta 0.5 --t 1 "
        "--grid-points 101");
    REQUIRE(r.exit_code == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 103);  // header + rows + trailing comment
    REQUIRE(lines[0] == "x,f,b,p");
    REQUIRE(lines.back().rfind("# atom_probability=", 0) == 0);
    REQUIRE(lines.back().find("truncation_index_f_max=") != std::string::npos);
    REQUIRE(lines.back().find("truncation_index_b_max=") != std::string::npos);

    std::vector<std::vector<double>> rows;
    for (size_t i = 1; i + 1 < lines.size(); ++i) rows.push_back(parse_csv_row(lines[i]));
    for (const auto& row : rows) {
        REQUIRE(row.size() == 4);
        REQUIRE(row[1] >= 0.0);
        REQUIRE(row[2] >= 0.0);
        REQUIRE(row[3] == Catch::Approx(row[1] + row[2]).epsilon(1e-9));
    }
    // density climbs toward both support endpoints for shape 1/2
    const double mid = rows[50][3];
    REQUIRE(rows.front()[3] > mid);
    REQUIRE(rows.back()[3] > mid);
    // grid is inset by 1e-6 (c+v) t from the endpoints
    REQUIRE(rows.front()[0] == Catch::Approx(-1.0 + 2e-6));
    REQUIRE(rows.back()[0] == Catch::Approx(1.0 - 2e-6));
}

TEST_CASE("cli density: single-point grid lands mid-support") {
    const CliResult r = run_cli("density --t 2 --alpha 1.5 --beta 1.5 --grid-points 1");
    REQUIRE(r.exit_code == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 3);
    const auto row = parse_csv_row(lines[1]);
    REQUIRE(row[0] == 0.0);  // (c - v) t / 2 with c = v
}

TEST_CASE("cli density output is deterministic") {
    const std::string args = "density --t 1 --alpha 1.5 --beta 0.5 --grid-points 17";
    const CliResult a = run_cli(args);
    const CliResult b = run_cli(args);
    REQUIRE(a.exit_code == 0);
    REQUIRE(a.out == b.out);
}

TEST_CASE("cli mean: exponential case with closed-form column") {
    const CliResult r =
        run_cli("mean --c 1 --v 1 --lambda 1 --alpha 1 --t-start 0 --t-end 2 --t-step 0.5");
    REQUIRE(r.exit_code == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines[0] == "t,mean,closed_form");
    REQUIRE(lines.size() == 6);  // header + 5 rows
    const auto row0 = parse_csv_row(lines[1]);
    REQUIRE(row0[0] == 0.0);
    REQUIRE(row0[1] == 0.0);
    REQUIRE(row0[2] == 0.0);
    for (size_t i = 2; i < lines.size(); ++i) {
        const auto row = parse_csv_row(lines[i]);
        const double t = row[0];
        const double expected = 0.5 * (1.0 - std::exp(-2.0 * t));
        REQUIRE(row[1] == Catch::Approx(expected).margin(1e-8));
        REQUIRE(row[2] == Catch::Approx(expected).margin(1e-9));
        REQUIRE(std::fabs(row[1] - row[2]) <= 1e-8);
    }
}

TEST_CASE("cli mean: degenerate range emits one zero row") {
    const CliResult r = run_cli("mean --alpha 2 --t-start 0 --t-end 0");
    REQUIRE(r.exit_code == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 2);
    REQUIRE(lines[1] == "0,0,0");
}

TEST_CASE("cli mean: fractional shape has no closed-form column") {
    const CliResult r = run_cli("mean --alpha 0.75 --t-start 0.5 --t-end 1 --t-step 0.25");
    REQUIRE(r.exit_code == 0);
    REQUIRE(lines_of(r.out)[0] == "t,mean");
}

TEST_CASE("cli mean: asymmetric sojourn parameters are refused") {
    const CliResult r = run_cli("mean --lambda 1 --mu 2 --t-start 0 --t-end 1 --t-step 0.5");
    REQUIRE(r.exit_code == 1);
    REQUIRE(r.err.find("--mu") != std::string::npos);
}

TEST_CASE("cli mean: backward start flips the curve") {
    const CliResult fwd = run_cli("mean --alpha 1 --t-start 1 --t-end 1 --v0 forward");
    const CliResult bwd = run_cli("mean --alpha 1 --t-start 1 --t-end 1 --v0 backward");
    REQUIRE(fwd.exit_code == 0);
    REQUIRE(bwd.exit_code == 0);
    const double f = parse_csv_row(lines_of(fwd.out)[1])[1];
    const double b = parse_csv_row(lines_of(bwd.out)[1])[1];
    REQUIRE(f == Catch::Approx(-b).epsilon(1e-12));
}

TEST_CASE("cli simulate: histogram partition and determinism") {
    const std::string args =
        "simulate --alpha 1.5 --beta 1.5 --t 3 --samples 20000 --bins 40 --seed 7";
    const CliResult r = run_cli(args);
    REQUIRE(r.exit_code == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines[0] == "bin_center,empirical_density,analytic_density");
    REQUIRE(lines.size() == 42);
    const std::string& comment = lines.back();
    REQUIRE(comment.rfind("# samples=20000", 0) == 0);
    const auto freq_pos = comment.find("atom_frequency=");
    REQUIRE(freq_pos != std::string::npos);
    const double atom_freq = std::stod(comment.substr(freq_pos + 15));

    const double width = 6.0 / 40.0;
    double mass = atom_freq;
    double analytic_mass = 0.0;
    for (size_t i = 1; i + 1 < lines.size(); ++i) {
        const auto row = parse_csv_row(lines[i]);
        REQUIRE(row.size() == 3);
        mass += row[1] * width;
        analytic_mass += row[2] * width;
    }
    REQUIRE(mass == Catch::Approx(1.0).margin(1e-9));
    const double atom = 0.11161022509471256;  // Q(3/2, 3)
    REQUIRE(analytic_mass == Catch::Approx(1.0 - atom).margin(1e-6));

    const CliResult again = run_cli(args);
    REQUIRE(again.out == r.out);
}

TEST_CASE("cli validate: exponential defaults pass") {
    const CliResult r = run_cli("validate --t 1 --samples 50000 --seed 3");
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.out.find("overall=pass") != std::string::npos);
    REQUIRE(r.out.find("normalization=pass") != std::string::npos);
    REQUIRE(r.out.find("simulation=ok") != std::string::npos);
    REQUIRE(r.out.find("limit_f_at_ct=pass") != std::string::npos);
    REQUIRE(r.out.find("mean_z_score=") != std::string::npos);
}

TEST_CASE("cli validate: zero samples skip the simulation checks") {
    const CliResult r = run_cli("validate --t 1 --samples 0");
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.out.find("simulation=skipped") != std::string::npos);
    REQUIRE(r.out.find("overall=pass") != std::string::npos);
}

TEST_CASE("cli validate: divergent-boundary configuration passes its probes") {
    const CliResult r =
        run_cli("validate --alpha 0.5 --beta 0.5 --t 1 --samples 0");
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.out.find("limit_f_at_ct=pass") != std::string::npos);
    REQUIRE(r.out.find("limit_f_at_ct_regime=divergent") != std::string::npos);
    REQUIRE(r.out.find("limit_b_at_minus_vt_regime=divergent") != std::string::npos);
    REQUIRE(r.out.find("overall=pass") != std::string::npos);
}

TEST_CASE("cli parameter errors exit with code 1 naming the flag") {
    SECTION("non-positive time") {
        const CliResult r = run_cli("density --t -1");
        REQUIRE(r.exit_code == 1);
        REQUIRE(r.err.find("--t") != std::string::npos);
    }
    SECTION("non-positive shape") {
        const CliResult r = run_cli("density --t 1 --alpha 0");
        REQUIRE(r.exit_code == 1);
        REQUIRE(r.err.find("--alpha") != std::string::npos);
    }
    SECTION("unknown flag") {
        const CliResult r = run_cli("density --t 1 --bogus 3");
        REQUIRE(r.exit_code == 1);
    }
    SECTION("missing subcommand") {
        const CliResult r = run_cli("");
        REQUIRE(r.exit_code == 1);
    }
    SECTION("bad v0") {
        const CliResult r = run_cli("density --t 1 --v0 sideways");
        REQUIRE(r.exit_code == 1);
        REQUIRE(r.err.find("--v0") != std::string::npos);
    }
}

TEST_CASE("cli --out writes the same bytes as stdout") {
    const std::string path = "/tmp/gammatel_cli_out_test.csv";
    const CliResult direct = run_cli("density --t 1 --grid-points 9");
    const CliResult filed = run_cli("density --t 1 --grid-points 9 --out " + path);
    REQUIRE(filed.exit_code == 0);
    REQUIRE(filed.out.empty());
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    std::remove(path.c_str());
    REQUIRE(ss.str() == direct.out);
}
