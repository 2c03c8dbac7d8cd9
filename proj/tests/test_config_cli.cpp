#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "sgmc/cli.hpp"
#include "sgmc/config.hpp"
#include "sgmc/report_io.hpp"

using namespace sgmc;
namespace fs = std::filesystem;

namespace {

std::string temp_dir(const std::string& tag) {
    const fs::path p = fs::temp_directory_path() / ("sgmc_test_" + tag);
    fs::remove_all(p);
    return p.string();
}

bool has_issue(const ConfigError& e, const std::string& kind, const std::string& fragment,
               int line = -1) {
    for (const auto& issue : e.issues())
        if (issue.kind == kind && issue.message.find(fragment) != std::string::npos &&
            (line < 0 || issue.line == line))
            return true;
    return false;
}

}  // namespace

TEST_CASE("empty config text yields the documented defaults") {
    const RunConfig cfg = parse_config("");
    CHECK(cfg.n_modes == 16);
    CHECK(cfg.lambda_preset == "harmonic");
    CHECK(cfg.mu_preset == "heat-1d");
    CHECK(cfg.drift == "zero");
    CHECK(cfg.sigma == "identity");
    CHECK(cfg.T == 1.0);
    CHECK(cfg.dt == 1e-3);
    CHECK(cfg.n_paths == 1000);
    CHECK(cfg.seed == 42);
    CHECK(cfg.scheme == "exponential-euler");
    CHECK(cfg.out_dir == "out");
}

TEST_CASE("full valid config round trip") {
    const std::string text = R"(
# scenario: jump diffusion
[basis]
n_modes = 8
lambda = harmonic
mu = heat-1d

[coefficients]
drift = bounded-nemytskii
drift_param = 0.5
sigma = scalar
sigma_param = 2.0
jump = linear-mark

[noise]
spec = compound-gaussian-marks
intensity = 1.5
mark_param = 0.3

[sim]
T = 2.0
dt = 0.002
n_paths = 128
seed = 7
m_levels = 5, 10, 20

[diagnostics]
theta = 0.3
probe_times = 0.5, 1.0, 2.0

[output]
dir = results
write_paths = true
)";
    const RunConfig cfg = parse_config(text);
    CHECK(cfg.n_modes == 8);
    CHECK(cfg.drift == "bounded-nemytskii");
    CHECK(cfg.sigma_param == 2.0);
    CHECK(cfg.jump == "linear-mark");
    CHECK(cfg.jump_spec == "compound-gaussian-marks");
    CHECK(cfg.jump_intensity == 1.5);
    CHECK(cfg.T == 2.0);
    CHECK(cfg.seed == 7);
    CHECK(cfg.m_levels == std::vector<double>{5.0, 10.0, 20.0});
    CHECK(cfg.theta == 0.3);
    CHECK(cfg.out_dir == "results");
    CHECK(cfg.write_paths);
}

TEST_CASE("dt = 0 is a constraint error") {
    try {
        parse_config("[sim]\ndt = 0\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(has_issue(e, "ConstraintError", "dt must be > 0"));
    }
}

TEST_CASE("unknown key is a schema error naming the key and its line") {
    try {
        parse_config("[basis]\nn_modes = 4\nfoo = 1\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(has_issue(e, "SchemaError", "foo", 3));
    }
}

TEST_CASE("unknown section, type mismatch, bad level ordering") {
    try {
        parse_config("[nope]\nx = 1\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(has_issue(e, "SchemaError", "unknown section", 2));
    }
    try {
        parse_config("[sim]\nn_paths = many\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(has_issue(e, "SchemaError", "type mismatch", 2));
    }
    try {
        parse_config("[sim]\nm_levels = 10, 5\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(has_issue(e, "ConstraintError", "strictly increasing"));
    }
}

TEST_CASE("keys outside a section are rejected") {
    try {
        parse_config("n_modes = 4\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(has_issue(e, "SchemaError", "outside any section", 1));
    }
}

TEST_CASE("builders produce consistent objects") {
    RunConfig cfg = parse_config("[basis]\nn_modes = 6\n[sim]\nT = 0.5\ndt = 0.005\n");
    const SpectralBasis basis = cfg.make_basis();
    CHECK(basis.n_modes == 6);
    CHECK(basis.lambda[0] == 1.0);
    CHECK(basis.mu[1] == doctest::Approx(-4.0 * M_PI * M_PI));
    const SimConfig sim = cfg.make_sim(basis);
    CHECK(sim.steps() == 100);
    CHECK_NOTHROW(sim.validate());
}

TEST_CASE("heat-demo command is deterministic byte for byte") {
    RunConfig cfg = parse_config(
        "[sim]\nT = 0.25\ndt = 0.001\nn_paths = 800\nseed = 5\n"
        "[diagnostics]\nprobe_times = 0.1, 0.25\n");
    cfg.out_dir = temp_dir("det_a");
    REQUIRE(cli::cmd_heat_demo(cfg, true) == 0);
    RunConfig cfg2 = cfg;
    cfg2.out_dir = temp_dir("det_b");
    REQUIRE(cli::cmd_heat_demo(cfg2, true) == 0);
    CHECK(read_file(fs::path(cfg.out_dir) / "MANIFEST") ==
          read_file(fs::path(cfg2.out_dir) / "MANIFEST"));
    CHECK(read_file(fs::path(cfg.out_dir) / "variance_check.csv") ==
          read_file(fs::path(cfg2.out_dir) / "variance_check.csv"));
    // and the manifest is non-trivial
    CHECK(read_file(fs::path(cfg.out_dir) / "MANIFEST").find("fnv1a64:") == 0);
}

TEST_CASE("simulate twice produces byte-identical CSV artifacts") {
    RunConfig cfg = parse_config("[sim]\nT = 0.1\ndt = 0.001\nn_paths = 60\nseed = 9\n"
                                 "[diagnostics]\nprobe_times = 0.05, 0.1\n"
                                 "[output]\nwrite_paths = true\n");
    cfg.out_dir = temp_dir("sim_a");
    REQUIRE(cli::cmd_simulate(cfg, true) == 0);
    RunConfig cfg2 = cfg;
    cfg2.out_dir = temp_dir("sim_b");
    REQUIRE(cli::cmd_simulate(cfg2, true) == 0);
    CHECK(read_file(fs::path(cfg.out_dir) / "marginals.csv") ==
          read_file(fs::path(cfg2.out_dir) / "marginals.csv"));
    CHECK(read_file(fs::path(cfg.out_dir) / "path0.csv") ==
          read_file(fs::path(cfg2.out_dir) / "path0.csv"));
    CHECK(read_file(fs::path(cfg.out_dir) / "MANIFEST") ==
          read_file(fs::path(cfg2.out_dir) / "MANIFEST"));
}

TEST_CASE("verify-mp: clean scenario passes, corrupted drift fails") {
    RunConfig cfg = parse_config(
        "[basis]\nn_modes = 8\n"
        "[sim]\nT = 0.5\ndt = 0.002\nn_paths = 2000\nseed = 12\n"
        "[diagnostics]\nprobe_times = 0.25, 0.5\n");
    cfg.out_dir = temp_dir("mp_clean");
    CHECK(cli::cmd_verify_mp(cfg, true) == 0);

    RunConfig bad = cfg;
    bad.drift_corruption = 1.0;
    bad.out_dir = temp_dir("mp_bad");
    CHECK(cli::cmd_verify_mp(bad, true) == 1);
    // the failure report is machine readable and flags the failure
    const std::string report = read_file(fs::path(bad.out_dir) / "verify_mp.json");
    CHECK(report.find("\"pass\": false") != std::string::npos);
}

TEST_CASE("factorization command on the single-mode scenario") {
    RunConfig cfg = parse_config(
        "[basis]\nn_modes = 1\nlambda = constant\nmu = zero\n"
        "[coefficients]\nsigma = scalar\nsigma_param = 1.0\n"
        "[sim]\nT = 1.0\ndt = 0.001\nseed = 3\n"
        "[diagnostics]\ntheta = 0.25\nprobe_times = 0.5\n");
    cfg.out_dir = temp_dir("fact");
    CHECK(cli::cmd_factorization(cfg, true) == 0);
    CHECK(fs::exists(fs::path(cfg.out_dir) / "factorization.csv"));
    CHECK(fs::exists(fs::path(cfg.out_dir) / "factorization.svg"));
    CHECK(fs::exists(fs::path(cfg.out_dir) / "MANIFEST"));
}

TEST_CASE("run_main: help, unknown command, unknown flag") {
    const char* help[] = {"sgmc", "--help"};
    CHECK(cli::run_main(2, help) == 0);
    const char* bad[] = {"sgmc", "transmogrify"};
    CHECK(cli::run_main(2, bad) == 2);
    const char* badflag[] = {"sgmc", "simulate", "--frobnicate"};
    CHECK(cli::run_main(3, badflag) == 2);
}

TEST_CASE("run_main overrides: seed, paths, out") {
    const std::string out = temp_dir("cli_out");
    const char* argv[] = {"sgmc", "simulate", "--seed", "11", "--paths", "10",
                          "--out", out.c_str(), "--quiet"};
    CHECK(cli::run_main(9, argv) == 0);
    CHECK(fs::exists(fs::path(out) / "MANIFEST"));
}

TEST_CASE("csv formatting uses 17 significant digits") {
    const std::string csv = csv_format({"time", "value"}, {{0.1, 1.0 / 3.0}});
    CHECK(csv.find("time,value\n") == 0);
    CHECK(csv.find("0.33333333333333331") != std::string::npos);
}

TEST_CASE("svg chart is self-contained and deterministic") {
    const PlotSeries s{"series", {0.0, 1.0, 2.0}, {0.0, 1.0, 4.0}};
    const std::string svg = svg_line_chart("title", "x", "y", {s});
    CHECK(svg.find("<svg") == 0);
    CHECK(svg.find("polyline") != std::string::npos);
    CHECK(svg == svg_line_chart("title", "x", "y", {s}));
}

TEST_CASE("tightness, feller and galerkin-scan commands run end to end") {
    RunConfig cfg = parse_config(
        "[basis]\nn_modes = 8\n"
        "[coefficients]\ndrift = heat-drift\ndrift_param = 1.0\n"
        "[sim]\nT = 0.5\ndt = 0.005\nn_paths = 300\nseed = 21\n"
        "[diagnostics]\nprobe_times = 0.25, 0.5\n");
    cfg.out_dir = temp_dir("tight");
    CHECK(cli::cmd_tightness(cfg, true) == 0);
    CHECK(fs::exists(fs::path(cfg.out_dir) / "containment.csv"));
    CHECK(fs::exists(fs::path(cfg.out_dir) / "wprime.csv"));
    CHECK(fs::exists(fs::path(cfg.out_dir) / "aldous.csv"));

    RunConfig fcfg = cfg;
    fcfg.out_dir = temp_dir("feller");
    fcfg.n_paths = 400;
    CHECK(cli::cmd_feller(fcfg, true) == 0);
    CHECK(fs::exists(fs::path(fcfg.out_dir) / "feller.csv"));

    RunConfig gcfg = parse_config(
        "[basis]\nn_modes = 8\n"
        "[coefficients]\ndrift = bounded-nemytskii\ndrift_param = 1.0\n"
        "[sim]\nT = 0.2\ndt = 0.002\nn_paths = 200\nseed = 31\n"
        "[diagnostics]\nprobe_times = 0.1, 0.2\n");
    gcfg.out_dir = temp_dir("gscan");
    CHECK(cli::cmd_galerkin_scan(gcfg, true) == 0);
    CHECK(fs::exists(fs::path(gcfg.out_dir) / "galerkin_scan.csv"));
    CHECK(fs::exists(fs::path(gcfg.out_dir) / "MANIFEST"));
}
