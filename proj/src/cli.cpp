#include "sgmc/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "sgmc/report_io.hpp"

namespace sgmc::cli {

using nlohmann::json;

namespace {

json config_echo(const RunConfig& c) {
    return json{{"basis",
                 {{"n_modes", c.n_modes},
                  {"lambda", c.lambda_preset},
                  {"lambda_scale", c.lambda_scale},
                  {"mu", c.mu_preset},
                  {"mu_scale", c.mu_scale}}},
                {"coefficients",
                 {{"drift", c.drift},
                  {"drift_param", c.drift_param},
                  {"sigma", c.sigma},
                  {"sigma_param", c.sigma_param},
                  {"jump", c.jump},
                  {"jump_param", c.jump_param}}},
                {"noise",
                 {{"spec", c.jump_spec}, {"intensity", c.jump_intensity}, {"mark_param", c.mark_param}}},
                {"sim",
                 {{"T", c.T},
                  {"dt", c.dt},
                  {"n", c.n},
                  {"m_levels", c.m_levels},
                  {"n_paths", c.n_paths},
                  {"seed", c.seed},
                  {"scheme", c.scheme},
                  {"initial", c.initial}}},
                {"diagnostics",
                 {{"z_threshold", c.z_threshold},
                  {"allowed_fail_fraction", c.allowed_fail_fraction},
                  {"h_threshold", c.h_threshold},
                  {"drift_corruption", c.drift_corruption},
                  {"theta", c.theta}}}};
}

json martingale_json(const MartingaleReport& report, const RunConfig& cfg) {
    json entries = json::array();
    for (const auto& e : report.entries)
        entries.push_back({{"f", e.f_name},
                           {"s_index", e.s_index},
                           {"t_index", e.t_index},
                           {"weight", e.weight_name},
                           {"mean", e.mean},
                           {"std_error", e.std_error},
                           {"z", e.z},
                           {"degenerate", e.degenerate},
                           {"pass", e.pass}});
    return json{{"report", "martingale"},
                {"config", config_echo(cfg)},
                {"z_threshold", report.z_threshold},
                {"combinations", report.entries.size()},
                {"fail_count", report.fail_count},
                {"fail_fraction", report.fail_fraction},
                {"allowed_fail_fraction", report.allowed_fail_fraction},
                {"pass", report.pass},
                {"entries", entries}};
}

int grid_index(double t, double dt) { return static_cast<int>(std::llround(t / dt)); }

std::vector<double> probe_times_on_grid(const RunConfig& cfg) {
    std::vector<double> times;
    for (double t : cfg.probe_times_or_default()) {
        const int idx = grid_index(t, cfg.dt);
        times.push_back(idx * cfg.dt);
    }
    return times;
}

void log_line(bool quiet, const std::string& line) {
    if (!quiet) std::cout << line << '\n';
}

}  // namespace

MpPanel standard_mp_panel(const SpectralBasis& basis, const SimConfig& sim) {
    MpPanel panel;
    const int modes = std::min(3, basis.n_modes);
    for (int k = 1; k <= modes; ++k) {
        HilbertVector y = HilbertVector::mode(k, 1.0, basis.n_modes);
        panel.fs.push_back(TestFunction::compact_bump(0.0, 0.6, y));
        panel.fs.push_back(TestFunction::compact_bump(0.2, 1.0, y));
        panel.fs.push_back(TestFunction::smooth_saturating(1.0, y));
        panel.fs.push_back(TestFunction::smooth_saturating(2.0, y));
    }
    // A mixed direction across the first two modes.
    if (basis.n_modes >= 2) {
        HilbertVector y = HilbertVector::zero(basis.n_modes);
        y[0] = 0.8;
        y[1] = 0.6;
        panel.fs.push_back(TestFunction::smooth_saturating(1.0, y));
        panel.fs.push_back(TestFunction::compact_bump(0.0, 0.8, y));
    }
    const int steps = sim.steps();
    panel.windows = {{0, steps / 4}, {steps / 4, steps / 2}, {steps / 2, steps}};
    panel.weights.push_back(WeightSpec::one());
    if (basis.n_modes >= 1) {
        WeightSpec w;
        w.name = "tanh<X_0,h1>";
        w.factors.push_back({0, TestFunction::smooth_saturating(1.0, HilbertVector::mode(1, 1.0, basis.n_modes))});
        panel.weights.push_back(std::move(w));
    }
    return panel;
}

std::vector<TestFunction> weak_panel(const SpectralBasis& basis) {
    std::vector<TestFunction> panel;
    const int modes = std::min(3, basis.n_modes);
    for (int k = 1; k <= modes; ++k) {
        HilbertVector y = HilbertVector::mode(k, 1.0, basis.n_modes);
        panel.push_back(TestFunction::smooth_saturating(0.5, y));
        panel.push_back(TestFunction::compact_bump(0.0, 1.0, y));
    }
    return panel;
}

int cmd_simulate(const RunConfig& cfg, bool quiet) {
    const SpectralBasis basis = cfg.make_basis();
    CoefficientSet coeffs = cfg.make_coefficients(basis);
    if (cfg.n > 0) coeffs = mollified(coeffs, cfg.n, basis);
    const JumpMeasureSpec jumps = cfg.make_jumps();
    const SimConfig sim = cfg.make_sim(basis);
    const Ensemble ens = simulate_ensemble(sim, coeffs, basis, jumps, cfg.seed, cfg.n_paths);

    ArtifactWriter out(cfg.out_dir);
    const int steps = sim.steps();
    const int stride = std::max(1, steps / 200);
    std::vector<std::string> header = {"time"};
    for (int k = 1; k <= basis.n_modes; ++k) {
        header.push_back("mean_mode" + std::to_string(k));
        header.push_back("var_mode" + std::to_string(k));
    }
    std::vector<std::vector<double>> rows;
    std::vector<PlotSeries> series(static_cast<std::size_t>(std::min(3, basis.n_modes)));
    for (int i = 0; i <= steps; i += stride) {
        const auto stats = mode_marginals(ens, i);
        std::vector<double> row = {i * cfg.dt};
        for (const auto& s : stats) {
            row.push_back(s.mean);
            row.push_back(s.variance);
        }
        rows.push_back(std::move(row));
        for (std::size_t k = 0; k < series.size(); ++k) {
            series[k].name = "var mode " + std::to_string(k + 1);
            series[k].x.push_back(i * cfg.dt);
            series[k].y.push_back(stats[k].variance);
        }
    }
    out.add("marginals.csv", csv_format(header, rows));
    out.add("marginals.svg", svg_line_chart("mode variance vs time", "t", "variance", series));

    if (cfg.write_paths) {
        std::vector<std::string> phead = {"time"};
        for (int k = 1; k <= basis.n_modes; ++k) phead.push_back("mode" + std::to_string(k));
        for (int p = 0; p < std::min(8, ens.n_paths()); ++p) {
            std::vector<std::vector<double>> prow;
            for (int i = 0; i <= steps; ++i) {
                std::vector<double> row = {i * cfg.dt};
                auto s = ens.paths[static_cast<std::size_t>(p)].state(i);
                row.insert(row.end(), s.begin(), s.end());
                prow.push_back(std::move(row));
            }
            out.add("path" + std::to_string(p) + ".csv", csv_format(phead, prow));
        }
    }

    json meta = {{"command", "simulate"},
                 {"config", config_echo(cfg)},
                 {"n_paths", ens.n_paths()},
                 {"exploded_count", ens.exploded_count},
                 {"pass", true}};
    out.add("ensemble.json", meta.dump(2) + "\n");
    out.write_manifest();
    log_line(quiet, "simulate: wrote " + std::to_string(rows.size()) + " marginal rows, exploded " +
                        std::to_string(ens.exploded_count));
    return 0;
}

int cmd_heat_demo(const RunConfig& cfg, bool quiet) {
    const SpectralBasis basis = cfg.make_basis();
    const CoefficientSet coeffs = cfg.make_coefficients(basis);
    const JumpMeasureSpec jumps = cfg.make_jumps();
    const SimConfig sim = cfg.make_sim(basis);
    const Ensemble ens = simulate_ensemble(sim, coeffs, basis, jumps, cfg.seed, cfg.n_paths);

    // Mode variances against the closed-form values; the closed form only
    // describes the driftless jump-free dynamics started at the origin.
    bool zero_start = cfg.initial == "point";
    for (double c : cfg.initial_coeffs) zero_start = zero_start && c == 0.0;
    const bool oracle_applies = cfg.drift == "zero" && cfg.jump == "none" && zero_start &&
                                (cfg.sigma == "identity" || cfg.sigma == "scalar");
    const std::vector<double> times = probe_times_on_grid(cfg);
    const int check_modes = oracle_applies ? std::min(3, basis.n_modes) : 0;
    bool variance_pass = true;
    std::vector<std::vector<double>> rows;
    json checks = json::array();
    for (double t : times) {
        const int idx = grid_index(t, cfg.dt);
        const auto stats = mode_marginals(ens, idx);
        for (int k = 1; k <= check_modes; ++k) {
            const double mu = basis.mu[static_cast<std::size_t>(k - 1)];
            const double sig = cfg.sigma == "scalar" ? cfg.sigma_param : 1.0;
            const double exact = sig * sig * ou_mode_variance(mu, t);
            const double observed = stats[static_cast<std::size_t>(k - 1)].variance;
            const double se = exact * std::sqrt(2.0 / (ens.n_paths() - 1));
            const double z = (observed - exact) / se;
            const bool pass = std::abs(z) < cfg.z_threshold;
            variance_pass = variance_pass && pass;
            rows.push_back({t, static_cast<double>(k), observed, exact, z});
            checks.push_back({{"t", t},
                              {"mode", k},
                              {"observed", observed},
                              {"exact", exact},
                              {"z", z},
                              {"pass", pass}});
        }
    }

    const MpPanel panel = standard_mp_panel(basis, sim);
    const MartingaleReport mp =
        martingale_test(ens, panel.fs, panel.windows, cfg.m_levels.back(), PathNorm::B,
                        panel.weights, coeffs, basis, jumps, TruncationSpec{cfg.h_threshold},
                        cfg.z_threshold, cfg.allowed_fail_fraction);

    ArtifactWriter out(cfg.out_dir);
    out.add("variance_check.csv",
            csv_format({"time", "mode", "observed_var", "exact_var", "z"}, rows));

    // Variance trajectory plot for the leading modes; the exact curve is
    // drawn only when the closed form applies.
    const int steps = sim.steps();
    const int stride = std::max(1, steps / 200);
    std::vector<PlotSeries> series;
    for (int k = 1; k <= std::min(3, basis.n_modes); ++k) {
        PlotSeries emp{"mode " + std::to_string(k) + " empirical", {}, {}};
        PlotSeries exact{"mode " + std::to_string(k) + " exact", {}, {}};
        for (int i = 0; i <= steps; i += stride) {
            const auto stats = mode_marginals(ens, i);
            const double mu = basis.mu[static_cast<std::size_t>(k - 1)];
            emp.x.push_back(i * cfg.dt);
            emp.y.push_back(stats[static_cast<std::size_t>(k - 1)].variance);
            exact.x.push_back(i * cfg.dt);
            exact.y.push_back(ou_mode_variance(mu, i * cfg.dt));
        }
        series.push_back(std::move(emp));
        if (oracle_applies) series.push_back(std::move(exact));
    }
    out.add("variance.svg",
            svg_line_chart("stochastic heat: mode variance", "t", "variance", series));
    out.add("martingale.json", martingale_json(mp, cfg).dump(2) + "\n");

    const bool pass = variance_pass && mp.pass;
    json meta = {{"command", "heat-demo"},
                 {"config", config_echo(cfg)},
                 {"variance_oracle_applies", oracle_applies},
                 {"variance_checks", checks},
                 {"variance_pass", variance_pass},
                 {"martingale_pass", mp.pass},
                 {"pass", pass}};
    out.add("heat_demo.json", meta.dump(2) + "\n");
    out.write_manifest();
    log_line(quiet, std::string("heat-demo: variance ") + (variance_pass ? "pass" : "FAIL") +
                        ", martingale " + (mp.pass ? "pass" : "FAIL"));
    return pass ? 0 : 1;
}

int cmd_verify_mp(const RunConfig& cfg, bool quiet) {
    const SpectralBasis basis = cfg.make_basis();
    const CoefficientSet coeffs = cfg.make_coefficients(basis);
    const JumpMeasureSpec jumps = cfg.make_jumps();
    const SimConfig sim = cfg.make_sim(basis);

    CoefficientSet sim_coeffs = coeffs;
    if (cfg.drift_corruption != 0.0)
        sim_coeffs = shifted_drift(
            coeffs, HilbertVector::mode(1, cfg.drift_corruption, basis.n_modes));
    if (cfg.n > 0) sim_coeffs = mollified(sim_coeffs, cfg.n, basis);

    const Ensemble ens = simulate_ensemble(sim, sim_coeffs, basis, jumps, cfg.seed, cfg.n_paths);
    const MpPanel panel = standard_mp_panel(basis, sim);
    // Generator evaluation always uses the declared (unshifted) coefficients.
    const MartingaleReport mp =
        martingale_test(ens, panel.fs, panel.windows, cfg.m_levels.back(), PathNorm::B,
                        panel.weights, cfg.n > 0 ? mollified(coeffs, cfg.n, basis) : coeffs,
                        basis, jumps, TruncationSpec{cfg.h_threshold}, cfg.z_threshold,
                        cfg.allowed_fail_fraction);

    ArtifactWriter out(cfg.out_dir);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < mp.entries.size(); ++i) {
        const auto& e = mp.entries[i];
        rows.push_back({static_cast<double>(i), e.s_index * cfg.dt, e.t_index * cfg.dt, e.mean,
                        e.std_error, e.z, e.pass ? 1.0 : 0.0});
    }
    out.add("martingale.csv",
            csv_format({"combo", "s", "t", "mean", "std_error", "z", "pass"}, rows));
    out.add("martingale.json", martingale_json(mp, cfg).dump(2) + "\n");
    json meta = {{"command", "verify-mp"},
                 {"config", config_echo(cfg)},
                 {"combinations", mp.entries.size()},
                 {"fail_fraction", mp.fail_fraction},
                 {"pass", mp.pass}};
    out.add("verify_mp.json", meta.dump(2) + "\n");
    out.write_manifest();

    if (!mp.pass && !quiet) {
        std::cerr << "verify-mp: FAIL, offending z-scores:\n";
        for (const auto& e : mp.entries)
            if (!e.pass)
                std::cerr << "  f=" << e.f_name << " window=[" << e.s_index * cfg.dt << ","
                          << e.t_index * cfg.dt << "] weight=" << e.weight_name << " z=" << e.z
                          << '\n';
    }
    log_line(quiet, std::string("verify-mp: ") + (mp.pass ? "pass" : "FAIL") + " (" +
                        std::to_string(mp.fail_count) + "/" + std::to_string(mp.entries.size()) +
                        " combos failed)");
    return mp.pass ? 0 : 1;
}

int cmd_tightness(const RunConfig& cfg, bool quiet) {
    const SpectralBasis basis = cfg.make_basis();
    CoefficientSet coeffs = cfg.make_coefficients(basis);
    if (cfg.n > 0) coeffs = mollified(coeffs, cfg.n, basis);
    const JumpMeasureSpec jumps = cfg.make_jumps();
    const SimConfig sim = cfg.make_sim(basis);
    const Ensemble ens = simulate_ensemble(sim, coeffs, basis, jumps, cfg.seed, cfg.n_paths);

    ArtifactWriter out(cfg.out_dir);
    const std::vector<double> times = probe_times_on_grid(cfg);
    const auto containment = compact_containment(ens, times, cfg.containment_eps, basis);
    std::vector<std::vector<double>> crow;
    for (const auto& r : containment) crow.push_back({r.t, r.radius});
    out.add("containment.csv", csv_format({"time", "k_radius_q95"}, crow));

    const std::vector<double> thetas = {cfg.T / 16.0, cfg.T / 8.0, cfg.T / 4.0};
    const auto wrows = w_prime_summary(ens, thetas, cfg.T);
    std::vector<std::vector<double>> wcsv;
    for (const auto& r : wrows) wcsv.push_back({r.theta, r.mean, r.q90, r.max});
    out.add("wprime.csv", csv_format({"theta", "mean", "q90", "max"}, wcsv));

    // Aldous exceedance over shrinking displacement h.
    const RhoSpec rho{RhoSpec::Kind::Deterministic, cfg.T / 2.0, 0.0, PathNorm::B, cfg.T / 2.0};
    const double eps = cfg.aldous_eps;
    std::vector<std::vector<double>> arows;
    std::vector<AldousResult> aresults;
    std::vector<double> hs = {cfg.T / 8.0, cfg.T / 16.0, cfg.T / 32.0};
    for (double h : hs) {
        const double h_grid = std::max(cfg.dt, std::round(h / cfg.dt) * cfg.dt);
        const AldousResult a =
            aldous_statistic(sim, coeffs, basis, jumps, rho, h_grid, eps, cfg.n_paths, cfg.seed + 1);
        aresults.push_back(a);
        arows.push_back({h_grid, a.probability, a.std_error});
    }
    out.add("aldous.csv", csv_format({"h", "probability", "std_error"}, arows));

    bool aldous_pass = true;
    for (std::size_t i = 1; i < aresults.size(); ++i)
        if (aresults[i].probability >
            aresults[i - 1].probability +
                cfg.z_threshold * (aresults[i].std_error + aresults[i - 1].std_error + 1e-12))
            aldous_pass = false;

    PlotSeries aseries{"P(|X_{rho+h}-X_rho| >= eps)", {}, {}};
    for (const auto& row : arows) {
        aseries.x.push_back(row[0]);
        aseries.y.push_back(row[1]);
    }
    out.add("aldous.svg", svg_line_chart("displacement exceedance vs h", "h", "probability",
                                         {aseries}));

    json meta = {{"command", "tightness"},
                 {"config", config_echo(cfg)},
                 {"containment_eps", cfg.containment_eps},
                 {"aldous_eps", eps},
                 {"aldous_pass", aldous_pass},
                 {"exploded_count", ens.exploded_count},
                 {"pass", aldous_pass}};
    out.add("tightness.json", meta.dump(2) + "\n");
    out.write_manifest();
    log_line(quiet, std::string("tightness: ") + (aldous_pass ? "pass" : "FAIL"));
    return aldous_pass ? 0 : 1;
}

int cmd_feller(const RunConfig& cfg, bool quiet) {
    const SpectralBasis basis = cfg.make_basis();
    CoefficientSet coeffs = cfg.make_coefficients(basis);
    if (cfg.n > 0) coeffs = mollified(coeffs, cfg.n, basis);
    const JumpMeasureSpec jumps = cfg.make_jumps();
    const SimConfig sim = cfg.make_sim(basis);

    HilbertVector x_limit = HilbertVector::zero(basis.n_modes);
    for (int i = 0; i < std::min<int>(static_cast<int>(cfg.initial_coeffs.size()), basis.n_modes); ++i)
        x_limit[i] = cfg.initial_coeffs[static_cast<std::size_t>(i)];
    std::vector<HilbertVector> x_seq;
    for (int k = 1; k <= 3; ++k)
        x_seq.push_back(x_limit + HilbertVector::mode(1, std::pow(2.0, -k), basis.n_modes));

    const FellerReport report =
        feller_probe(coeffs, basis, jumps, x_seq, x_limit, sim, weak_panel(basis),
                     probe_times_on_grid(cfg), cfg.n_paths, cfg.seed);

    ArtifactWriter out(cfg.out_dir);
    std::vector<std::vector<double>> rows;
    PlotSeries series{"weak distance", {}, {}};
    for (const auto& r : report.rows) {
        rows.push_back({r.x_distance, r.weak_dist, r.std_error});
        series.x.push_back(r.x_distance);
        series.y.push_back(r.weak_dist);
    }
    out.add("feller.csv", csv_format({"x_distance", "weak_distance", "std_error"}, rows));
    out.add("feller.svg",
            svg_line_chart("weak distance vs initial-point distance", "|x_k - x|_B",
                           "panel distance", {series}));
    json meta = {{"command", "feller"}, {"config", config_echo(cfg)}, {"pass", report.pass}};
    out.add("feller.json", meta.dump(2) + "\n");
    out.write_manifest();
    log_line(quiet, std::string("feller: ") + (report.pass ? "pass" : "FAIL"));
    return report.pass ? 0 : 1;
}

int cmd_galerkin_scan(const RunConfig& cfg, bool quiet) {
    const SpectralBasis basis = cfg.make_basis();
    const CoefficientSet coeffs = cfg.make_coefficients(basis);
    const JumpMeasureSpec jumps = cfg.make_jumps();
    const SimConfig sim = cfg.make_sim(basis);

    std::vector<int> n_list;
    for (int n : {2, 4, 8})
        if (n <= basis.n_modes) n_list.push_back(n);
    if (n_list.size() < 2) {
        log_line(quiet, "galerkin-scan: basis too small for a scan");
        return 1;
    }
    const auto rows = galerkin_limit_scan(coeffs, basis, jumps, n_list, weak_panel(basis),
                                          probe_times_on_grid(cfg), sim, cfg.n_paths, cfg.seed);

    bool pass = true;
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].distance >
            rows[i - 1].distance + cfg.z_threshold * (rows[i].std_error + rows[i - 1].std_error))
            pass = false;

    ArtifactWriter out(cfg.out_dir);
    std::vector<std::vector<double>> csv;
    PlotSeries series{"consecutive weak distance", {}, {}};
    for (const auto& r : rows) {
        csv.push_back({static_cast<double>(r.n_from), static_cast<double>(r.n_to), r.distance,
                       r.std_error});
        series.x.push_back(r.n_to);
        series.y.push_back(r.distance);
    }
    out.add("galerkin_scan.csv", csv_format({"n_from", "n_to", "distance", "std_error"}, csv));
    out.add("galerkin_scan.svg",
            svg_line_chart("approximant Cauchy trend", "n", "weak distance", {series}));
    json meta = {{"command", "galerkin-scan"}, {"config", config_echo(cfg)}, {"pass", pass}};
    out.add("galerkin_scan.json", meta.dump(2) + "\n");
    out.write_manifest();
    log_line(quiet, std::string("galerkin-scan: ") + (pass ? "pass" : "FAIL"));
    return pass ? 0 : 1;
}

int cmd_factorization(const RunConfig& cfg, bool quiet) {
    const SpectralBasis basis = cfg.make_basis();
    const CoefficientSet coeffs = cfg.make_coefficients(basis);
    const SigmaMatrix sigma = coeffs.sigma(HilbertVector::zero(basis.n_modes));

    const std::vector<double> dt_list = {cfg.T / 256.0, cfg.T / 512.0, cfg.T / 1024.0};
    const FactorizationReport report =
        factorization_check(cfg.theta, sigma, basis, cfg.T, dt_list, 2048, cfg.seed);

    bool shrinking = true;
    for (std::size_t i = 1; i < report.rows.size(); ++i)
        if (report.rows[i].sup_discrepancy >= report.rows[i - 1].sup_discrepancy)
            shrinking = false;
    const bool beta_ok = report.beta_rel_error < 0.02;
    const bool pass = shrinking && beta_ok;

    ArtifactWriter out(cfg.out_dir);
    std::vector<std::vector<double>> rows;
    PlotSeries series{"sup discrepancy", {}, {}};
    for (const auto& r : report.rows) {
        rows.push_back({r.dt, r.sup_discrepancy});
        series.x.push_back(r.dt);
        series.y.push_back(r.sup_discrepancy);
    }
    out.add("factorization.csv", csv_format({"dt", "sup_discrepancy"}, rows));
    out.add("factorization.svg",
            svg_line_chart("factorization discrepancy vs dt", "dt", "sup |direct - factorized|",
                           {series}));
    json meta = {{"command", "factorization"},
                 {"config", config_echo(cfg)},
                 {"theta", report.theta},
                 {"beta_value", report.beta_value},
                 {"beta_rel_error", report.beta_rel_error},
                 {"beta_cells", report.beta_cells},
                 {"shrinking", shrinking},
                 {"pass", pass}};
    out.add("factorization.json", meta.dump(2) + "\n");
    out.write_manifest();
    log_line(quiet, std::string("factorization: ") + (pass ? "pass" : "FAIL") +
                        " (beta rel err " + std::to_string(report.beta_rel_error) + ")");
    return pass ? 0 : 1;
}

namespace {

void print_usage() {
    std::cout
        << "usage: sgmc <command> [--config PATH] [--seed N] [--out DIR] [--paths N] [--quiet]\n"
           "\n"
           "commands:\n"
           "  simulate       run an ensemble, write marginal statistics\n"
           "  heat-demo      stochastic heat benchmark: variance oracle + martingale report\n"
           "  verify-mp      Monte Carlo martingale-problem certification\n"
           "  tightness      compact containment, cadlag modulus, displacement exceedance\n"
           "  feller         weak continuity in the initial point\n"
           "  galerkin-scan  weak-distance Cauchy trend across approximation levels\n"
           "  factorization  stochastic-convolution factorization identity\n"
           "\n"
           "flags:\n"
           "  --config PATH  key-value config file (sections [basis] [coefficients] [noise]\n"
           "                 [sim] [diagnostics] [output]); defaults used when absent\n"
           "  --seed N       override [sim] seed\n"
           "  --out DIR      override [output] dir (also SGMC_OUT environment variable)\n"
           "  --paths N      override [sim] n_paths\n"
           "  --quiet        suppress progress lines\n"
           "\n"
        << config_documentation();
}

}  // namespace

int run_main(int argc, const char* const* argv) {
    if (argc < 2) {
        print_usage();
        return 2;
    }
    const std::string command = argv[1];
    if (command == "--help" || command == "-h" || command == "help") {
        print_usage();
        return 0;
    }

    std::string config_path, out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int n_paths = 0;
    bool quiet = false;
    for (int i = 2; i < argc; ++i) {
        const std::string arg = argv[i];
        auto next = [&](const char* what) -> std::string {
            if (i + 1 >= argc) throw std::runtime_error(std::string("missing value for ") + what);
            return argv[++i];
        };
        try {
            if (arg == "--config")
                config_path = next("--config");
            else if (arg == "--seed") {
                seed = std::stoull(next("--seed"));
                seed_set = true;
            } else if (arg == "--out")
                out_dir = next("--out");
            else if (arg == "--paths")
                n_paths = std::stoi(next("--paths"));
            else if (arg == "--quiet")
                quiet = true;
            else {
                std::cerr << "unknown flag: " << arg << "\n";
                return 2;
            }
        } catch (const std::exception& e) {
            std::cerr << "argument error: " << e.what() << "\n";
            return 2;
        }
    }

    RunConfig cfg;
    try {
        if (!config_path.empty()) cfg = parse_config_file(config_path);
    } catch (const ConfigError& e) {
        std::cerr << "config error(s):\n" << e.what();
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    if (seed_set) cfg.seed = seed;
    if (n_paths > 0) cfg.n_paths = n_paths;
    if (!out_dir.empty()) {
        cfg.out_dir = out_dir;
    } else if (config_path.empty() || cfg.out_dir == "out") {
        if (const char* env = std::getenv("SGMC_OUT")) cfg.out_dir = env;
    }

    try {
        if (command == "simulate") return cmd_simulate(cfg, quiet);
        if (command == "heat-demo") return cmd_heat_demo(cfg, quiet);
        if (command == "verify-mp") return cmd_verify_mp(cfg, quiet);
        if (command == "tightness") return cmd_tightness(cfg, quiet);
        if (command == "feller") return cmd_feller(cfg, quiet);
        if (command == "galerkin-scan") return cmd_galerkin_scan(cfg, quiet);
        if (command == "factorization") return cmd_factorization(cfg, quiet);
    } catch (const std::exception& e) {
        std::cerr << command << " failed: " << e.what() << "\n";
        return 3;
    }
    std::cerr << "unknown command: " << command << "\n";
    print_usage();
    return 2;
}

}  // namespace sgmc::cli
