#include "sgmc/diagnostics.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sgmc/numerics.hpp"

namespace sgmc {

double WeightSpec::eval(const SamplePath& path) const {
    double w = 1.0;
    for (const auto& [idx, f] : factors) w *= f.eval(path.state(idx));
    return w;
}

int WeightSpec::max_index() const {
    int m = 0;
    for (const auto& [idx, f] : factors) m = std::max(m, idx);
    return m;
}

namespace {

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
    bool degenerate = false;
};

MeanSe mean_se(const std::vector<double>& values) {
    MeanSe r;
    const double n = static_cast<double>(values.size());
    for (double v : values) r.mean += v;
    r.mean /= n;
    double ss = 0.0;
    for (double v : values) ss += (v - r.mean) * (v - r.mean);
    const double var = values.size() > 1 ? ss / (n - 1.0) : 0.0;
    r.se = std::sqrt(var / n);
    r.degenerate = ss == 0.0;
    return r;
}

}  // namespace

MartingaleReport martingale_test(const Ensemble& ensemble, const std::vector<TestFunction>& f_list,
                                 const std::vector<std::pair<int, int>>& windows, double m,
                                 PathNorm norm, const std::vector<WeightSpec>& weights,
                                 const CoefficientSet& coeffs, const SpectralBasis& basis,
                                 const JumpMeasureSpec& jumps, const TruncationSpec& h,
                                 double z_threshold, double allowed_fail_fraction) {
    const int n_paths = ensemble.n_paths();
    const int grid = ensemble.paths.front().grid_points();
    int max_t = 0;
    for (const auto& [s, t] : windows) {
        if (s > t || t >= grid) throw std::invalid_argument("martingale_test: bad window");
        max_t = std::max(max_t, t);
        for (const WeightSpec& w : weights)
            if (w.max_index() > s)
                throw std::invalid_argument(
                    "martingale_test: weight depends on marginals after the window start");
    }

    const std::size_t combos = f_list.size() * windows.size() * weights.size();
    std::vector<std::vector<double>> residuals(combos,
                                               std::vector<double>(static_cast<std::size_t>(n_paths)));

#pragma omp parallel for schedule(dynamic, 4)
    for (int p = 0; p < n_paths; ++p) {
        const SamplePath& path = ensemble.paths[static_cast<std::size_t>(p)];
        const int tau = tau_z_index(path, m, norm, basis);
        std::vector<double> kf_prefix(static_cast<std::size_t>(max_t) + 1);
        for (std::size_t fi = 0; fi < f_list.size(); ++fi) {
            const TestFunction& f = f_list[fi];
            // Prefix sums of Kf at pre-jump (left-limit) states; stopped
            // windows then reduce to prefix differences.
            kf_prefix[0] = 0.0;
            const int kf_top = std::min(max_t, tau);
            for (int j = 0; j < max_t; ++j) {
                const double kf = j < kf_top
                                      ? eval_generator(f, path.state_vec(j), coeffs, basis, jumps, h)
                                      : 0.0;
                kf_prefix[static_cast<std::size_t>(j) + 1] =
                    kf_prefix[static_cast<std::size_t>(j)] + kf;
            }
            for (std::size_t wi = 0; wi < windows.size(); ++wi) {
                const int a = std::min(windows[wi].first, tau);
                const int b = std::min(windows[wi].second, tau);
                const double mf = f.eval(path.state(b)) - f.eval(path.state(a)) -
                                  (kf_prefix[static_cast<std::size_t>(b)] -
                                   kf_prefix[static_cast<std::size_t>(a)]) *
                                      path.dt;
                for (std::size_t ki = 0; ki < weights.size(); ++ki) {
                    const std::size_t combo =
                        (fi * windows.size() + wi) * weights.size() + ki;
                    residuals[combo][static_cast<std::size_t>(p)] =
                        weights[ki].eval(path) * mf;
                }
            }
        }
    }

    MartingaleReport report;
    report.z_threshold = z_threshold;
    report.allowed_fail_fraction = allowed_fail_fraction;
    for (std::size_t fi = 0; fi < f_list.size(); ++fi)
        for (std::size_t wi = 0; wi < windows.size(); ++wi)
            for (std::size_t ki = 0; ki < weights.size(); ++ki) {
                const std::size_t combo = (fi * windows.size() + wi) * weights.size() + ki;
                const MeanSe ms = mean_se(residuals[combo]);
                MartingaleEntry e;
                e.f_name = f_list[fi].name;
                e.s_index = windows[wi].first;
                e.t_index = windows[wi].second;
                e.weight_name = weights[ki].name;
                e.mean = ms.mean;
                e.std_error = ms.se;
                e.degenerate = ms.degenerate;
                if (ms.degenerate) {
                    e.z = 0.0;
                    e.pass = std::abs(ms.mean) <= 1e-12;
                } else {
                    e.z = ms.mean / ms.se;
                    e.pass = std::abs(e.z) < z_threshold;
                }
                if (!e.pass) ++report.fail_count;
                report.entries.push_back(std::move(e));
            }
    report.fail_fraction =
        report.entries.empty() ? 0.0
                               : static_cast<double>(report.fail_count) /
                                     static_cast<double>(report.entries.size());
    report.pass = report.fail_fraction <= allowed_fail_fraction;
    return report;
}

double modulus_w_prime(const SamplePath& path, double theta, double N) {
    if (!(theta > 0.0) || theta > N + 1e-12)
        throw std::invalid_argument("modulus_w_prime: need 0 < theta <= N");
    // Grid points inside [0, N].
    int M = 0;
    while (M + 1 < path.grid_points() && path.times[static_cast<std::size_t>(M) + 1] <= N + 1e-12)
        ++M;
    const int points = M + 1;  // partition candidates t_0..t_M
    if (points < 2) return 0.0;
    // States inside the final half-open window [t_j, N): index M belongs to it
    // only when t_M < N.
    const bool n_on_grid = std::abs(path.times[static_cast<std::size_t>(M)] - N) <=
                           1e-12 * std::max(1.0, N);
    const int end_excl = n_on_grid ? M : M + 1;

    // osc[j][i]: max pairwise B-distance among states j..i-1 (window [t_j, t_i)).
    std::vector<std::vector<double>> osc(static_cast<std::size_t>(points),
                                         std::vector<double>(static_cast<std::size_t>(points + 1), 0.0));
    auto dist = [&](int a, int b) {
        double s = 0.0;
        auto xa = path.state(a), xb = path.state(b);
        for (int k = 0; k < path.n_modes; ++k) {
            const double d = xa[k] - xb[k];
            s += d * d;
        }
        return std::sqrt(s);
    };
    for (int j = points - 1; j >= 0; --j) {
        double rowmax = 0.0;  // max_k<=i dist(j, k), grown with i
        for (int i = j + 1; i <= points; ++i) {
            if (i - 1 > j) rowmax = std::max(rowmax, dist(j, i - 1));
            osc[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] =
                j + 1 < points
                    ? std::max(osc[static_cast<std::size_t>(j) + 1][static_cast<std::size_t>(i)],
                               rowmax)
                    : rowmax;
        }
    }

    // best[i]: min over partitions of [t_0, t_i) with every cell >= theta of
    // the max oscillation; the final cell [t_j, N) is exempt from the spacing
    // constraint.
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> best(static_cast<std::size_t>(points), inf);
    best[0] = 0.0;
    for (int i = 1; i < points; ++i)
        for (int j = 0; j < i; ++j) {
            if (best[static_cast<std::size_t>(j)] == inf) continue;
            if (path.times[static_cast<std::size_t>(i)] - path.times[static_cast<std::size_t>(j)] <
                theta - 1e-12)
                continue;
            best[static_cast<std::size_t>(i)] =
                std::min(best[static_cast<std::size_t>(i)],
                         std::max(best[static_cast<std::size_t>(j)],
                                  osc[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]));
        }
    double result = inf;
    for (int j = 0; j < points; ++j) {
        if (best[static_cast<std::size_t>(j)] == inf) continue;
        const double tail =
            j < end_excl ? osc[static_cast<std::size_t>(j)][static_cast<std::size_t>(end_excl)]
                         : 0.0;
        result = std::min(result, std::max(best[static_cast<std::size_t>(j)], tail));
    }
    return result;
}

std::vector<WPrimeSummaryRow> w_prime_summary(const Ensemble& ensemble,
                                              const std::vector<double>& theta_list, double N) {
    std::vector<WPrimeSummaryRow> rows;
    const int n_paths = ensemble.n_paths();
    for (double theta : theta_list) {
        std::vector<double> values(static_cast<std::size_t>(n_paths));
#pragma omp parallel for schedule(dynamic, 4)
        for (int p = 0; p < n_paths; ++p)
            values[static_cast<std::size_t>(p)] =
                modulus_w_prime(ensemble.paths[static_cast<std::size_t>(p)], theta, N);
        WPrimeSummaryRow row;
        row.theta = theta;
        for (double v : values) row.mean += v;
        row.mean /= n_paths;
        std::vector<double> sorted = values;
        std::sort(sorted.begin(), sorted.end());
        row.q90 = sorted[static_cast<std::size_t>(std::min<int>(
            n_paths - 1, static_cast<int>(std::ceil(0.9 * n_paths)) - 1))];
        row.max = sorted.back();
        rows.push_back(row);
    }
    return rows;
}

AldousResult aldous_statistic(const SimConfig& config, const CoefficientSet& coeffs,
                              const SpectralBasis& basis, const JumpMeasureSpec& jumps,
                              const RhoSpec& rho, double h, double eps, int n_paths,
                              std::uint64_t seed) {
    const double bound = rho.kind == RhoSpec::Kind::Deterministic ? rho.time : rho.bound;
    if (bound + h > config.T + 1e-12)
        throw std::invalid_argument("aldous_statistic: rho bound + h exceeds the horizon");
    Ensemble ens = simulate_ensemble(config, coeffs, basis, jumps, seed, n_paths);
    const int h_steps = static_cast<int>(std::llround(h / config.dt));
    int count = 0;
    for (const SamplePath& path : ens.paths) {
        int rho_idx;
        if (rho.kind == RhoSpec::Kind::Deterministic) {
            rho_idx = static_cast<int>(std::llround(rho.time / config.dt));
        } else {
            rho_idx = std::min(tau_z_index(path, rho.radius, rho.norm, basis),
                               static_cast<int>(std::llround(rho.bound / config.dt)));
        }
        const int after = std::min(rho_idx + h_steps, path.grid_points() - 1);
        double d2 = 0.0;
        auto xa = path.state(rho_idx), xb = path.state(after);
        for (int k = 0; k < path.n_modes; ++k) {
            const double d = xa[k] - xb[k];
            d2 += d * d;
        }
        if (std::sqrt(d2) >= eps) ++count;
    }
    AldousResult res;
    res.n_paths = n_paths;
    res.probability = static_cast<double>(count) / n_paths;
    res.std_error = std::sqrt(res.probability * (1.0 - res.probability) / n_paths);
    return res;
}

std::vector<ContainmentRow> compact_containment(const Ensemble& ensemble,
                                                const std::vector<double>& t_list, double eps,
                                                const SpectralBasis& basis) {
    if (!(eps > 0.0) || eps > 1.0)
        throw std::invalid_argument("compact_containment: eps must lie in (0, 1]");
    std::vector<ContainmentRow> rows;
    for (double t : t_list) {
        const int idx = static_cast<int>(std::llround(t / ensemble.paths.front().dt));
        std::vector<double> norms;
        for (const SamplePath& path : ensemble.paths) {
            if (path.exploded) continue;
            norms.push_back(norm_k(path.state(idx), basis));
        }
        if (norms.empty()) throw std::runtime_error("compact_containment: no non-exploded paths");
        std::sort(norms.begin(), norms.end());
        const int n = static_cast<int>(norms.size());
        const int q = std::max(1, static_cast<int>(std::ceil((1.0 - eps) * n)));
        rows.push_back({t, norms[static_cast<std::size_t>(std::min(q, n) - 1)]});
    }
    return rows;
}

MomentReport moment_bound_check(const Ensemble& ensemble, double k_set_radius,
                                const std::vector<double>& t_horizons, const SpectralBasis& basis) {
    MomentReport report;
    const int n_paths = ensemble.n_paths();
    const double dt = ensemble.paths.front().dt;
    std::vector<double> horizons = t_horizons;
    std::sort(horizons.begin(), horizons.end());

    std::vector<std::vector<double>> sup_at(horizons.size(),
                                            std::vector<double>(static_cast<std::size_t>(n_paths), 0.0));
    int excluded = 0;
    for (int p = 0; p < n_paths; ++p) {
        const SamplePath& path = ensemble.paths[static_cast<std::size_t>(p)];
        if (path.exploded) {
            ++excluded;
            continue;
        }
        const double n0 = norm_k(path.state(0), basis);
        if (n0 > k_set_radius) {
            ++report.z_zero_count;
            continue;  // Z = 0 contributes zero
        }
        double running = 0.0;
        std::size_t hz = 0, pn = 0;
        for (int i = 0; i < path.grid_points() && hz < horizons.size(); ++i) {
            while (pn < path.pre_norms.size() && path.pre_norms[pn].grid_index < i) ++pn;
            if (pn < path.pre_norms.size() && path.pre_norms[pn].grid_index == i)
                running = std::max(running, path.pre_norms[pn].norm_k * path.pre_norms[pn].norm_k);
            const double nk = norm_k(path.state(i), basis);
            running = std::max(running, nk * nk);
            while (hz < horizons.size() &&
                   std::llround(horizons[hz] / dt) == i) {
                sup_at[hz][static_cast<std::size_t>(p)] = running;
                ++hz;
            }
        }
    }
    report.excluded_fraction = static_cast<double>(excluded) / n_paths;

    std::vector<double> log_t, log_e;
    const int counted = n_paths - excluded;
    for (std::size_t hz = 0; hz < horizons.size(); ++hz) {
        double mean = 0.0;
        for (double v : sup_at[hz]) mean += v;
        mean /= std::max(1, counted);
        report.estimates.push_back({horizons[hz], mean});
        log_t.push_back(horizons[hz]);
        log_e.push_back(std::log(mean));
    }
    const AffineFit fit = affine_fit(log_t, log_e);
    report.slope = fit.slope;
    report.intercept = fit.intercept;
    report.fit_residual = fit.max_abs_residual;
    return report;
}

WeakDistanceResult weak_distance(const Ensemble& ens_a, const Ensemble& ens_b,
                                 const std::vector<TestFunction>& f_panel,
                                 const std::vector<double>& t_list) {
    const double dt = ens_a.paths.front().dt;
    if (std::abs(dt - ens_b.paths.front().dt) > 1e-15)
        throw std::invalid_argument("weak_distance: ensembles must share the grid");
    WeakDistanceResult result;
    for (const TestFunction& f : f_panel)
        for (double t : t_list) {
            const int idx = static_cast<int>(std::llround(t / dt));
            std::vector<double> va(static_cast<std::size_t>(ens_a.n_paths()));
            std::vector<double> vb(static_cast<std::size_t>(ens_b.n_paths()));
            for (int p = 0; p < ens_a.n_paths(); ++p)
                va[static_cast<std::size_t>(p)] = f.eval(ens_a.paths[static_cast<std::size_t>(p)].state(idx));
            for (int p = 0; p < ens_b.n_paths(); ++p)
                vb[static_cast<std::size_t>(p)] = f.eval(ens_b.paths[static_cast<std::size_t>(p)].state(idx));
            const MeanSe ma = mean_se(va), mb = mean_se(vb);
            WeakDistanceRow row;
            row.f_name = f.name;
            row.t = t;
            row.mean_a = ma.mean;
            row.mean_b = mb.mean;
            row.diff = std::abs(ma.mean - mb.mean);
            row.std_error = std::sqrt(ma.se * ma.se + mb.se * mb.se);
            if (row.diff > result.distance) {
                result.distance = row.diff;
                result.std_error = row.std_error;
            }
            result.rows.push_back(std::move(row));
        }
    return result;
}

FellerReport feller_probe(const CoefficientSet& coeffs, const SpectralBasis& basis,
                          const JumpMeasureSpec& jumps, const std::vector<HilbertVector>& x_seq,
                          const HilbertVector& x_limit, const SimConfig& sim,
                          const std::vector<TestFunction>& f_panel,
                          const std::vector<double>& t_list, int n_paths, std::uint64_t seed) {
    for (std::size_t i = 1; i < x_seq.size(); ++i)
        if (norm_b(x_seq[i] - x_limit) > norm_b(x_seq[i - 1] - x_limit) + 1e-12)
            throw std::invalid_argument("feller_probe: x_seq must approach x_limit in B-norm");

    SimConfig limit_cfg = sim;
    limit_cfg.initial = InitialLaw::point_mass(x_limit);
    const Ensemble limit_ens = simulate_ensemble(limit_cfg, coeffs, basis, jumps, seed, n_paths);

    FellerReport report;
    for (const HilbertVector& xk : x_seq) {
        SimConfig cfg = sim;
        cfg.initial = InitialLaw::point_mass(xk);
        // Common random numbers: same seed couples the two ensembles.
        const Ensemble ens = simulate_ensemble(cfg, coeffs, basis, jumps, seed, n_paths);
        const WeakDistanceResult wd = weak_distance(ens, limit_ens, f_panel, t_list);
        report.rows.push_back({norm_b(xk - x_limit), wd.distance, wd.std_error});
    }
    report.pass = true;
    for (std::size_t i = 1; i < report.rows.size(); ++i) {
        const double allowance =
            3.0 * (report.rows[i].std_error + report.rows[i - 1].std_error);
        if (report.rows[i].weak_dist > report.rows[i - 1].weak_dist + allowance)
            report.pass = false;
    }
    return report;
}

std::vector<GalerkinRow> galerkin_limit_scan(const CoefficientSet& coeffs,
                                             const SpectralBasis& basis,
                                             const JumpMeasureSpec& jumps,
                                             const std::vector<int>& n_list,
                                             const std::vector<TestFunction>& f_panel,
                                             const std::vector<double>& t_list,
                                             const SimConfig& sim, int n_paths,
                                             std::uint64_t shared_seed) {
    for (std::size_t i = 1; i < n_list.size(); ++i)
        if (n_list[i] <= n_list[i - 1])
            throw std::invalid_argument("galerkin_limit_scan: n_list must be increasing");
    std::vector<GalerkinRow> rows;
    std::vector<Ensemble> ensembles;
    for (int n : n_list) {
        SimConfig cfg = sim;
        cfg.n = n;
        ensembles.push_back(simulate_ensemble(cfg, mollified(coeffs, n, basis), basis, jumps,
                                              shared_seed, n_paths));
    }
    for (std::size_t i = 1; i < ensembles.size(); ++i) {
        const WeakDistanceResult wd =
            weak_distance(ensembles[i - 1], ensembles[i], f_panel, t_list);
        rows.push_back({n_list[i - 1], n_list[i], wd.distance, wd.std_error});
    }
    return rows;
}

std::vector<HilbertVector> apply_g_xi(double xi, const std::vector<HilbertVector>& f_path,
                                      double dt, const SpectralBasis& basis) {
    if (!(xi > 0.0)) throw std::invalid_argument("apply_g_xi: xi must be > 0");
    const int m = static_cast<int>(f_path.size());
    const int n = basis.n_modes;
    std::vector<HilbertVector> out(static_cast<std::size_t>(m), HilbertVector::zero(n));
#pragma omp parallel for schedule(dynamic, 16)
    for (int i = 1; i < m; ++i) {
        HilbertVector acc = HilbertVector::zero(n);
        const double ti = i * dt;
        for (int j = 0; j < i; ++j) {
            const double a = ti - j * dt;
            const double b = ti - (j + 1) * dt;
            const double w = (std::pow(a, xi) - std::pow(b, xi)) / xi;
            const HilbertVector& fj = f_path[static_cast<std::size_t>(j)];
            for (int k = 0; k < std::min(n, fj.size()); ++k)
                acc[k] += w * std::exp(basis.mu[static_cast<std::size_t>(k)] * a) * fj[k];
        }
        out[static_cast<std::size_t>(i)] = std::move(acc);
    }
    return out;
}

double beta_kernel_identity(double theta, int cells) {
    if (cells < 2) throw std::invalid_argument("beta_kernel_identity: need >= 2 cells");
    const double dt = 1.0 / cells;
    double sum = 0.0;
    for (int j = 1; j < cells; ++j) {
        const double sj = j * dt;
        const double w = (std::pow(1.0 - sj, theta) - std::pow(1.0 - (j + 1) * dt, theta)) / theta;
        sum += w * std::pow(sj, -theta);
    }
    return sum;
}

FactorizationReport factorization_check(double theta, const SigmaMatrix& sigma,
                                        const SpectralBasis& basis, double T,
                                        const std::vector<double>& dt_list, int beta_cells,
                                        std::uint64_t seed) {
    if (!(theta > 0.0 && theta < 0.5))
        throw std::invalid_argument("factorization_check: theta must lie in (0, 1/2)");
    FactorizationReport report;
    report.theta = theta;

    std::vector<double> dts = dt_list;
    std::sort(dts.begin(), dts.end(), std::greater<>());
    const double dt_fine = dts.back();
    const int fine_steps = static_cast<int>(std::llround(T / dt_fine));
    const int n = basis.n_modes;

    // One Brownian path at the finest grid; coarser runs sum its increments.
    RandomStream stream(seed, 0);
    std::vector<std::vector<double>> dw_fine(
        static_cast<std::size_t>(fine_steps),
        std::vector<double>(static_cast<std::size_t>(sigma.n_noise)));
    const double sdt = std::sqrt(dt_fine);
    for (auto& row : dw_fine)
        for (double& v : row) v = sdt * stream.next_gaussian();

    for (double dt : dts) {
        const int steps = static_cast<int>(std::llround(T / dt));
        const int ratio = static_cast<int>(std::llround(dt / dt_fine));
        if (std::abs(ratio * dt_fine - dt) > 1e-12 * dt)
            throw std::invalid_argument(
                "factorization_check: dt_list entries must be multiples of the finest dt");
        std::vector<HilbertVector> sig_dw(static_cast<std::size_t>(steps),
                                          HilbertVector::zero(n));
        for (int j = 0; j < steps; ++j) {
            std::vector<double> w(static_cast<std::size_t>(sigma.n_noise), 0.0);
            for (int r = 0; r < ratio; ++r)
                for (int c = 0; c < sigma.n_noise; ++c)
                    w[static_cast<std::size_t>(c)] +=
                        dw_fine[static_cast<std::size_t>(j * ratio + r)][static_cast<std::size_t>(c)];
            sigma.apply_add(w, std::span<double>(sig_dw[static_cast<std::size_t>(j)].coeffs));
        }

        // Direct convolution D(t_i) = sum_{j<i} S_{t_i - r_j} sigma dW_j and
        // the auxiliary process Y(s_i) = sum_{j<i} (s_i - r_j)^{-theta}
        // S_{s_i - r_j} sigma dW_j, both left-endpoint Ito sums.
        std::vector<HilbertVector> direct(static_cast<std::size_t>(steps) + 1,
                                          HilbertVector::zero(n));
        std::vector<HilbertVector> y_theta(static_cast<std::size_t>(steps) + 1,
                                           HilbertVector::zero(n));
#pragma omp parallel for schedule(dynamic, 16)
        for (int i = 1; i <= steps; ++i) {
            HilbertVector d = HilbertVector::zero(n);
            HilbertVector y = HilbertVector::zero(n);
            for (int j = 0; j < i; ++j) {
                const double lag = (i - j) * dt;
                const double kern = std::pow(lag, -theta);
                const HilbertVector& sw = sig_dw[static_cast<std::size_t>(j)];
                for (int k = 0; k < n; ++k) {
                    const double prop = std::exp(basis.mu[static_cast<std::size_t>(k)] * lag) * sw[k];
                    d[k] += prop;
                    y[k] += kern * prop;
                }
            }
            direct[static_cast<std::size_t>(i)] = std::move(d);
            y_theta[static_cast<std::size_t>(i)] = std::move(y);
        }

        const std::vector<HilbertVector> gy = apply_g_xi(theta, y_theta, dt, basis);
        const double scale = std::sin(M_PI * theta) / M_PI;
        double sup = 0.0;
        for (int i = 0; i <= steps; ++i)
            sup = std::max(sup, norm_b(direct[static_cast<std::size_t>(i)] -
                                       scale * gy[static_cast<std::size_t>(i)]));
        report.rows.push_back({dt, sup});
    }

    report.beta_cells = beta_cells;
    report.beta_value = beta_kernel_identity(theta, beta_cells);
    const double exact = M_PI / std::sin(M_PI * theta);
    report.beta_rel_error = std::abs(report.beta_value - exact) / exact;
    return report;
}

std::vector<ModeStat> mode_marginals(const Ensemble& ensemble, int t_index) {
    const int n = ensemble.n_modes;
    const int n_paths = ensemble.n_paths();
    std::vector<ModeStat> stats(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) stats[static_cast<std::size_t>(k)].mode = k + 1;
    for (const SamplePath& path : ensemble.paths) {
        auto s = path.state(t_index);
        for (int k = 0; k < n; ++k) stats[static_cast<std::size_t>(k)].mean += s[k];
    }
    for (int k = 0; k < n; ++k) stats[static_cast<std::size_t>(k)].mean /= n_paths;
    for (const SamplePath& path : ensemble.paths) {
        auto s = path.state(t_index);
        for (int k = 0; k < n; ++k) {
            const double d = s[k] - stats[static_cast<std::size_t>(k)].mean;
            stats[static_cast<std::size_t>(k)].variance += d * d;
        }
    }
    for (int k = 0; k < n; ++k)
        stats[static_cast<std::size_t>(k)].variance /= std::max(1, n_paths - 1);
    return stats;
}

}  // namespace sgmc
