#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sgmc/generator.hpp"
#include "sgmc/simulate.hpp"

namespace sgmc {

/// F_s-measurable weight: a product of bounded functions of marginals at grid
/// indices at or before the window start (validated at use).
struct WeightSpec {
    std::string name = "one";
    std::vector<std::pair<int, TestFunction>> factors;

    double eval(const SamplePath& path) const;
    int max_index() const;
    static WeightSpec one() { return {}; }
};

struct MartingaleEntry {
    std::string f_name;
    int s_index = 0, t_index = 0;
    std::string weight_name;
    double mean = 0.0;
    double std_error = 0.0;
    double z = 0.0;
    bool degenerate = false;  // residual exactly constant across paths
    bool pass = false;
};

struct MartingaleReport {
    std::vector<MartingaleEntry> entries;
    double z_threshold = 3.0;
    int fail_count = 0;
    double fail_fraction = 0.0;
    bool pass = false;  // fail fraction within the calibration allowance
    double allowed_fail_fraction = 0.02;
};

/// Monte Carlo test of the stopped martingale property: for each
/// (f, window, weight) the mean of weight * (M^f_{t^tau} - M^f_{s^tau}) over
/// the ensemble, its standard error, and a three-sigma pass flag. Generator
/// evaluation uses the supplied coefficients, which may deliberately differ
/// from those that produced the ensemble (negative controls).
MartingaleReport martingale_test(const Ensemble& ensemble, const std::vector<TestFunction>& f_list,
                                 const std::vector<std::pair<int, int>>& windows, double m,
                                 PathNorm norm, const std::vector<WeightSpec>& weights,
                                 const CoefficientSet& coeffs, const SpectralBasis& basis,
                                 const JumpMeasureSpec& jumps, const TruncationSpec& h,
                                 double z_threshold = 3.0, double allowed_fail_fraction = 0.02);

/// Cadlag modulus w'(path, theta, N): exact minimum over grid-aligned
/// partitions of [0, N) whose cells all have length >= theta except possibly
/// the last, of the maximal B-norm oscillation within a cell (half-open
/// windows). Dynamic program over partition points.
double modulus_w_prime(const SamplePath& path, double theta, double N);

struct WPrimeSummaryRow {
    double theta = 0.0;
    double mean = 0.0;
    double q90 = 0.0;
    double max = 0.0;
};
std::vector<WPrimeSummaryRow> w_prime_summary(const Ensemble& ensemble,
                                              const std::vector<double>& theta_list, double N);

/// Stopping rule for the Aldous statistic: a deterministic grid time or the
/// first hitting time of a norm level, capped at bound.
struct RhoSpec {
    enum class Kind { Deterministic, FirstHitting } kind = Kind::Deterministic;
    double time = 0.0;
    double radius = 0.0;
    PathNorm norm = PathNorm::B;
    double bound = 0.0;
};

struct AldousResult {
    double probability = 0.0;
    double std_error = 0.0;
    int n_paths = 0;
};

/// Empirical P(|X_{rho+h} - X_rho|_B >= eps) over a fresh ensemble.
AldousResult aldous_statistic(const SimConfig& config, const CoefficientSet& coeffs,
                              const SpectralBasis& basis, const JumpMeasureSpec& jumps,
                              const RhoSpec& rho, double h, double eps, int n_paths,
                              std::uint64_t seed);

struct ContainmentRow {
    double t = 0.0;
    double radius = 0.0;  // empirical (1-eps) quantile of the K-norm
};
std::vector<ContainmentRow> compact_containment(const Ensemble& ensemble,
                                                const std::vector<double>& t_list, double eps,
                                                const SpectralBasis& basis);

struct MomentReport {
    std::vector<std::pair<double, double>> estimates;  // (T, E[sup |X|_K^2 Z])
    double slope = 0.0;
    double intercept = 0.0;
    double fit_residual = 0.0;
    double excluded_fraction = 0.0;  // exploded paths, reported separately
    int z_zero_count = 0;            // paths with X_0 outside the radius
};
MomentReport moment_bound_check(const Ensemble& ensemble, double k_set_radius,
                                const std::vector<double>& t_horizons, const SpectralBasis& basis);

struct WeakDistanceRow {
    std::string f_name;
    double t = 0.0;
    double mean_a = 0.0, mean_b = 0.0;
    double diff = 0.0;
    double std_error = 0.0;
};
struct WeakDistanceResult {
    double distance = 0.0;   // max |mean_a - mean_b| over the panel
    double std_error = 0.0;  // pooled SE at the maximizing entry
    std::vector<WeakDistanceRow> rows;
};
/// Bounded-Lipschitz-style panel pseudometric on ensemble marginals.
WeakDistanceResult weak_distance(const Ensemble& ens_a, const Ensemble& ens_b,
                                 const std::vector<TestFunction>& f_panel,
                                 const std::vector<double>& t_list);

struct FellerRow {
    double x_distance = 0.0;  // |x_k - x_limit|_B
    double weak_dist = 0.0;
    double std_error = 0.0;
};
struct FellerReport {
    std::vector<FellerRow> rows;  // ordered as given (x_distance decreasing)
    bool pass = false;            // weak distances nonincreasing within error bars
};
/// Weak-continuity probe in the initial point: ensembles from x_seq (common
/// random numbers against the x_limit ensemble) tabulated against the
/// initial-point distance. x_seq must approach x_limit in the B-norm.
FellerReport feller_probe(const CoefficientSet& coeffs, const SpectralBasis& basis,
                          const JumpMeasureSpec& jumps, const std::vector<HilbertVector>& x_seq,
                          const HilbertVector& x_limit, const SimConfig& sim,
                          const std::vector<TestFunction>& f_panel,
                          const std::vector<double>& t_list, int n_paths, std::uint64_t seed);

struct GalerkinRow {
    int n_from = 0, n_to = 0;
    double distance = 0.0;
    double std_error = 0.0;
};
/// Weak distances between ensembles driven by mollified approximants at
/// consecutive levels of n_list, sharing one seed; the finite-scale Cauchy
/// trend of the approximation sequence.
std::vector<GalerkinRow> galerkin_limit_scan(const CoefficientSet& coeffs,
                                             const SpectralBasis& basis,
                                             const JumpMeasureSpec& jumps,
                                             const std::vector<int>& n_list,
                                             const std::vector<TestFunction>& f_panel,
                                             const std::vector<double>& t_list,
                                             const SimConfig& sim, int n_paths,
                                             std::uint64_t shared_seed);

/// Generalized Riemann-Liouville convolution on a gridded path:
///   (G_xi f)(t_i) = sum_{j<i} [((t_i-s_j)^xi - (t_i-s_{j+1})^xi)/xi] S_{t_i-s_j} f(s_j),
/// with exact per-cell weights for the weakly singular kernel.
std::vector<HilbertVector> apply_g_xi(double xi, const std::vector<HilbertVector>& f_path,
                                      double dt, const SpectralBasis& basis);

/// Discrete composition weight sum approximating
/// int_0^t (t-s)^{theta-1} s^{-theta} ds = pi / sin(pi theta).
double beta_kernel_identity(double theta, int cells);

struct FactorizationRow {
    double dt = 0.0;
    double sup_discrepancy = 0.0;
};
struct FactorizationReport {
    double theta = 0.0;
    std::vector<FactorizationRow> rows;  // same Brownian path, coarsened per dt
    double beta_value = 0.0;
    double beta_rel_error = 0.0;
    int beta_cells = 0;
};
/// Pathwise check of the stochastic-convolution factorization: the direct
/// discrete convolution against sin(pi theta)/pi * G_theta Y^theta built from
/// the same Brownian increments, per dt in dt_list (coarsenings of the finest
/// grid). Includes the deterministic Beta-kernel identity at beta_cells.
FactorizationReport factorization_check(double theta, const SigmaMatrix& sigma,
                                        const SpectralBasis& basis, double T,
                                        const std::vector<double>& dt_list, int beta_cells,
                                        std::uint64_t seed);

struct ModeStat {
    int mode = 0;
    double mean = 0.0;
    double variance = 0.0;
};
/// Per-mode empirical mean and variance of <X_t, h_k> at a grid index.
std::vector<ModeStat> mode_marginals(const Ensemble& ensemble, int t_index);

}  // namespace sgmc
