#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgmc/coefficients.hpp"
#include "sgmc/noise.hpp"
#include "sgmc/spectral.hpp"

namespace sgmc {

enum class Scheme { ExponentialEuler, Euler };

/// Initial law eta, supported on the smaller space K by construction: either
/// a point mass or a seeded Gaussian sampler with coefficients
/// scale * lambda_k / k * N(0,1) per mode (finite K-norm almost surely).
struct InitialLaw {
    enum class Kind { Point, GaussianK } kind = Kind::Point;
    HilbertVector point;
    double scale = 1.0;

    static InitialLaw point_mass(HilbertVector x) { return {Kind::Point, std::move(x), 0.0}; }
    static InitialLaw gaussian_k(double scale) { return {Kind::GaussianK, {}, scale}; }
    HilbertVector sample(const SpectralBasis& basis, RandomStream& stream) const;
};

struct SimConfig {
    double T = 1.0;
    double dt = 1e-3;
    int n = 0;                      // approximation index echo (0 = raw coefficients)
    std::vector<double> m_levels;   // strictly increasing truncation radii
    InitialLaw initial;
    Scheme scheme = Scheme::ExponentialEuler;

    int steps() const;
    void validate() const;
};

struct JumpRecord {
    int grid_index;
    double time;
    Mark mark;
    HilbertVector displacement;
};

/// Norms of the pre-jump state at a grid point where at least one jump was
/// applied; kept so exit times can use both one-sided limits exactly.
struct PreJumpNorm {
    int grid_index;
    double norm_b;
    double norm_k;
};

struct LevelCrossing {
    double time;
    double level;
};

struct SamplePath {
    int n_modes = 0;
    double dt = 0.0;
    std::uint64_t path_index = 0;
    std::vector<double> times;
    std::vector<double> states;  // (steps+1) x n_modes, post-jump values
    std::vector<JumpRecord> jumps;
    std::vector<PreJumpNorm> pre_norms;
    std::vector<LevelCrossing> crossings;
    bool exploded = false;

    int grid_points() const { return static_cast<int>(times.size()); }
    std::span<const double> state(int i) const {
        return {states.data() + static_cast<std::size_t>(i) * n_modes,
                static_cast<std::size_t>(n_modes)};
    }
    std::span<double> state(int i) {
        return {states.data() + static_cast<std::size_t>(i) * n_modes,
                static_cast<std::size_t>(n_modes)};
    }
    HilbertVector state_vec(int i) const;
};

struct NoiseDraws {
    std::vector<double> gaussians;    // unit normals, one per noise coordinate
    std::vector<JumpEvent> events;    // events in (t, t+dt]
};

struct StepResult {
    HilbertVector pre_jump;   // state after the continuous update
    HilbertVector post;       // after applying the cell's jump events
    std::vector<HilbertVector> displacements;
};

/// One update of the truncated dynamics from state x over [t, t+dt]. The
/// exponential scheme applies S_dt exactly per mode; its noise term carries
/// the per-mode factor sqrt((1 - e^{2 mu dt})/(-2 mu dt)) so that the
/// stochastic convolution variance over the cell is exact. Plain Euler uses
/// (I + dt A) and raw sqrt(dt) noise.
StepResult step(const HilbertVector& x, double t, double dt, double level_m,
                const CoefficientSet& coeffs, const SpectralBasis& basis,
                const JumpMeasureSpec& jumps, Scheme scheme, const NoiseDraws& draws);

/// Simulates one path with truncation-level stitching: whenever the K-norm
/// (pre- or post-jump) reaches the current level before T, the level is
/// raised and stepping continues with the identical noise stream. When all
/// levels are exhausted the path is frozen at its exit value and flagged.
SamplePath simulate_path(const SimConfig& config, const CoefficientSet& coeffs,
                         const SpectralBasis& basis, const JumpMeasureSpec& jumps,
                         RandomStream stream);

constexpr double kNever = std::numeric_limits<double>::infinity();

enum class PathNorm { B, K };

/// First grid time whose pre-jump or post-jump state norm reaches z; +inf if
/// none. The grid-index variant returns grid_points() when never.
double tau_z(const SamplePath& path, double z, PathNorm norm, const SpectralBasis& basis);
int tau_z_index(const SamplePath& path, double z, PathNorm norm, const SpectralBasis& basis);

/// Path stopped at grid index: later states frozen, later jump records dropped.
SamplePath stop_at_index(const SamplePath& path, int index);

struct PathError {
    std::uint64_t path_index;
    std::string message;
};

struct Ensemble {
    SimConfig config;
    std::uint64_t seed = 0;
    int n_modes = 0;
    std::vector<SamplePath> paths;
    int exploded_count = 0;

    int n_paths() const { return static_cast<int>(paths.size()); }
};

/// Aggregate of per-path failures (non-finite coefficient evaluations, ...).
class EnsembleError : public std::runtime_error {
public:
    explicit EnsembleError(std::vector<PathError> errors);
    const std::vector<PathError>& errors() const { return errors_; }

private:
    std::vector<PathError> errors_;
};

/// n_paths independent paths via per-path substreams keyed by (seed, index).
/// Output is bit-exact regardless of scheduling; the serial variant is the
/// reference implementation the parallel one is tested against.
Ensemble simulate_ensemble(const SimConfig& config, const CoefficientSet& coeffs,
                           const SpectralBasis& basis, const JumpMeasureSpec& jumps,
                           std::uint64_t seed, int n_paths);
Ensemble simulate_ensemble_serial(const SimConfig& config, const CoefficientSet& coeffs,
                                  const SpectralBasis& basis, const JumpMeasureSpec& jumps,
                                  std::uint64_t seed, int n_paths);

/// Closed-form mode variance of the driftless stochastic heat dynamics
/// started at zero: (1 - e^{2 mu t}) / (-2 mu), with the mu = 0 limit t.
double ou_mode_variance(double mu, double t);

}  // namespace sgmc
