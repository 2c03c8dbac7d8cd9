#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace sgmc {

/// Philox4x32-10 block function. Counter-based: the output is a pure
/// function of (key, counter), so per-path substreams are reproducible
/// independent of scheduling.
std::array<std::uint32_t, 4> philox4x32(const std::array<std::uint32_t, 4>& counter,
                                        const std::array<std::uint32_t, 2>& key);

/// Deterministic random stream keyed by (seed, path_index). Streams with
/// distinct key pairs are independent; the same pair replays bit-exactly.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t path_index)
        : seed_(seed), path_(path_index) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t path_index() const { return path_; }

    std::uint32_t next_u32();
    std::uint64_t next_u64();
    /// Uniform on the open interval (0, 1); never returns an endpoint.
    double next_open01();
    /// Standard normal via Box-Muller (pairs cached).
    double next_gaussian();
    /// Exponential with unit rate.
    double next_exponential();

private:
    std::uint64_t seed_;
    std::uint64_t path_;
    std::uint64_t counter_ = 0;
    std::array<std::uint32_t, 4> block_{};
    int block_pos_ = 4;  // empty
    double cached_gaussian_ = 0.0;
    bool has_cached_gaussian_ = false;
};

/// i.i.d. centered Gaussian increments with variance dt per coordinate.
std::vector<double> bm_increments(double dt, int n_noise, RandomStream& stream);

using Mark = std::vector<double>;

/// Finite-activity jump measure F on R^d: total mass, a sampler for the
/// normalized mark law F/F(E), a deterministic quadrature for integrals
/// against F (weights sum to the total mass), and the declared growth
/// weight gamma used in the linear-growth hypothesis for v.
struct JumpMeasureSpec {
    double total_mass = 0.0;
    int mark_dim = 1;
    std::function<Mark(RandomStream&)> mark_sampler;
    std::vector<std::pair<Mark, double>> mark_quadrature;
    std::function<double(const Mark&)> gamma_eval;

    bool active() const { return total_mass > 0.0; }
    void validate() const;

    /// Catalog: "none"; "single-atom" (mass, atom location);
    /// "compound-gaussian-marks" (mass, mark std dev).
    static JumpMeasureSpec preset(const std::string& name, double total_mass = 0.0,
                                  double param = 1.0);
};

struct JumpEvent {
    double time;
    Mark mark;
};

/// Poisson process events on (t0, t1] with rate total_mass and i.i.d. marks.
/// Returned strictly increasing in time; empty when the mass is zero.
std::vector<JumpEvent> poisson_events(double t0, double t1, const JumpMeasureSpec& spec,
                                      RandomStream& stream);

}  // namespace sgmc
