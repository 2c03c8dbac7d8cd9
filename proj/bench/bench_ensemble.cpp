// Timing comparison of the serial reference ensemble against the
// OpenMP-parallel one, plus a bit-exactness check between the two.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstring>

#include "sgmc/simulate.hpp"

using namespace sgmc;

namespace {

template <typename F>
double time_it(F&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    int n_paths = 2000;
    int n_modes = 16;
    if (argc > 1) n_paths = std::atoi(argv[1]);
    if (argc > 2) n_modes = std::atoi(argv[2]);

    const SpectralBasis basis = SpectralBasis::preset(n_modes, "harmonic", "heat-1d");
    const CoefficientSet coeffs =
        CoefficientSet::catalog(basis, "bounded-nemytskii", 1.0, "identity", 1.0, "none", 0.0);
    const JumpMeasureSpec jumps = JumpMeasureSpec::preset("none");
    SimConfig sim;
    sim.T = 1.0;
    sim.dt = 1e-3;
    sim.m_levels = {1e6};
    sim.initial = InitialLaw::point_mass(HilbertVector::zero(n_modes));

    Ensemble serial, parallel;
    const double t_serial = time_it([&] {
        serial = simulate_ensemble_serial(sim, coeffs, basis, jumps, 42, n_paths);
    });
    const double t_parallel = time_it([&] {
        parallel = simulate_ensemble(sim, coeffs, basis, jumps, 42, n_paths);
    });

    bool identical = serial.n_paths() == parallel.n_paths();
    for (int p = 0; identical && p < serial.n_paths(); ++p)
        identical = std::memcmp(serial.paths[p].states.data(), parallel.paths[p].states.data(),
                                serial.paths[p].states.size() * sizeof(double)) == 0;

    std::printf("paths %d, modes %d, steps %d, threads %d\n", n_paths, n_modes, sim.steps(),
                omp_get_max_threads());
    std::printf("serial   %.3f s  (%.1f paths/s)\n", t_serial, n_paths / t_serial);
    std::printf("parallel %.3f s  (%.1f paths/s, speedup %.2fx)\n", t_parallel,
                n_paths / t_parallel, t_serial / t_parallel);
    std::printf("bit-exact match: %s\n", identical ? "yes" : "NO");
    return identical ? 0 : 1;
}
