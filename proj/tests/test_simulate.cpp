#include <cmath>
#include <cstring>

#include "doctest.h"
#include "sgmc/simulate.hpp"

using namespace sgmc;

namespace {

const SpectralBasis kHeat8 = SpectralBasis::preset(8, "harmonic", "heat-1d");
const JumpMeasureSpec kNoJumps = JumpMeasureSpec::preset("none");

SimConfig basic_config(double T = 1.0, double dt = 1e-3) {
    SimConfig cfg;
    cfg.T = T;
    cfg.dt = dt;
    cfg.m_levels = {1e6};
    cfg.initial = InitialLaw::point_mass(HilbertVector::zero(8));
    return cfg;
}

}  // namespace

TEST_CASE("step: frozen dynamics is the identity") {
    const SpectralBasis flat = SpectralBasis::preset(4, "constant", "zero");
    const CoefficientSet frozen =
        CoefficientSet::catalog(flat, "zero", 0.0, "zero", 0.0, "none", 0.0);
    const HilbertVector x(std::vector<double>{0.3, -0.1, 0.7, 0.0});
    const StepResult res = step(x, 0.0, 0.01, 1e6, frozen, flat, kNoJumps,
                                Scheme::ExponentialEuler, NoiseDraws{});
    for (int k = 0; k < 4; ++k) CHECK(res.post[k] == x[k]);
}

TEST_CASE("step: pure heat decay applies the exact mode-1 factor") {
    const CoefficientSet frozen =
        CoefficientSet::catalog(kHeat8, "zero", 0.0, "zero", 0.0, "none", 0.0);
    const double dt = 0.01;
    const HilbertVector x = HilbertVector::mode(1, 1.0, 8);
    const StepResult res =
        step(x, 0.0, dt, 1e6, frozen, kHeat8, kNoJumps, Scheme::ExponentialEuler, NoiseDraws{});
    CHECK(res.post[0] == doctest::Approx(std::exp(-M_PI * M_PI * dt)).epsilon(1e-15));
}

TEST_CASE("step: one jump event adds the displacement and the compensator acts") {
    const SpectralBasis flat = SpectralBasis::preset(4, "constant", "zero");
    const CoefficientSet set =
        CoefficientSet::catalog(flat, "zero", 0.0, "zero", 0.0, "constant-mode", 1.0);
    const JumpMeasureSpec atom = JumpMeasureSpec::preset("single-atom", 1.0, 0.0);
    const double dt = 0.05;
    const HilbertVector x(std::vector<double>{0.2, 0.0, 0.0, 0.0});
    NoiseDraws draws;
    draws.events.push_back({0.03, {0.0}});
    const StepResult res = step(x, 0.0, dt, 1e6, set, flat, atom, Scheme::ExponentialEuler, draws);
    // x + h_1 - dt * mass * h_1
    CHECK(res.post[0] == doctest::Approx(0.2 + 1.0 - dt * 1.0).epsilon(1e-14));
    CHECK(res.pre_jump[0] == doctest::Approx(0.2 - dt * 1.0).epsilon(1e-14));
    REQUIRE(res.displacements.size() == 1);
    CHECK(res.displacements[0][0] == 1.0);
}

TEST_CASE("mild identity: no coefficients means pure semigroup flow") {
    const CoefficientSet frozen =
        CoefficientSet::catalog(kHeat8, "zero", 0.0, "zero", 0.0, "none", 0.0);
    SimConfig cfg = basic_config(0.5, 1e-2);
    HilbertVector x0 = HilbertVector::zero(8);
    for (int k = 0; k < 8; ++k) x0[k] = 1.0 / (k + 1.0);
    cfg.initial = InitialLaw::point_mass(x0);
    const SamplePath path = simulate_path(cfg, frozen, kHeat8, kNoJumps, RandomStream(1, 0));
    for (int i = 0; i <= cfg.steps(); i += 10) {
        const HilbertVector exact = semigroup_apply(i * cfg.dt, x0, kHeat8);
        for (int k = 0; k < 8; ++k)
            CHECK(path.state(i)[k] == doctest::Approx(exact[k]).epsilon(1e-12));
    }
}

TEST_CASE("tau_z on synthetic paths") {
    SamplePath path;
    path.n_modes = 1;
    path.dt = 0.1;
    for (int i = 0; i <= 10; ++i) {
        path.times.push_back(0.1 * i);
        path.states.push_back(i >= 5 ? 2.0 : 0.1);
    }
    const SpectralBasis one = SpectralBasis::make({1.0}, {0.0});
    SUBCASE("constant path below the level never exits") {
        SamplePath flat = path;
        for (double& s : flat.states) s = 0.1;
        CHECK(tau_z(flat, 1.0, PathNorm::B, one) == kNever);
    }
    SUBCASE("jump to 2z at t = 0.5 exits there") {
        CHECK(tau_z(path, 1.0, PathNorm::B, one) == doctest::Approx(0.5));
    }
    SUBCASE("monotone in the level") {
        double prev = 0.0;
        for (double z : {0.05, 0.5, 1.0, 2.0, 3.0}) {
            const double t = tau_z(path, z, PathNorm::B, one);
            CHECK(t >= prev);
            prev = t;
        }
    }
}

TEST_CASE("pre-jump norms feed the exit time") {
    // jump at grid 3 with pre-jump norm above the level but post-jump below
    SamplePath path;
    path.n_modes = 1;
    path.dt = 0.1;
    for (int i = 0; i <= 5; ++i) {
        path.times.push_back(0.1 * i);
        path.states.push_back(0.1);
    }
    path.pre_norms.push_back({3, 5.0, 5.0});
    const SpectralBasis one = SpectralBasis::make({1.0}, {0.0});
    CHECK(tau_z(path, 1.0, PathNorm::B, one) == doctest::Approx(0.3));
}

TEST_CASE("level stitching: prefixes bit-identical when levels are extended") {
    const CoefficientSet coeffs =
        CoefficientSet::catalog(kHeat8, "linear", 1.2, "identity", 1.5, "none", 0.0);
    SimConfig a = basic_config();
    a.m_levels = {1.3, 2.6};
    a.initial = InitialLaw::gaussian_k(1.0);
    SimConfig b = a;
    b.m_levels = {1.3, 2.6, 5.2, 10.4};
    int crossed = 0;
    for (int p = 0; p < 60; ++p) {
        const SamplePath pa = simulate_path(a, coeffs, kHeat8, kNoJumps, RandomStream(77, p));
        const SamplePath pb = simulate_path(b, coeffs, kHeat8, kNoJumps, RandomStream(77, p));
        const int tau = tau_z_index(pb, 1.3, PathNorm::K, kHeat8);
        if (tau < pb.grid_points()) ++crossed;
        const int upto = std::min(tau, pa.grid_points() - 1);
        CHECK(std::memcmp(pa.states.data(), pb.states.data(),
                          static_cast<std::size_t>(upto + 1) * 8 * sizeof(double)) == 0);
    }
    CHECK(crossed > 5);  // the comparison is not vacuous
}

TEST_CASE("same stream, levels {10,20} vs {20}: identical when 10 never crossed") {
    const CoefficientSet coeffs =
        CoefficientSet::catalog(kHeat8, "linear", 1.2, "identity", 1.5, "none", 0.0);
    SimConfig c1 = basic_config();
    c1.m_levels = {10.0, 20.0};
    c1.initial = InitialLaw::gaussian_k(1.0);
    SimConfig c2 = c1;
    c2.m_levels = {20.0};
    for (int p = 0; p < 25; ++p) {
        const SamplePath p1 = simulate_path(c1, coeffs, kHeat8, kNoJumps, RandomStream(5, p));
        if (tau_z_index(p1, 10.0, PathNorm::K, kHeat8) < p1.grid_points()) continue;
        const SamplePath p2 = simulate_path(c2, coeffs, kHeat8, kNoJumps, RandomStream(5, p));
        CHECK(std::memcmp(p1.states.data(), p2.states.data(),
                          p1.states.size() * sizeof(double)) == 0);
    }
}

TEST_CASE("exhausted levels freeze and flag the path") {
    const CoefficientSet coeffs =
        CoefficientSet::catalog(kHeat8, "linear", 1.2, "identity", 1.5, "none", 0.0);
    SimConfig cfg = basic_config();
    cfg.m_levels = {1.2};
    cfg.initial = InitialLaw::gaussian_k(1.0);
    int exploded = 0;
    for (int p = 0; p < 40; ++p) {
        const SamplePath path = simulate_path(cfg, coeffs, kHeat8, kNoJumps, RandomStream(3, p));
        if (!path.exploded) continue;
        ++exploded;
        const int tau = tau_z_index(path, 1.2, PathNorm::K, kHeat8);
        REQUIRE(tau < path.grid_points());
        for (int i = tau; i < path.grid_points(); ++i)
            CHECK(std::memcmp(path.state(i).data(), path.state(tau).data(), 8 * sizeof(double)) ==
                  0);
    }
    CHECK(exploded > 0);
}

TEST_CASE("exploded fraction shrinks as the level cap grows") {
    const CoefficientSet coeffs =
        CoefficientSet::catalog(kHeat8, "linear", 1.2, "identity", 1.5, "none", 0.0);
    SimConfig small = basic_config();
    small.m_levels = {1.2};
    small.initial = InitialLaw::gaussian_k(1.0);
    SimConfig big = small;
    big.m_levels = {1.2, 4.8, 20.0};
    const Ensemble es = simulate_ensemble(small, coeffs, kHeat8, kNoJumps, 3, 200);
    const Ensemble eb = simulate_ensemble(big, coeffs, kHeat8, kNoJumps, 3, 200);
    CHECK(eb.exploded_count < es.exploded_count);
}

TEST_CASE("galmarino identity on simulated paths") {
    const CoefficientSet coeffs =
        CoefficientSet::catalog(kHeat8, "linear", 1.2, "identity", 1.5, "none", 0.0);
    SimConfig cfg = basic_config();
    cfg.m_levels = {1.3, 2.6, 5.2};
    cfg.initial = InitialLaw::gaussian_k(1.0);
    for (int p = 0; p < 50; ++p) {
        const SamplePath path = simulate_path(cfg, coeffs, kHeat8, kNoJumps, RandomStream(21, p));
        const int tau_hi = tau_z_index(path, 2.6, PathNorm::K, kHeat8);
        const SamplePath stopped = stop_at_index(path, tau_hi);
        CHECK(tau_z_index(stopped, 1.3, PathNorm::K, kHeat8) ==
              tau_z_index(path, 1.3, PathNorm::K, kHeat8));
        CHECK(tau_z_index(stopped, 2.6, PathNorm::K, kHeat8) == tau_hi);
    }
}

TEST_CASE("ensemble determinism and the serial reference") {
    const CoefficientSet coeffs =
        CoefficientSet::catalog(kHeat8, "bounded-nemytskii", 1.0, "identity", 1.0, "none", 0.0);
    SimConfig cfg = basic_config(0.2, 1e-3);
    const Ensemble a = simulate_ensemble(cfg, coeffs, kHeat8, kNoJumps, 42, 64);
    const Ensemble b = simulate_ensemble(cfg, coeffs, kHeat8, kNoJumps, 42, 64);
    const Ensemble s = simulate_ensemble_serial(cfg, coeffs, kHeat8, kNoJumps, 42, 64);
    REQUIRE(a.n_paths() == 64);
    for (int p = 0; p < 64; ++p) {
        CHECK(std::memcmp(a.paths[p].states.data(), b.paths[p].states.data(),
                          a.paths[p].states.size() * sizeof(double)) == 0);
        CHECK(std::memcmp(a.paths[p].states.data(), s.paths[p].states.data(),
                          a.paths[p].states.size() * sizeof(double)) == 0);
    }
    // single path reproduces path_index 0
    const SamplePath lone = simulate_path(cfg, coeffs, kHeat8, kNoJumps, RandomStream(42, 0));
    CHECK(std::memcmp(lone.states.data(), a.paths[0].states.data(),
                      lone.states.size() * sizeof(double)) == 0);
}

TEST_CASE("stochastic heat mode variances match the closed form") {
    const SpectralBasis heat = SpectralBasis::preset(16, "harmonic", "heat-1d");
    const CoefficientSet ou =
        CoefficientSet::catalog(heat, "zero", 0.0, "identity", 1.0, "none", 0.0);
    SimConfig cfg;
    cfg.T = 0.5;
    cfg.dt = 1e-3;
    cfg.m_levels = {1e6};
    cfg.initial = InitialLaw::point_mass(HilbertVector::zero(16));
    const int n_paths = 4000;
    const Ensemble ens = simulate_ensemble(cfg, ou, heat, kNoJumps, 2024, n_paths);
    for (int k : {1, 2, 3}) {
        for (double t : {0.25, 0.5}) {
            const int idx = static_cast<int>(std::llround(t / cfg.dt));
            double mean = 0.0, sq = 0.0;
            for (const SamplePath& p : ens.paths) {
                const double c = p.state(idx)[k - 1];
                mean += c;
                sq += c * c;
            }
            mean /= n_paths;
            const double var = sq / n_paths - mean * mean;
            const double exact = ou_mode_variance(heat.mu[k - 1], t);
            const double se = exact * std::sqrt(2.0 / (n_paths - 1));
            CHECK(std::abs(var - exact) < 3.5 * se);
        }
    }
}

TEST_CASE("plain euler agrees with the exponential scheme as dt refines") {
    const SpectralBasis mild = SpectralBasis::make({1.0, 0.5}, {-1.0, -2.0});
    const CoefficientSet coeffs =
        CoefficientSet::catalog(mild, "bounded-nemytskii", 1.0, "identity", 1.0, "none", 0.0);
    double prev_gap = 0.0;
    for (int level = 0; level < 3; ++level) {
        const double dt = 0.01 / (1 << level);
        SimConfig expo;
        expo.T = 0.5;
        expo.dt = dt;
        expo.m_levels = {1e6};
        expo.initial = InitialLaw::point_mass(HilbertVector(std::vector<double>{0.5, -0.3}));
        SimConfig euler = expo;
        euler.scheme = Scheme::Euler;
        // same stream: the schemes consume noise identically
        const SamplePath pe = simulate_path(expo, coeffs, mild, kNoJumps, RandomStream(8, 0));
        const SamplePath pu = simulate_path(euler, coeffs, mild, kNoJumps, RandomStream(8, 0));
        double gap = 0.0;
        for (int i = 0; i <= expo.steps(); ++i) {
            double d = 0.0;
            for (int k = 0; k < 2; ++k)
                d += std::pow(pe.state(i)[k] - pu.state(i)[k], 2);
            gap = std::max(gap, std::sqrt(d));
        }
        if (level > 0) CHECK(gap < prev_gap);
        prev_gap = gap;
    }
}

TEST_CASE("gaussian initial law is supported on K") {
    const SpectralBasis heat = SpectralBasis::preset(12, "harmonic", "heat-1d");
    RandomStream s(6, 0);
    const InitialLaw law = InitialLaw::gaussian_k(1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const HilbertVector x = law.sample(heat, s);
        CHECK(std::isfinite(norm_k(x, heat)));
    }
}

TEST_CASE("config validation") {
    SimConfig cfg = basic_config();
    cfg.dt = 0.3;  // does not divide T = 1
    CHECK_THROWS(cfg.validate());
    cfg = basic_config();
    cfg.m_levels = {2.0, 1.0};
    CHECK_THROWS(cfg.validate());
    cfg = basic_config();
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("simulate_path single-cell update agrees with the standalone step") {
    const SpectralBasis basis = SpectralBasis::preset(4, "harmonic", "heat-1d");
    const CoefficientSet coeffs = CoefficientSet::catalog(basis, "bounded-nemytskii", 0.7,
                                                          "identity", 1.0, "linear-mark", 0.5);
    const JumpMeasureSpec jumps = JumpMeasureSpec::preset("compound-gaussian-marks", 20.0, 0.5);
    SimConfig cfg;
    cfg.T = 0.05;
    cfg.dt = 0.05;  // a single cell
    cfg.m_levels = {3.0, 6.0};
    const HilbertVector x0({0.2, -0.1, 0.05, 0.0});
    cfg.initial = InitialLaw::point_mass(x0);

    const SamplePath path = simulate_path(cfg, coeffs, basis, jumps, RandomStream(99, 4));

    // replay the stream with the documented consumption order: initial draw
    // (none for a point mass), jump events, then the cell's unit normals
    RandomStream replay(99, 4);
    NoiseDraws draws;
    draws.events = poisson_events(0.0, cfg.T, jumps, replay);
    draws.gaussians.resize(4);
    for (double& g : draws.gaussians) g = replay.next_gaussian();

    const StepResult res =
        step(x0, 0.0, cfg.dt, cfg.m_levels[0], coeffs, basis, jumps, cfg.scheme, draws);
    for (int k = 0; k < 4; ++k) CHECK(path.state(1)[k] == res.post[k]);
    CHECK(path.jumps.size() == draws.events.size());
}

TEST_CASE("ensemble failures are aggregated into one report") {
    const SpectralBasis basis = SpectralBasis::preset(2, "constant", "zero");
    CoefficientSet bad = CoefficientSet::catalog(basis, "zero", 0.0, "identity", 1.0, "none", 0.0);
    bad.drift_zero = false;
    bad.drift = [](const HilbertVector& x) {
        // blows up only for some paths
        return HilbertVector::mode(1, x[0] > 0.5 ? std::nan("") : 0.0, 2);
    };
    SimConfig cfg;
    cfg.T = 0.1;
    cfg.dt = 0.01;
    cfg.m_levels = {1e6};
    cfg.initial = InitialLaw::point_mass(HilbertVector::zero(2));
    try {
        simulate_ensemble(cfg, bad, basis, JumpMeasureSpec::preset("none"), 3, 64);
        FAIL("expected EnsembleError");
    } catch (const EnsembleError& e) {
        CHECK(!e.errors().empty());
        CHECK(std::string(e.what()).find("non-finite") != std::string::npos);
        // sorted, deterministic order
        for (std::size_t i = 1; i < e.errors().size(); ++i)
            CHECK(e.errors()[i - 1].path_index < e.errors()[i].path_index);
    }
}
