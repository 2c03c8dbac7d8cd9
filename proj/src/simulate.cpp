#include "sgmc/simulate.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sgmc {

HilbertVector InitialLaw::sample(const SpectralBasis& basis, RandomStream& stream) const {
    if (kind == Kind::Point) {
        HilbertVector x = HilbertVector::zero(basis.n_modes);
        for (int i = 0; i < std::min(point.size(), basis.n_modes); ++i) x[i] = point[i];
        return x;
    }
    HilbertVector x = HilbertVector::zero(basis.n_modes);
    for (int k = 1; k <= basis.n_modes; ++k)
        x[k - 1] = scale * basis.lambda[static_cast<std::size_t>(k - 1)] / k * stream.next_gaussian();
    return x;
}

int SimConfig::steps() const { return static_cast<int>(std::llround(T / dt)); }

void SimConfig::validate() const {
    if (!(T > 0.0) || !(dt > 0.0)) throw std::invalid_argument("SimConfig: T and dt must be > 0");
    const int s = steps();
    if (s < 1 || std::abs(s * dt - T) > 1e-9 * T)
        throw std::invalid_argument("SimConfig: dt must divide T");
    if (m_levels.empty()) throw std::invalid_argument("SimConfig: m_levels must be non-empty");
    for (std::size_t i = 1; i < m_levels.size(); ++i)
        if (!(m_levels[i] > m_levels[i - 1]))
            throw std::invalid_argument("SimConfig: m_levels must be strictly increasing");
}

HilbertVector SamplePath::state_vec(int i) const {
    auto s = state(i);
    return HilbertVector(std::vector<double>(s.begin(), s.end()));
}

namespace {

struct SchemeFactors {
    std::vector<double> decay;         // per-mode propagator over one cell
    std::vector<double> noise_factor;  // per-mode scaling of sigma * dW
    bool exponential;
};

SchemeFactors make_factors(const SpectralBasis& basis, double dt, Scheme scheme) {
    SchemeFactors f;
    f.exponential = scheme == Scheme::ExponentialEuler;
    const int n = basis.n_modes;
    f.decay.resize(static_cast<std::size_t>(n));
    f.noise_factor.assign(static_cast<std::size_t>(n), 1.0);
    for (int k = 0; k < n; ++k) {
        const double mu = basis.mu[static_cast<std::size_t>(k)];
        if (f.exponential) {
            f.decay[static_cast<std::size_t>(k)] = std::exp(mu * dt);
            if (mu < 0.0)
                f.noise_factor[static_cast<std::size_t>(k)] =
                    std::sqrt((1.0 - std::exp(2.0 * mu * dt)) / (-2.0 * mu * dt));
        } else {
            f.decay[static_cast<std::size_t>(k)] = 1.0 + mu * dt;
        }
    }
    return f;
}

void check_finite(std::span<const double> x) {
    for (double c : x)
        if (!std::isfinite(c)) throw std::runtime_error("step: non-finite state value");
}

}  // namespace

StepResult step(const HilbertVector& x, double /*t*/, double dt, double level_m,
                const CoefficientSet& coeffs, const SpectralBasis& basis,
                const JumpMeasureSpec& jumps, Scheme scheme, const NoiseDraws& draws) {
    const SchemeFactors factors = make_factors(basis, dt, scheme);
    const int n = basis.n_modes;
    const HilbertVector x_arg = truncate_arg(x, level_m, basis);

    HilbertVector cont = HilbertVector::zero(n);
    for (int k = 0; k < n; ++k)
        cont[k] = factors.decay[static_cast<std::size_t>(k)] * (k < x.size() ? x[k] : 0.0);

    if (!coeffs.drift_zero) {
        HilbertVector b = coeffs.drift(x_arg);
        for (int k = 0; k < std::min(n, b.size()); ++k) cont[k] += dt * b[k];
    }
    if (!coeffs.jump_zero && jumps.active()) {
        HilbertVector comp = jump_compensator(coeffs, x_arg, jumps);
        for (int k = 0; k < std::min(n, comp.size()); ++k) cont[k] -= dt * comp[k];
    }
    if (!draws.gaussians.empty()) {
        SigmaMatrix sig = coeffs.sigma(x_arg);
        std::vector<double> w(draws.gaussians.size());
        const double sdt = std::sqrt(dt);
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = sdt * draws.gaussians[i];
        HilbertVector noise = HilbertVector::zero(n);
        sig.apply_add(w, std::span<double>(noise.coeffs));
        for (int k = 0; k < n; ++k) cont[k] += factors.noise_factor[static_cast<std::size_t>(k)] * noise[k];
    }
    check_finite(cont.coeffs);

    StepResult res;
    res.pre_jump = cont;
    res.post = cont;
    for (const JumpEvent& e : draws.events) {
        const HilbertVector run_arg = truncate_arg(res.post, level_m, basis);
        HilbertVector disp = coeffs.jump(e.mark, run_arg);
        check_finite(disp.coeffs);
        res.displacements.push_back(disp);
        res.post = res.post + disp;
    }
    return res;
}

SamplePath simulate_path(const SimConfig& config, const CoefficientSet& coeffs,
                         const SpectralBasis& basis, const JumpMeasureSpec& jumps,
                         RandomStream stream) {
    config.validate();
    const int n = basis.n_modes;
    const int steps = config.steps();
    const double dt = config.dt;
    const SchemeFactors factors = make_factors(basis, dt, config.scheme);

    SamplePath path;
    path.n_modes = n;
    path.dt = dt;
    path.path_index = stream.path_index();
    path.times.resize(static_cast<std::size_t>(steps) + 1);
    for (int i = 0; i <= steps; ++i) path.times[static_cast<std::size_t>(i)] = i * dt;
    path.states.assign((static_cast<std::size_t>(steps) + 1) * n, 0.0);

    // Noise consumption order is fixed (initial sample, all jump events, then
    // per-step Gaussians) so the draw sequence does not depend on truncation
    // levels; stitched prefixes are bit-identical across level lists.
    HilbertVector x = config.initial.sample(basis, stream);
    std::vector<JumpEvent> events;
    const bool jumps_active = !coeffs.jump_zero && jumps.active();
    if (jumps_active) events = poisson_events(0.0, config.T, jumps, stream);

    for (int k = 0; k < n; ++k) path.state(0)[k] = x[k];

    std::size_t level_idx = 0;
    // The exit time can be zero: raise through levels the initial state
    // already exceeds before any stepping.
    {
        const double init_k = norm_k(std::span<const double>(x.coeffs), basis);
        while (init_k >= config.m_levels[level_idx]) {
            path.crossings.push_back({0.0, config.m_levels[level_idx]});
            if (level_idx + 1 < config.m_levels.size()) {
                ++level_idx;
            } else {
                path.exploded = true;
                break;
            }
        }
        if (path.exploded) {
            for (int j = 1; j <= steps; ++j)
                for (int k = 0; k < n; ++k) path.state(j)[k] = x[k];
            return path;
        }
    }

    const bool sigma_const = !coeffs.sigma_state_dependent;
    SigmaMatrix sigma_cached;
    int n_noise = 0;
    {
        SigmaMatrix s0 = coeffs.sigma(truncate_arg(x, config.m_levels[level_idx], basis));
        n_noise = s0.n_noise;
        if (sigma_const) sigma_cached = std::move(s0);
    }

    std::size_t event_idx = 0;
    std::vector<double> w(static_cast<std::size_t>(n_noise));
    const double sdt = std::sqrt(dt);
    HilbertVector noise = HilbertVector::zero(n);

    for (int i = 0; i < steps; ++i) {
        const double level = config.m_levels[level_idx];
        for (double& wi : w) wi = sdt * stream.next_gaussian();

        const HilbertVector x_arg = truncate_arg(x, level, basis);
        HilbertVector cont = HilbertVector::zero(n);
        for (int k = 0; k < n; ++k) cont[k] = factors.decay[static_cast<std::size_t>(k)] * x[k];
        if (!coeffs.drift_zero) {
            HilbertVector b = coeffs.drift(x_arg);
            for (int k = 0; k < std::min(n, b.size()); ++k) cont[k] += dt * b[k];
        }
        if (jumps_active) {
            HilbertVector comp = jump_compensator(coeffs, x_arg, jumps);
            for (int k = 0; k < std::min(n, comp.size()); ++k) cont[k] -= dt * comp[k];
        }
        if (n_noise > 0) {
            std::fill(noise.coeffs.begin(), noise.coeffs.end(), 0.0);
            if (sigma_const)
                sigma_cached.apply_add(w, std::span<double>(noise.coeffs));
            else
                coeffs.sigma(x_arg).apply_add(w, std::span<double>(noise.coeffs));
            for (int k = 0; k < n; ++k)
                cont[k] += factors.noise_factor[static_cast<std::size_t>(k)] * noise[k];
        }
        check_finite(cont.coeffs);

        const double t_next = (i + 1) * dt;
        HilbertVector post = cont;
        bool any_jump = false;
        while (jumps_active && event_idx < events.size() &&
               events[event_idx].time <= t_next + 1e-15 * config.T) {
            if (!any_jump) {
                path.pre_norms.push_back({i + 1, norm_b(cont), norm_k(cont, basis)});
                any_jump = true;
            }
            const JumpEvent& e = events[event_idx];
            HilbertVector disp = coeffs.jump(e.mark, truncate_arg(post, level, basis));
            check_finite(disp.coeffs);
            path.jumps.push_back({i + 1, e.time, e.mark, disp});
            post = post + disp;
            ++event_idx;
        }

        x = post;
        for (int k = 0; k < n; ++k) path.state(i + 1)[k] = x[k];

        // Level crossing: pre- or post-jump K-norm at this grid time.
        const double pre_k = any_jump ? path.pre_norms.back().norm_k : norm_k(cont, basis);
        const double post_k = norm_k(post, basis);
        while (std::max(pre_k, post_k) >= config.m_levels[level_idx]) {
            path.crossings.push_back({t_next, config.m_levels[level_idx]});
            if (level_idx + 1 < config.m_levels.size()) {
                ++level_idx;
            } else {
                path.exploded = true;
                break;
            }
        }
        if (path.exploded) {
            for (int j = i + 2; j <= steps; ++j)
                for (int k = 0; k < n; ++k) path.state(j)[k] = x[k];
            break;
        }
    }
    return path;
}

namespace {

double state_norm(std::span<const double> s, PathNorm norm, const SpectralBasis& basis) {
    return norm == PathNorm::B ? norm_b(s) : norm_k(s, basis);
}

}  // namespace

int tau_z_index(const SamplePath& path, double z, PathNorm norm, const SpectralBasis& basis) {
    std::size_t pn = 0;
    for (int i = 0; i < path.grid_points(); ++i) {
        while (pn < path.pre_norms.size() && path.pre_norms[pn].grid_index < i) ++pn;
        if (pn < path.pre_norms.size() && path.pre_norms[pn].grid_index == i) {
            const double pre = norm == PathNorm::B ? path.pre_norms[pn].norm_b
                                                   : path.pre_norms[pn].norm_k;
            if (pre >= z) return i;
        }
        if (state_norm(path.state(i), norm, basis) >= z) return i;
    }
    return path.grid_points();
}

double tau_z(const SamplePath& path, double z, PathNorm norm, const SpectralBasis& basis) {
    const int idx = tau_z_index(path, z, norm, basis);
    if (idx >= path.grid_points()) return kNever;
    return path.times[static_cast<std::size_t>(idx)];
}

SamplePath stop_at_index(const SamplePath& path, int index) {
    SamplePath out = path;
    if (index >= path.grid_points()) return out;
    for (int i = index + 1; i < out.grid_points(); ++i)
        for (int k = 0; k < out.n_modes; ++k) out.state(i)[k] = path.state(index)[k];
    std::erase_if(out.jumps, [index](const JumpRecord& j) { return j.grid_index > index; });
    std::erase_if(out.pre_norms, [index](const PreJumpNorm& p) { return p.grid_index > index; });
    return out;
}

namespace {

std::string join_path_errors(const std::vector<PathError>& errors) {
    std::string msg = "ensemble failures on " + std::to_string(errors.size()) + " path(s):";
    for (std::size_t i = 0; i < std::min<std::size_t>(errors.size(), 8); ++i)
        msg += "\n  path " + std::to_string(errors[i].path_index) + ": " + errors[i].message;
    return msg;
}

}  // namespace

EnsembleError::EnsembleError(std::vector<PathError> errors)
    : std::runtime_error(join_path_errors(errors)), errors_(std::move(errors)) {}

namespace {

Ensemble run_ensemble(const SimConfig& config, const CoefficientSet& coeffs,
                      const SpectralBasis& basis, const JumpMeasureSpec& jumps,
                      std::uint64_t seed, int n_paths, bool parallel) {
    if (n_paths < 1) throw std::invalid_argument("simulate_ensemble: n_paths must be >= 1");
    config.validate();
    Ensemble ens;
    ens.config = config;
    ens.seed = seed;
    ens.n_modes = basis.n_modes;
    ens.paths.resize(static_cast<std::size_t>(n_paths));

    // Exceptions cannot unwind out of the parallel region; collect them per
    // path and rethrow an aggregate afterwards.
    std::vector<PathError> errors;
#pragma omp parallel for schedule(dynamic, 8) if (parallel)
    for (int p = 0; p < n_paths; ++p) {
        try {
            ens.paths[static_cast<std::size_t>(p)] = simulate_path(
                config, coeffs, basis, jumps, RandomStream(seed, static_cast<std::uint64_t>(p)));
        } catch (const std::exception& e) {
#pragma omp critical(sgmc_ensemble_errors)
            errors.push_back({static_cast<std::uint64_t>(p), e.what()});
        }
    }
    if (!errors.empty()) {
        std::sort(errors.begin(), errors.end(),
                  [](const PathError& a, const PathError& b) { return a.path_index < b.path_index; });
        throw EnsembleError(std::move(errors));
    }
    for (const SamplePath& path : ens.paths)
        if (path.exploded) ++ens.exploded_count;
    return ens;
}

}  // namespace

Ensemble simulate_ensemble(const SimConfig& config, const CoefficientSet& coeffs,
                           const SpectralBasis& basis, const JumpMeasureSpec& jumps,
                           std::uint64_t seed, int n_paths) {
    return run_ensemble(config, coeffs, basis, jumps, seed, n_paths, true);
}

Ensemble simulate_ensemble_serial(const SimConfig& config, const CoefficientSet& coeffs,
                                  const SpectralBasis& basis, const JumpMeasureSpec& jumps,
                                  std::uint64_t seed, int n_paths) {
    return run_ensemble(config, coeffs, basis, jumps, seed, n_paths, false);
}

double ou_mode_variance(double mu, double t) {
    if (mu == 0.0) return t;
    return (1.0 - std::exp(2.0 * mu * t)) / (-2.0 * mu);
}

}  // namespace sgmc
