#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgmc/coefficients.hpp"
#include "sgmc/noise.hpp"
#include "sgmc/simulate.hpp"
#include "sgmc/spectral.hpp"

namespace sgmc {

struct ConfigIssue {
    int line = 0;  // 0 for semantic constraints without a single source line
    std::string kind;  // "SchemaError" or "ConstraintError"
    std::string message;
};

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<ConfigIssue> issues);
    const std::vector<ConfigIssue>& issues() const { return issues_; }

private:
    std::vector<ConfigIssue> issues_;
};

/// Fully determines every byte of output together with the seed. Unknown keys
/// are rejected, not ignored.
struct RunConfig {
    // [basis]
    int n_modes = 16;
    std::string lambda_preset = "harmonic";
    double lambda_scale = 1.0;
    std::vector<double> lambda_list;  // overrides the preset when non-empty
    std::string mu_preset = "heat-1d";
    double mu_scale = 1.0;
    std::vector<double> mu_list;

    // [coefficients]
    std::string drift = "zero";
    double drift_param = 1.0;
    std::string sigma = "identity";
    double sigma_param = 1.0;
    std::string jump = "none";
    double jump_param = 1.0;

    // [noise]
    std::string jump_spec = "none";
    double jump_intensity = 0.0;
    double mark_param = 1.0;

    // [sim]
    double T = 1.0;
    double dt = 1e-3;
    int n = 0;  // mollification level; 0 runs the raw coefficients
    std::vector<double> m_levels = {1e6};
    int n_paths = 1000;
    std::uint64_t seed = 42;
    std::string scheme = "exponential-euler";
    std::string initial = "point";
    std::vector<double> initial_coeffs;
    double initial_scale = 1.0;

    // [diagnostics]
    double z_threshold = 3.0;
    double allowed_fail_fraction = 0.02;
    double h_threshold = 1.0;
    double drift_corruption = 0.0;  // mode-1 drift shift for negative controls
    double containment_eps = 0.05;
    double aldous_eps = 0.25;
    double theta = 0.25;
    double a6_lambda = 0.25;
    double a6_eps = 1.0;
    int a6_quad_points = 64;
    std::vector<double> probe_times;  // empty means {T/4, T/2, T}

    // [output]
    std::string out_dir = "out";
    bool write_paths = false;

    SpectralBasis make_basis() const;
    CoefficientSet make_coefficients(const SpectralBasis& basis) const;
    JumpMeasureSpec make_jumps() const;
    SimConfig make_sim(const SpectralBasis& basis) const;
    std::vector<double> probe_times_or_default() const;
};

/// Parses the documented key-value schema (sections [basis], [coefficients],
/// [noise], [sim], [diagnostics], [output]); collects all schema and
/// constraint violations with line references before throwing.
RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);

/// Reference list of sections, keys, defaults, and constraints.
std::string config_documentation();

/// Drift shifted by a constant vector; the simulated law then deliberately
/// disagrees with the generator built from the unshifted set.
CoefficientSet shifted_drift(const CoefficientSet& base, const HilbertVector& shift);

}  // namespace sgmc
