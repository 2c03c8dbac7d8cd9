#include "sgmc/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "sgmc/report_io.hpp"

namespace sgmc {

namespace {

std::string join_issues(const std::vector<ConfigIssue>& issues) {
    std::ostringstream out;
    for (const auto& issue : issues) {
        out << issue.kind;
        if (issue.line > 0) out << " (line " << issue.line << ")";
        out << ": " << issue.message << '\n';
    }
    return out.str();
}

}  // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

struct Parser {
    RunConfig cfg;
    std::vector<ConfigIssue> issues;

    void schema_error(int line, const std::string& msg) {
        issues.push_back({line, "SchemaError", msg});
    }
    void constraint_error(int line, const std::string& msg) {
        issues.push_back({line, "ConstraintError", msg});
    }

    bool parse_double(const std::string& v, double& out) {
        std::size_t pos = 0;
        try {
            out = std::stod(v, &pos);
        } catch (...) {
            return false;
        }
        return pos == v.size();
    }
    bool parse_int(const std::string& v, int& out) {
        std::size_t pos = 0;
        try {
            out = std::stoi(v, &pos);
        } catch (...) {
            return false;
        }
        return pos == v.size();
    }
    bool parse_u64(const std::string& v, std::uint64_t& out) {
        std::size_t pos = 0;
        try {
            out = std::stoull(v, &pos);
        } catch (...) {
            return false;
        }
        return pos == v.size();
    }
    bool parse_bool(const std::string& v, bool& out) {
        if (v == "true" || v == "1") {
            out = true;
            return true;
        }
        if (v == "false" || v == "0") {
            out = false;
            return true;
        }
        return false;
    }
    bool parse_list(const std::string& v, std::vector<double>& out) {
        out.clear();
        std::stringstream ss(v);
        std::string item;
        while (std::getline(ss, item, ',')) {
            double d;
            if (!parse_double(trim(item), d)) return false;
            out.push_back(d);
        }
        return !out.empty();
    }

    void assign(const std::string& section, const std::string& key, const std::string& value,
                int line) {
        using Setter = std::function<bool(Parser&, const std::string&)>;
        static const std::map<std::string, std::map<std::string, Setter>> schema = {
            {"basis",
             {
                 {"n_modes", [](Parser& p, const std::string& v) { return p.parse_int(v, p.cfg.n_modes); }},
                 {"lambda", [](Parser& p, const std::string& v) { p.cfg.lambda_preset = v; return true; }},
                 {"lambda_scale", [](Parser& p, const std::string& v) { return p.parse_double(v, p.cfg.lambda_scale); }},
                 {"lambda_list", [](Parser& p, const std::string& v) { return p.parse_list(v, p.cfg.lambda_list); }},
                 {"mu", [](Parser& p, const std::string& v) { p.cfg.mu_preset = v; return true; }},
                 {"mu_scale", [](Parser& p, const std::string& v) { return p.parse_double(v, p.cfg.mu_scale); }},
                 {"mu_list", [](Parser& p, const std::string& v) { return p.parse_list(v, p.cfg.mu_list); }},
             }},
            {"coefficients",
             {
                 {"drift", [](Parser& p, const std::string& v) { p.cfg.drift = v; return true; }},
                 {"drift_param", [](Parser& p, const std::string& v) { return p.parse_double(v, p.cfg.drift_param); }},
                 {"sigma", [](Parser& p, const std::string& v) { p.cfg.sigma = v; return true; }},
                 {"sigma_param", [](Parser& p, const std::string& v) { return p.parse_double(v, p.cfg.sigma_param); }},
                 {"jump", [](Parser& p, const std::string& v) { p.cfg.jump = v; return true; }},
                 {"jump_param", [](Parser& p, const std::string& v) { return p.parse_double(v, p.cfg.jump_param); }},
             }},
            {"noise",
             {
                 {"spec", [](Parser& p, const std::string& v) { p.cfg.jump_spec = v; return true; }},
                 {"intensity", [](Parser& p, const std::string& v) { return p.parse_double(v, p.cfg.jump_intensity); }},
                 {"mark_param", [](Parser& p, const std::string& v) { return p.parse_double(v, p.cfg.mark_param); }},
             }},
            {"sim",
             {
                 {"T", [](Parser& p, const std::string& v) { return p.parse_double(v, p.cfg.T); }},
                 {"dt", [](Parser& p, const std::string& v) { return p.parse_double(v, p.cfg.dt); }},
                 {"n", [](Parser& p, const std::string& v) { return p.parse_int(v, p.cfg.n); }},
                 {"m_levels", [](Parser& p, const std::string& v) { return p.parse_list(v, p.cfg.m_levels); }},
                 {"n_paths", [](Parser& p, const std::string& v) { return p.parse_int(v, p.cfg.n_paths); }},
                 {"seed", [](Parser& p, const std::string& v) { return p.parse_u64(v, p.cfg.seed); }},
                 {"scheme", [](Parser& p, const std::string& v) { p.cfg.scheme = v; return true; }},
                 {"initial", [](Parser& p, const std::string& v) { p.cfg.initial = v; return true; }},
                 {"initial_coeffs", [](Parser& p, const std::string& v) { return p.parse_list(v, p.cfg.initial_coeffs); }},
                 {"initial_scale", [](Parser& p, const std::string& v) { return p.parse_double(v, p.cfg.initial_scale); }},
             }},
            {"diagnostics",
             {
                 {"z_threshold", [](Parser& p, const std::string& v) { return p.parse_double(v, p.cfg.z_threshold); }},
                 {"allowed_fail_fraction", [](Parser& p, const std::string& v) { return p.parse_double(v, p.cfg.allowed_fail_fraction); }},
                 {"h_threshold", [](Parser& p, const std::string& v) { return p.parse_double(v, p.cfg.h_threshold); }},
                 {"drift_corruption", [](Parser& p, const std::string& v) { return p.parse_double(v, p.cfg.drift_corruption); }},
                 {"containment_eps", [](Parser& p, const std::string& v) { return p.parse_double(v, p.cfg.containment_eps); }},
                 {"aldous_eps", [](Parser& p, const std::string& v) { return p.parse_double(v, p.cfg.aldous_eps); }},
                 {"theta", [](Parser& p, const std::string& v) { return p.parse_double(v, p.cfg.theta); }},
                 {"a6_lambda", [](Parser& p, const std::string& v) { return p.parse_double(v, p.cfg.a6_lambda); }},
                 {"a6_eps", [](Parser& p, const std::string& v) { return p.parse_double(v, p.cfg.a6_eps); }},
                 {"a6_quad_points", [](Parser& p, const std::string& v) { return p.parse_int(v, p.cfg.a6_quad_points); }},
                 {"probe_times", [](Parser& p, const std::string& v) { return p.parse_list(v, p.cfg.probe_times); }},
             }},
            {"output",
             {
                 {"dir", [](Parser& p, const std::string& v) { p.cfg.out_dir = v; return true; }},
                 {"write_paths", [](Parser& p, const std::string& v) { return p.parse_bool(v, p.cfg.write_paths); }},
             }},
        };

        auto sec = schema.find(section);
        if (sec == schema.end()) {
            schema_error(line, "unknown section [" + section + "]");
            return;
        }
        auto entry = sec->second.find(key);
        if (entry == sec->second.end()) {
            schema_error(line, "unknown key \"" + key + "\" in section [" + section + "]");
            return;
        }
        if (!entry->second(*this, value))
            schema_error(line, "type mismatch for key \"" + key + "\": \"" + value + "\"");
    }

    void check_enum(const std::string& value, std::initializer_list<const char*> allowed,
                    const std::string& what) {
        for (const char* a : allowed)
            if (value == a) return;
        std::string list;
        for (const char* a : allowed) list += std::string(list.empty() ? "" : ", ") + a;
        constraint_error(0, what + " \"" + value + "\" not in {" + list + "}");
    }

    void validate() {
        if (cfg.n_modes < 1) constraint_error(0, "n_modes must be >= 1");
        check_enum(cfg.lambda_preset, {"harmonic", "constant"}, "lambda preset");
        check_enum(cfg.mu_preset, {"heat-1d", "zero"}, "mu preset");
        if (!cfg.lambda_list.empty() && static_cast<int>(cfg.lambda_list.size()) != cfg.n_modes)
            constraint_error(0, "lambda_list length must equal n_modes");
        if (!cfg.mu_list.empty() && static_cast<int>(cfg.mu_list.size()) != cfg.n_modes)
            constraint_error(0, "mu_list length must equal n_modes");
        check_enum(cfg.drift, {"zero", "constant", "linear", "bounded-nemytskii", "heat-drift"},
                   "drift preset");
        check_enum(cfg.sigma, {"zero", "identity", "scalar", "diagonal-decay", "mode1"},
                   "sigma preset");
        check_enum(cfg.jump, {"none", "constant-mode", "linear-mark", "bounded-nemytskii"},
                   "jump preset");
        check_enum(cfg.jump_spec, {"none", "single-atom", "compound-gaussian-marks"},
                   "noise spec");
        if (cfg.jump != "none" && cfg.jump_spec == "none")
            constraint_error(0, "jump coefficient requires a noise spec with positive intensity");
        if (cfg.jump_intensity < 0.0) constraint_error(0, "intensity must be >= 0");
        if (!(cfg.T > 0.0)) constraint_error(0, "T must be > 0");
        if (!(cfg.dt > 0.0)) {
            constraint_error(0, "dt must be > 0");
        } else if (cfg.dt > cfg.T) {
            constraint_error(0, "dt must not exceed T");
        } else {
            const auto steps = std::llround(cfg.T / cfg.dt);
            if (steps < 1 || std::abs(steps * cfg.dt - cfg.T) > 1e-9 * cfg.T)
                constraint_error(0, "dt must divide T");
        }
        if (cfg.n < 0 || cfg.n > cfg.n_modes)
            constraint_error(0, "n must lie in [0, n_modes]");
        if (cfg.m_levels.empty()) constraint_error(0, "m_levels must be non-empty");
        for (std::size_t i = 0; i < cfg.m_levels.size(); ++i) {
            if (cfg.m_levels[i] <= 0.0) constraint_error(0, "m_levels must be positive");
            if (i > 0 && cfg.m_levels[i] <= cfg.m_levels[i - 1])
                constraint_error(0, "m_levels must be strictly increasing");
        }
        if (cfg.n_paths < 1) constraint_error(0, "n_paths must be >= 1");
        check_enum(cfg.scheme, {"exponential-euler", "euler"}, "scheme");
        check_enum(cfg.initial, {"point", "gaussian-k"}, "initial law");
        if (!(cfg.z_threshold > 0.0)) constraint_error(0, "z_threshold must be > 0");
        if (cfg.allowed_fail_fraction < 0.0 || cfg.allowed_fail_fraction > 1.0)
            constraint_error(0, "allowed_fail_fraction must lie in [0, 1]");
        if (!(cfg.h_threshold > 0.0)) constraint_error(0, "h_threshold must be > 0");
        if (!(cfg.containment_eps > 0.0 && cfg.containment_eps <= 1.0))
            constraint_error(0, "containment_eps must lie in (0, 1]");
        if (cfg.aldous_eps < 0.0) constraint_error(0, "aldous_eps must be >= 0");
        if (!(cfg.theta > 0.0 && cfg.theta < 0.5))
            constraint_error(0, "theta must lie in (0, 1/2)");
        if (!(cfg.a6_lambda > 0.0 && cfg.a6_lambda < 0.5))
            constraint_error(0, "a6_lambda must lie in (0, 1/2)");
        if (!(cfg.a6_eps > 0.0)) constraint_error(0, "a6_eps must be > 0");
        if (cfg.a6_quad_points < 4) constraint_error(0, "a6_quad_points must be >= 4");
        if (cfg.dt > 0.0)
            for (double t : cfg.probe_times)
                if (t < 0.0 || t > cfg.T + 1e-12)
                    constraint_error(0, "probe_times must lie in [0, T]");
    }
};

}  // namespace

RunConfig parse_config(const std::string& text) {
    Parser parser;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                parser.schema_error(line_no, "malformed section header: " + line);
                continue;
            }
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            parser.schema_error(line_no, "expected key = value: " + line);
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty()) {
            parser.schema_error(line_no, "key \"" + key + "\" outside any section");
            continue;
        }
        parser.assign(section, key, value, line_no);
    }
    parser.validate();
    if (!parser.issues.empty()) throw ConfigError(std::move(parser.issues));
    return parser.cfg;
}

RunConfig parse_config_file(const std::string& path) { return parse_config(read_file(path)); }

SpectralBasis RunConfig::make_basis() const {
    if (!lambda_list.empty() || !mu_list.empty()) {
        std::vector<double> l = lambda_list, m = mu_list;
        if (l.empty())
            l = SpectralBasis::preset(n_modes, lambda_preset, "zero", lambda_scale, 1.0).lambda;
        if (m.empty())
            m = SpectralBasis::preset(n_modes, "constant", mu_preset, 1.0, mu_scale).mu;
        return SpectralBasis::make(std::move(l), std::move(m));
    }
    return SpectralBasis::preset(n_modes, lambda_preset, mu_preset, lambda_scale, mu_scale);
}

CoefficientSet RunConfig::make_coefficients(const SpectralBasis& basis) const {
    return CoefficientSet::catalog(basis, drift, drift_param, sigma, sigma_param, jump,
                                   jump_param);
}

JumpMeasureSpec RunConfig::make_jumps() const {
    return JumpMeasureSpec::preset(jump_spec, jump_intensity, mark_param);
}

SimConfig RunConfig::make_sim(const SpectralBasis& basis) const {
    SimConfig sim;
    sim.T = T;
    sim.dt = dt;
    sim.n = n;
    sim.m_levels = m_levels;
    sim.scheme = scheme == "euler" ? Scheme::Euler : Scheme::ExponentialEuler;
    if (initial == "point") {
        HilbertVector x = HilbertVector::zero(basis.n_modes);
        for (int i = 0; i < std::min<int>(static_cast<int>(initial_coeffs.size()), basis.n_modes); ++i)
            x[i] = initial_coeffs[static_cast<std::size_t>(i)];
        sim.initial = InitialLaw::point_mass(std::move(x));
    } else {
        sim.initial = InitialLaw::gaussian_k(initial_scale);
    }
    return sim;
}

std::vector<double> RunConfig::probe_times_or_default() const {
    if (!probe_times.empty()) return probe_times;
    return {T / 4.0, T / 2.0, T};
}

CoefficientSet shifted_drift(const CoefficientSet& base, const HilbertVector& shift) {
    CoefficientSet out = base;
    out.name = base.name + "+shift";
    out.drift_zero = false;
    out.drift = [base, shift](const HilbertVector& x) { return base.drift(x) + shift; };
    return out;
}

std::string config_documentation() {
    return
        "Configuration schema (every key optional; unknown keys rejected)\n"
        "[basis]\n"
        "  n_modes       int >= 1 (default 16)\n"
        "  lambda        harmonic | constant (default harmonic: scale/k)\n"
        "  lambda_scale  real > 0 (default 1.0)\n"
        "  lambda_list   comma list overriding the preset (length n_modes)\n"
        "  mu            heat-1d | zero (default heat-1d: -scale*pi^2*k^2)\n"
        "  mu_scale      real > 0 (default 1.0)\n"
        "  mu_list       comma list overriding the preset (length n_modes)\n"
        "[coefficients]\n"
        "  drift         zero | constant | linear | bounded-nemytskii | heat-drift (default zero)\n"
        "  drift_param   real (default 1.0)\n"
        "  sigma         zero | identity | scalar | diagonal-decay | mode1 (default identity)\n"
        "  sigma_param   real (default 1.0)\n"
        "  jump          none | constant-mode | linear-mark | bounded-nemytskii (default none)\n"
        "  jump_param    real (default 1.0)\n"
        "[noise]\n"
        "  spec          none | single-atom | compound-gaussian-marks (default none)\n"
        "  intensity     real >= 0, total jump rate (default 0)\n"
        "  mark_param    atom location or mark std dev (default 1.0)\n"
        "[sim]\n"
        "  T             horizon > 0 (default 1.0); dt must divide T\n"
        "  dt            step > 0 (default 0.001)\n"
        "  n             mollification level in [0, n_modes]; 0 = raw coefficients\n"
        "  m_levels      strictly increasing truncation radii (default 1e6)\n"
        "  n_paths       int >= 1 (default 1000)\n"
        "  seed          64-bit integer (default 42)\n"
        "  scheme        exponential-euler | euler (default exponential-euler)\n"
        "  initial       point | gaussian-k (default point; point defaults to 0)\n"
        "  initial_coeffs comma list for the point mass\n"
        "  initial_scale Gaussian initial-law scale (default 1.0)\n"
        "[diagnostics]\n"
        "  z_threshold   pass threshold on |z| (default 3.0)\n"
        "  allowed_fail_fraction  calibration allowance (default 0.02)\n"
        "  h_threshold   truncation-function threshold in the B-norm (default 1.0)\n"
        "  drift_corruption  mode-1 drift shift for the negative control (default 0)\n"
        "  containment_eps   quantile level for compact containment (default 0.05)\n"
        "  aldous_eps        displacement threshold for the exceedance test (default 0.25)\n"
        "  theta         factorization exponent in (0, 1/2) (default 0.25)\n"
        "  a6_lambda     exponent in (0, 1/2) (default 0.25)\n"
        "  a6_eps        upper integration limit (default 1.0)\n"
        "  a6_quad_points quadrature nodes (default 64)\n"
        "  probe_times   comma list of marginal times in [0, T] (default T/4, T/2, T)\n"
        "[output]\n"
        "  dir           output directory (default \"out\")\n"
        "  write_paths   true | false, dump per-path CSV (default false)\n";
}

}  // namespace sgmc
