#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "sgmc/noise.hpp"
#include "sgmc/spectral.hpp"

namespace sgmc {

/// Declared growth metadata. The bounds are user-declared and spot-audited by
/// sampling, not symbolically verified:
///   |b(x)|_K + |sigma(x)|_HS(K) <= L (1 + |x|_K)
///   |v(y,x)|_K <= gamma(y) (1 + |x|_K)
///   sup_{|x|_B <= m} |v(y,x)|_B <= zeta(m, y)
struct GrowthProfile {
    double L = 0.0;
    std::function<double(const Mark&)> gamma = [](const Mark&) { return 0.0; };
    std::function<double(double, const Mark&)> zeta = [](double, const Mark&) { return 0.0; };
};

/// Diffusion coefficient as a finite matrix from noise coordinates to state
/// modes; either mode-diagonal or dense row-major (n_modes x n_noise).
struct SigmaMatrix {
    bool is_diagonal = true;
    int n_modes = 0;
    int n_noise = 0;
    std::vector<double> diag;
    std::vector<double> dense;

    static SigmaMatrix diagonal(std::vector<double> d);
    static SigmaMatrix dense_matrix(int n_modes, int n_noise, std::vector<double> entries);
    static SigmaMatrix zeros(int n_modes);

    double entry(int mode, int noise) const;
    /// out += sigma * w, with w a noise-space vector of length n_noise.
    void apply_add(std::span<const double> w, std::span<double> out) const;
    /// <sigma sigma* y, y> = |sigma^T y|^2.
    double quad_form(const HilbertVector& ystar) const;
    double hs_norm_k(const SpectralBasis& basis) const;
};

SigmaMatrix operator+(const SigmaMatrix& a, const SigmaMatrix& b);
SigmaMatrix operator-(const SigmaMatrix& a, const SigmaMatrix& b);
SigmaMatrix operator*(double s, const SigmaMatrix& a);

/// Spectral norm of sigma as an operator on B (power iteration on
/// sigma sigma^T, deterministic start).
double sigma_op_norm_b(const SigmaMatrix& a);

/// User-specified coefficients b, sigma, v with growth metadata. Evaluators
/// must be pure; the set is shared across concurrent path workers.
struct CoefficientSet {
    std::string name;
    std::function<HilbertVector(const HilbertVector&)> drift;
    std::function<SigmaMatrix(const HilbertVector&)> sigma;
    std::function<HilbertVector(const Mark&, const HilbertVector&)> jump;
    GrowthProfile growth;

    // Evaluation shortcuts; adapters preserve them where exactness allows.
    bool drift_zero = false;
    bool jump_zero = false;
    bool sigma_state_dependent = false;

    /// Built-in catalog. Drift: zero | constant | linear | bounded-nemytskii |
    /// heat-drift. Sigma: zero | identity | scalar | diagonal-decay | mode1.
    /// Jump: none | constant-mode | linear-mark | bounded-nemytskii.
    static CoefficientSet catalog(const SpectralBasis& basis, const std::string& drift_name,
                                  double drift_param, const std::string& sigma_name,
                                  double sigma_param, const std::string& jump_name,
                                  double jump_param);
};

/// Mollification scale: (1/n) * min_{k<=n} lambda_k (equality variant of the
/// construction's upper bound).
double epsilon_n(int n, const SpectralBasis& basis);

/// First n basis coefficients of x.
std::vector<double> project_theta(const HilbertVector& x, int n);

/// Deterministic quadrature on the unit ball of R^dim, weighted by the
/// standard mollifier exp(-1/(1-|u|^2)) and normalized so the weights sum to
/// exactly 1 (mollification is then exact on constants). Product rules are
/// symmetric, so odd moments vanish. Beyond the dimension cap a seeded
/// antithetic Monte Carlo rule is used instead.
struct BallQuadrature {
    int dim = 0;
    std::vector<double> nodes;    // count x dim, flat
    std::vector<double> weights;  // sum to 1

    int count() const { return dim == 0 ? 0 : static_cast<int>(weights.size()); }
    std::span<const double> node(int j) const {
        return {nodes.data() + static_cast<std::size_t>(j) * dim, static_cast<std::size_t>(dim)};
    }

    static BallQuadrature product_rule(int dim, int per_axis);
    static BallQuadrature monte_carlo(int dim, int count, std::uint64_t seed);
    static BallQuadrature standard(int dim);
    static constexpr int kProductDimCap = 8;
};

/// Mollified evaluation at a single point: the convolution of the coefficient
/// with the scale-eps_n mollifier, approximated by the quadrature rule. The
/// evaluation arguments live in the span of the first n modes.
HilbertVector mollify_drift(const CoefficientSet& coeff, int n, const SpectralBasis& basis,
                            const BallQuadrature& quad, const HilbertVector& x);
SigmaMatrix mollify_sigma(const CoefficientSet& coeff, int n, const SpectralBasis& basis,
                          const BallQuadrature& quad, const HilbertVector& x);
HilbertVector mollify_jump(const CoefficientSet& coeff, int n, const SpectralBasis& basis,
                           const BallQuadrature& quad, const Mark& mark, const HilbertVector& x);

/// Whole-set adapter with the standard quadrature for dimension n.
CoefficientSet mollified(const CoefficientSet& base, int n, const SpectralBasis& basis);
CoefficientSet mollified(const CoefficientSet& base, int n, const SpectralBasis& basis,
                         const BallQuadrature& quad);

/// Radial truncation argument (1 ^ m/|x|_K) x; evaluating any coefficient at
/// the truncated argument equals the untruncated evaluation when |x|_K <= m.
HilbertVector truncate_arg(const HilbertVector& x, double m, const SpectralBasis& basis);
CoefficientSet truncated(const CoefficientSet& base, double m, const SpectralBasis& basis);

/// Drift of the induced martingale-problem coefficient,
///   mu(x) = b(x) + int (h(v(y,x)) - v(y,x)) F(dy),
/// with h(x) = x 1{|x|_B <= h_threshold} and the integral evaluated by the
/// jump spec's mark quadrature. Equals b(x) when every jump is below the
/// threshold.
HilbertVector compensated_drift(const CoefficientSet& coeff, const HilbertVector& x,
                                const JumpMeasureSpec& jumps, double h_threshold);

/// Full jump compensator int v(y,x) F(dy) via the mark quadrature.
HilbertVector jump_compensator(const CoefficientSet& coeff, const HilbertVector& x,
                               const JumpMeasureSpec& jumps);

/// Spot audit of the declared growth metadata on sampled points with finite
/// K-norm: worst observed slack of
///   |b(x)|_K + |sigma(x)|_HS(K) - L (1 + |x|_K)   and
///   |v(y,x)|_K - gamma(y) (1 + |x|_K).
/// Nonpositive results mean the declarations held on the sample.
struct GrowthAudit {
    double worst_lg_excess = -1e300;     // linear growth on K
    double worst_gamma_excess = -1e300;  // jump growth on K
};
GrowthAudit audit_growth(const CoefficientSet& coeff, const SpectralBasis& basis,
                         const JumpMeasureSpec& jumps, int samples, double radius,
                         std::uint64_t seed);

/// Sup distances between the mollified approximants and the raw coefficients
/// over a finite grid of states (and marks for v); the finite-scale shadow of
/// the uniform-on-compacts convergence hypotheses.
struct ConvergenceRow {
    int n = 0;
    double dist_b = 0.0;
    double dist_sigma = 0.0;
    double dist_v = 0.0;
};
std::vector<ConvergenceRow> convergence_scan(const CoefficientSet& coeff,
                                             const std::vector<int>& n_list,
                                             const std::vector<HilbertVector>& grid,
                                             const std::vector<Mark>& marks,
                                             const SpectralBasis& basis);

}  // namespace sgmc
