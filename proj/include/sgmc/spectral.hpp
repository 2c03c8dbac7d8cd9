#pragma once

#include <span>
#include <string>
#include <vector>

namespace sgmc {

/// Coefficient vector of a point x in the state space, expanded in the
/// orthonormal basis (h_k). Entries beyond the stored length are zero.
struct HilbertVector {
    std::vector<double> coeffs;

    HilbertVector() = default;
    explicit HilbertVector(std::vector<double> c) : coeffs(std::move(c)) {}
    static HilbertVector zero(int n) { return HilbertVector(std::vector<double>(n, 0.0)); }
    /// c * h_k (1-based mode index), padded to n modes.
    static HilbertVector mode(int k, double c, int n);

    int size() const { return static_cast<int>(coeffs.size()); }
    double operator[](int i) const { return coeffs[static_cast<std::size_t>(i)]; }
    double& operator[](int i) { return coeffs[static_cast<std::size_t>(i)]; }
};

HilbertVector operator+(const HilbertVector& a, const HilbertVector& b);
HilbertVector operator-(const HilbertVector& a, const HilbertVector& b);
HilbertVector operator*(double s, const HilbertVector& a);

/// Diagonal model of the compact operator J and the linearity A on a shared
/// orthonormal basis: J h_k = lambda_k h_k with lambda_k > 0, and
/// A h_k = mu_k h_k with mu_k <= 0. The smaller space is J(B) with norm
/// |J^{-1} . |; its orthonormal basis is e_k = lambda_k h_k.
struct SpectralBasis {
    int n_modes = 0;
    std::vector<double> lambda;  // eigenvalues of J, all > 0
    std::vector<double> mu;      // eigenvalues of A, all <= 0
    double lambda_max = 0.0;

    static SpectralBasis make(std::vector<double> lambda, std::vector<double> mu);
    /// Preset generators. lambda_preset: "harmonic" (scale/k) or "constant"
    /// (scale). mu_preset: "heat-1d" (-scale*pi^2*k^2) or "zero".
    static SpectralBasis preset(int n_modes, const std::string& lambda_preset,
                                const std::string& mu_preset, double lambda_scale = 1.0,
                                double mu_scale = 1.0);
};

double norm_b(const HilbertVector& x);
double norm_b(std::span<const double> coeffs);
double dot_b(const HilbertVector& x, const HilbertVector& y);
double dot_b(std::span<const double> x, const HilbertVector& y);

/// |x|_K = sqrt(sum (c_k / lambda_k)^2); coefficients past n_modes must be zero.
double norm_k(const HilbertVector& x, const SpectralBasis& basis);
double norm_k(std::span<const double> coeffs, const SpectralBasis& basis);

HilbertVector apply_j(const HilbertVector& x, const SpectralBasis& basis);
HilbertVector apply_j_inv(const HilbertVector& x, const SpectralBasis& basis);

/// Applies S_t = exp(tA) coefficientwise: c_k -> c_k * exp(mu_k t).
HilbertVector semigroup_apply(double t, const HilbertVector& x, const SpectralBasis& basis);

/// Norm of the embedding K -> B; equals max_k lambda_k in the diagonal model,
/// so |x|_B <= iota_operator_norm(basis) * |x|_K.
double iota_operator_norm(const SpectralBasis& basis);

/// Convergence check for the weighted squared Hilbert-Schmidt integral
/// int_0^eps t^{-2*lambda_exp} |S_t|_HS^2 dt on the represented modes,
/// with a geometric mode-tail estimate from the decay of the last two
/// per-mode contributions. `converged` reflects the truncated model only;
/// non-decaying contributions (e.g. mu == 0 over many modes) are flagged
/// NonIntegrable instead of silently truncated.
struct A6Result {
    double estimate = 0.0;         // sum over represented modes
    double tail_estimate = 0.0;    // geometric extrapolation beyond n_modes
    bool converged = false;
    std::string reason;
};
A6Result check_a6(const SpectralBasis& basis, double lambda_exp, double eps, int quad_points);

}  // namespace sgmc
