#pragma once

#include <cstdint>
#include <vector>

namespace sgmc {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Computes the n-point Gauss-Legendre rule by Newton iteration on the
/// Legendre polynomial. Deterministic; accurate to ~1e-15 for n <= 256.
GaussRule gauss_legendre(int n);

/// Rule mapped to [a, b].
GaussRule gauss_legendre(int n, double a, double b);

/// Least-squares affine fit y ~ intercept + slope * x.
struct AffineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double max_abs_residual = 0.0;
};
AffineFit affine_fit(const std::vector<double>& x, const std::vector<double>& y);

/// FNV-1a 64-bit content hash, used for artifact manifests.
std::uint64_t fnv1a64(const void* data, std::size_t len);

}  // namespace sgmc
