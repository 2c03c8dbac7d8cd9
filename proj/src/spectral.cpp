#include "sgmc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sgmc/numerics.hpp"

namespace sgmc {

HilbertVector HilbertVector::mode(int k, double c, int n) {
    if (k < 1 || k > n) throw std::invalid_argument("HilbertVector::mode: index out of range");
    HilbertVector x = zero(n);
    x[k - 1] = c;
    return x;
}

HilbertVector operator+(const HilbertVector& a, const HilbertVector& b) {
    HilbertVector out = a.size() >= b.size() ? a : b;
    const HilbertVector& small = a.size() >= b.size() ? b : a;
    for (int i = 0; i < small.size(); ++i) out[i] += small[i];
    return out;
}

HilbertVector operator-(const HilbertVector& a, const HilbertVector& b) {
    HilbertVector out = a;
    out.coeffs.resize(std::max(a.size(), b.size()), 0.0);
    for (int i = 0; i < b.size(); ++i) out[i] -= b[i];
    return out;
}

HilbertVector operator*(double s, const HilbertVector& a) {
    HilbertVector out = a;
    for (double& c : out.coeffs) c *= s;
    return out;
}

SpectralBasis SpectralBasis::make(std::vector<double> lambda, std::vector<double> mu) {
    if (lambda.empty() || lambda.size() != mu.size())
        throw std::invalid_argument("SpectralBasis: lambda and mu must be non-empty, equal length");
    for (double l : lambda)
        if (!(l > 0.0)) throw std::invalid_argument("SpectralBasis: lambda_k must be > 0");
    for (double m : mu)
        if (!(m <= 0.0)) throw std::invalid_argument("SpectralBasis: mu_k must be <= 0");
    SpectralBasis b;
    b.n_modes = static_cast<int>(lambda.size());
    b.lambda = std::move(lambda);
    b.mu = std::move(mu);
    b.lambda_max = *std::max_element(b.lambda.begin(), b.lambda.end());
    return b;
}

SpectralBasis SpectralBasis::preset(int n_modes, const std::string& lambda_preset,
                                    const std::string& mu_preset, double lambda_scale,
                                    double mu_scale) {
    if (n_modes < 1) throw std::invalid_argument("SpectralBasis::preset: n_modes must be >= 1");
    std::vector<double> lambda(n_modes), mu(n_modes);
    for (int k = 1; k <= n_modes; ++k) {
        if (lambda_preset == "harmonic")
            lambda[k - 1] = lambda_scale / k;
        else if (lambda_preset == "constant")
            lambda[k - 1] = lambda_scale;
        else
            throw std::invalid_argument("unknown lambda preset: " + lambda_preset);
        if (mu_preset == "heat-1d")
            mu[k - 1] = -mu_scale * M_PI * M_PI * k * k;
        else if (mu_preset == "zero")
            mu[k - 1] = 0.0;
        else
            throw std::invalid_argument("unknown mu preset: " + mu_preset);
    }
    return make(std::move(lambda), std::move(mu));
}

double norm_b(std::span<const double> coeffs) {
    double s = 0.0;
    for (double c : coeffs) s += c * c;
    return std::sqrt(s);
}

double norm_b(const HilbertVector& x) { return norm_b(std::span<const double>(x.coeffs)); }

double dot_b(std::span<const double> x, const HilbertVector& y) {
    const std::size_t n = std::min(x.size(), y.coeffs.size());
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * y.coeffs[i];
    return s;
}

double dot_b(const HilbertVector& x, const HilbertVector& y) {
    return dot_b(std::span<const double>(x.coeffs), y);
}

double norm_k(std::span<const double> coeffs, const SpectralBasis& basis) {
    if (coeffs.size() > static_cast<std::size_t>(basis.n_modes))
        throw std::invalid_argument("norm_k: more coefficients than represented modes");
    double s = 0.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const double r = coeffs[i] / basis.lambda[i];
        s += r * r;
    }
    return std::sqrt(s);
}

double norm_k(const HilbertVector& x, const SpectralBasis& basis) {
    return norm_k(std::span<const double>(x.coeffs), basis);
}

HilbertVector apply_j(const HilbertVector& x, const SpectralBasis& basis) {
    HilbertVector out = x;
    for (int i = 0; i < out.size(); ++i) out[i] *= basis.lambda[static_cast<std::size_t>(i)];
    return out;
}

HilbertVector apply_j_inv(const HilbertVector& x, const SpectralBasis& basis) {
    HilbertVector out = x;
    for (int i = 0; i < out.size(); ++i) out[i] /= basis.lambda[static_cast<std::size_t>(i)];
    return out;
}

HilbertVector semigroup_apply(double t, const HilbertVector& x, const SpectralBasis& basis) {
    if (t < 0.0) throw std::invalid_argument("semigroup_apply: t must be >= 0");
    HilbertVector out = x;
    for (int i = 0; i < out.size(); ++i)
        out[i] *= std::exp(basis.mu[static_cast<std::size_t>(i)] * t);
    return out;
}

double iota_operator_norm(const SpectralBasis& basis) { return basis.lambda_max; }

namespace {

// int_0^eps t^{-2q} exp(2 mu t) dt for a single mode, via the substitution
// t = s^p with p = 1/(1-2q), which removes the t->0 singularity:
//   integral = p * int_0^{eps^{1/p}} exp(2 mu s^p) ds.
// The upper limit is clipped where the exponential factor is below 1e-20 so a
// fixed Gauss rule resolves stiff modes as well.
double mode_integral(double mu, double q, double eps, int quad_points) {
    const double p = 1.0 / (1.0 - 2.0 * q);
    double upper = std::pow(eps, 1.0 / p);
    if (mu < 0.0) {
        const double cutoff = std::pow(46.0 / (-2.0 * mu), 1.0 / p);
        upper = std::min(upper, cutoff);
    }
    GaussRule rule = gauss_legendre(quad_points, 0.0, upper);
    double sum = 0.0;
    for (int i = 0; i < quad_points; ++i)
        sum += rule.weights[i] * std::exp(2.0 * mu * std::pow(rule.nodes[i], p));
    return p * sum;
}

}  // namespace

A6Result check_a6(const SpectralBasis& basis, double lambda_exp, double eps, int quad_points) {
    if (!(lambda_exp > 0.0 && lambda_exp < 0.5))
        throw std::invalid_argument("check_a6: lambda_exp must lie in (0, 1/2)");
    if (!(eps > 0.0)) throw std::invalid_argument("check_a6: eps must be > 0");
    if (quad_points < 4) throw std::invalid_argument("check_a6: quad_points must be >= 4");

    A6Result res;
    std::vector<double> contrib(static_cast<std::size_t>(basis.n_modes));
    bool t_stable = true;
    for (int k = 0; k < basis.n_modes; ++k) {
        const double mu = basis.mu[static_cast<std::size_t>(k)];
        const double coarse = mode_integral(mu, lambda_exp, eps, quad_points);
        const double fine = mode_integral(mu, lambda_exp, eps, 2 * quad_points);
        contrib[static_cast<std::size_t>(k)] = fine;
        res.estimate += fine;
        if (std::abs(fine - coarse) > 1e-8 * (std::abs(fine) + 1e-300)) t_stable = false;
    }

    if (basis.n_modes == 1) {
        // No decay information from a single mode; the truncated model is all
        // there is to report on.
        res.tail_estimate = 0.0;
        res.converged = t_stable;
        res.reason = t_stable ? "single mode, quadrature stable" : "quadrature unstable";
        return res;
    }

    const double last = contrib.back();
    const double prev = contrib[contrib.size() - 2];
    const double ratio = prev > 0.0 ? last / prev : 1.0;
    if (ratio >= 1.0 - 1e-12) {
        res.tail_estimate = std::numeric_limits<double>::infinity();
        res.converged = false;
        res.reason = "NonIntegrable: per-mode contributions do not decay";
        return res;
    }
    res.tail_estimate = last * ratio / (1.0 - ratio);
    const bool tail_ok = res.tail_estimate <= res.estimate;
    res.converged = t_stable && tail_ok;
    if (!t_stable)
        res.reason = "quadrature unstable under refinement";
    else if (!tail_ok)
        res.reason = "NonIntegrable: mode-tail estimate exceeds represented sum";
    else
        res.reason = "mode-tail and quadrature below tolerance";
    return res;
}

}  // namespace sgmc
