#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sgmc/coefficients.hpp"
#include "sgmc/simulate.hpp"
#include "sgmc/spectral.hpp"

namespace sgmc {

/// Cylindrical test function f = g(<., ystar>) with hand-coded first and
/// second derivatives (no numerical differentiation in the generator).
struct TestFunction {
    std::string name;
    std::function<double(double)> g, dg, ddg;
    HilbertVector ystar;
    double sup_g = 0.0, sup_dg = 0.0, sup_ddg = 0.0;
    bool compact_support = false;
    double support_lo = 0.0, support_hi = 0.0;

    double eval(const HilbertVector& x) const { return g(dot_b(x, ystar)); }
    double eval(std::span<const double> x) const { return g(dot_b(x, ystar)); }

    /// Smooth bump vanishing exactly outside (center-width, center+width).
    static TestFunction compact_bump(double center, double width, HilbertVector ystar);
    /// tanh(u / scale): bounded with bounded first and second derivatives.
    static TestFunction smooth_saturating(double scale, HilbertVector ystar);
    /// Arbitrary g with caller-supplied derivatives (test and probe use).
    static TestFunction custom(std::string name, std::function<double(double)> g,
                               std::function<double(double)> dg,
                               std::function<double(double)> ddg, HilbertVector ystar);
};

/// Truncation function h(x) = x 1{ |x|_B <= threshold }.
struct TruncationSpec {
    double threshold = 1.0;
    HilbertVector apply(const HilbertVector& v) const {
        return norm_b(v) <= threshold ? v : HilbertVector::zero(v.size());
    }
};

/// The integro-differential generator applied to f at x:
///   (<x, A* y*> + <mu(x), y*>) g'(u) + 1/2 <a(x) y*, y*> g''(u)
///     + sum_quad w [ f(x + v) - f(x) - <h(v), y*> g'(u) ],
/// where u = <x, y*>, a = sigma sigma*, mu is the compensated drift and the
/// jump integral runs over the mark quadrature.
double eval_generator(const TestFunction& f, const HilbertVector& x, const CoefficientSet& coeffs,
                      const SpectralBasis& basis, const JumpMeasureSpec& jumps,
                      const TruncationSpec& h);

/// Bivariate cross-check form f = g(<., y1>, <., y2>) with hand-coded
/// partials; implements the two-dimensional generator for validation against
/// the univariate class.
struct TestFunction2 {
    std::function<double(double, double)> g;
    std::function<double(double, double)> g1, g2;        // first partials
    std::function<double(double, double)> g11, g12, g22;  // second partials
    HilbertVector y1, y2;
};
double eval_generator2(const TestFunction2& f, const HilbertVector& x,
                       const CoefficientSet& coeffs, const SpectralBasis& basis,
                       const JumpMeasureSpec& jumps, const TruncationSpec& h);

/// Martingale-test increment along a discrete path between grid indices,
/// stopped at the first time the chosen norm reaches m:
///   f(X_{t ^ tau}) - f(X_{s ^ tau}) - dt * sum of Kf at the pre-jump states
/// over the stopped window (left-endpoint, predictable evaluation).
double mf_increment(const TestFunction& f, const SamplePath& path, int s_index, int t_index,
                    double m, PathNorm norm, const CoefficientSet& coeffs,
                    const SpectralBasis& basis, const JumpMeasureSpec& jumps,
                    const TruncationSpec& h);

/// Max |Kf| over sample_count points drawn uniformly from the B-ball of the
/// given radius (restricted to represented modes).
double generator_bound_scan(const TestFunction& f, double radius, int sample_count,
                            const CoefficientSet& coeffs, const SpectralBasis& basis,
                            const JumpMeasureSpec& jumps, const TruncationSpec& h,
                            std::uint64_t seed);

}  // namespace sgmc
