#include <cmath>

#include "doctest.h"
#include "sgmc/numerics.hpp"

using namespace sgmc;

TEST_CASE("gauss-legendre integrates polynomials of degree 2n-1 exactly") {
    const GaussRule rule = gauss_legendre(5);
    double sum = 0.0;
    for (int i = 0; i < 5; ++i) sum += rule.weights[i];
    CHECK(sum == doctest::Approx(2.0).epsilon(1e-14));

    // x^8 on [-1,1] = 2/9 with a 5-point rule (degree 9 capacity)
    double i8 = 0.0;
    for (int i = 0; i < 5; ++i) i8 += rule.weights[i] * std::pow(rule.nodes[i], 8);
    CHECK(i8 == doctest::Approx(2.0 / 9.0).epsilon(1e-13));

    // odd powers vanish by symmetry
    double i3 = 0.0;
    for (int i = 0; i < 5; ++i) i3 += rule.weights[i] * std::pow(rule.nodes[i], 3);
    CHECK(std::abs(i3) < 1e-15);
}

TEST_CASE("gauss-legendre mapped interval") {
    const GaussRule rule = gauss_legendre(16, 0.0, 2.0);
    double val = 0.0;
    for (int i = 0; i < 16; ++i) val += rule.weights[i] * std::exp(-rule.nodes[i]);
    CHECK(val == doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-14));
}

TEST_CASE("affine fit recovers exact affine data") {
    const AffineFit fit = affine_fit({0.0, 1.0, 2.0, 3.0}, {1.0, 3.0, 5.0, 7.0});
    CHECK(fit.slope == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(fit.intercept == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(fit.max_abs_residual < 1e-12);
}

TEST_CASE("fnv1a64 distinguishes content and is stable") {
    const char a[] = "abc";
    const char b[] = "abd";
    CHECK(fnv1a64(a, 3) != fnv1a64(b, 3));
    CHECK(fnv1a64(a, 3) == fnv1a64(a, 3));
    CHECK(fnv1a64("", 0) == 1469598103934665603ull);
}
