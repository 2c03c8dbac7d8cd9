#include <cmath>

#include "doctest.h"
#include "sgmc/noise.hpp"
#include "sgmc/spectral.hpp"

using namespace sgmc;

namespace {

HilbertVector random_vector(int n, RandomStream& s, double scale = 1.0) {
    HilbertVector x = HilbertVector::zero(n);
    for (int i = 0; i < n; ++i) x[i] = scale * s.next_gaussian();
    return x;
}

// Test-side quadrature oracle for the single-mode integral
// int_0^1 t^{-1/2} e^{-2t} dt = 2 int_0^1 e^{-2 s^2} ds (t = s^2),
// evaluated by adaptive Simpson; independent of the implementation's
// power-substitution Gauss rule.
double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}
double adaptive_simpson(double (*f)(double), double a, double b, double eps, double whole,
                        double fa, double fm, double fb, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(a, m, fa, flm, fm);
    const double right = simpson(m, b, fm, frm, fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * eps)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, eps / 2.0, left, fa, flm, fm, depth - 1) +
           adaptive_simpson(f, m, b, eps / 2.0, right, fm, frm, fb, depth - 1);
}
double integrand(double s) { return 2.0 * std::exp(-2.0 * s * s); }
double oracle_a6_single_mode() {
    const double fa = integrand(0.0), fb = integrand(1.0), fm = integrand(0.5);
    return adaptive_simpson(integrand, 0.0, 1.0, 1e-12, simpson(0.0, 1.0, fa, fm, fb), fa, fm,
                            fb, 40);
}

}  // namespace

TEST_CASE("norm_b examples") {
    CHECK(norm_b(HilbertVector::zero(5)) == 0.0);
    CHECK(norm_b(HilbertVector(std::vector<double>{3.0, 4.0})) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(norm_b(HilbertVector(std::vector<double>{1.0, 1.0, 1.0})) ==
          doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
}

TEST_CASE("norm_k examples and J isometry") {
    const SpectralBasis basis = SpectralBasis::make({1.0, 0.5, 1.0 / 3.0}, {0.0, 0.0, 0.0});
    CHECK(norm_k(HilbertVector::mode(2, 1.0, 3), basis) == doctest::Approx(2.0).epsilon(1e-15));

    const SpectralBasis b2 = SpectralBasis::make({1.0, 0.5}, {0.0, 0.0});
    CHECK(norm_k(HilbertVector(std::vector<double>{1.0, 1.0}), b2) ==
          doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));

    RandomStream s(1, 0);
    for (int trial = 0; trial < 20; ++trial) {
        const HilbertVector y = random_vector(3, s);
        CHECK(norm_k(apply_j(y, basis), basis) == doctest::Approx(norm_b(y)).epsilon(1e-15));
    }
}

TEST_CASE("apply_j / apply_j_inv") {
    const SpectralBasis basis = SpectralBasis::make({0.5}, {0.0});
    CHECK(apply_j_inv(HilbertVector(std::vector<double>{1.0}), basis)[0] == doctest::Approx(2.0));
    const SpectralBasis b3 = SpectralBasis::make({1.0, 0.5, 0.25}, {0.0, 0.0, 0.0});
    CHECK(apply_j(HilbertVector::mode(1, 1.0, 3), b3)[0] == 1.0);

    RandomStream s(2, 0);
    for (int trial = 0; trial < 20; ++trial) {
        const HilbertVector x = random_vector(3, s);
        const HilbertVector rt = apply_j_inv(apply_j(x, b3), b3);
        for (int i = 0; i < 3; ++i) CHECK(rt[i] == x[i]);  // exact cancellation
    }
}

TEST_CASE("semigroup identities") {
    const SpectralBasis heat = SpectralBasis::preset(4, "harmonic", "heat-1d");
    RandomStream s(3, 0);
    const HilbertVector x = random_vector(4, s);

    SUBCASE("t = 0 is the identity") {
        const HilbertVector y = semigroup_apply(0.0, x, heat);
        for (int i = 0; i < 4; ++i) CHECK(y[i] == x[i]);
    }
    SUBCASE("heat mode-1 decay over unit time") {
        const HilbertVector y = semigroup_apply(1.0, HilbertVector::mode(1, 1.0, 4), heat);
        CHECK(y[0] == doctest::Approx(5.172318620381234e-05).epsilon(1e-12));
    }
    SUBCASE("semigroup law") {
        const HilbertVector two_steps = semigroup_apply(1.0, semigroup_apply(1.0, x, heat), heat);
        const HilbertVector one_step = semigroup_apply(2.0, x, heat);
        for (int i = 0; i < 4; ++i)
            CHECK(two_steps[i] == doctest::Approx(one_step[i]).epsilon(1e-12));
    }
    SUBCASE("contraction") {
        for (double t : {0.01, 0.1, 1.0})
            CHECK(norm_b(semigroup_apply(t, x, heat)) <= norm_b(x));
    }
}

TEST_CASE("Parseval and embedding bound properties") {
    const SpectralBasis basis = SpectralBasis::preset(8, "harmonic", "zero");
    RandomStream s(4, 0);
    for (int trial = 0; trial < 50; ++trial) {
        const HilbertVector x = random_vector(8, s);
        double sq = 0.0;
        for (int i = 0; i < 8; ++i) sq += x[i] * x[i];
        CHECK(norm_b(x) * norm_b(x) == doctest::Approx(sq).epsilon(1e-14));
        CHECK(norm_b(x) <= iota_operator_norm(basis) * norm_k(x, basis) + 1e-12);
    }
    // basis case: |e_k|_B = lambda_k <= lambda_max * |e_k|_K
    for (int k = 1; k <= 8; ++k) {
        const HilbertVector ek = HilbertVector::mode(k, basis.lambda[k - 1], 8);
        CHECK(norm_b(ek) == doctest::Approx(basis.lambda[k - 1]));
        CHECK(norm_k(ek, basis) == doctest::Approx(1.0));
    }
}

TEST_CASE("iota operator norm is max lambda") {
    const SpectralBasis basis = SpectralBasis::make({1.0, 0.5, 1.0 / 3.0}, {0.0, 0.0, 0.0});
    CHECK(iota_operator_norm(basis) == 1.0);
}

TEST_CASE("basis validation") {
    CHECK_THROWS(SpectralBasis::make({1.0, -0.5}, {0.0, 0.0}));
    CHECK_THROWS(SpectralBasis::make({1.0}, {0.5}));
    CHECK_THROWS(SpectralBasis::make({}, {}));
}

TEST_CASE("a6 check: single-mode oracle") {
    const SpectralBasis basis = SpectralBasis::make({1.0}, {-1.0});
    const A6Result res = check_a6(basis, 0.25, 1.0, 64);
    const double oracle = oracle_a6_single_mode();
    CHECK(oracle == doctest::Approx(1.1962880133226).epsilon(1e-10));
    CHECK(res.estimate == doctest::Approx(oracle).epsilon(1e-10));
    CHECK(res.converged);
}

TEST_CASE("a6 check: heat basis converges, flat spectrum does not") {
    const SpectralBasis heat = SpectralBasis::preset(16, "harmonic", "heat-1d");
    const A6Result heat_res = check_a6(heat, 0.25, 1.0, 64);
    CHECK(heat_res.converged);
    CHECK(heat_res.estimate > 0.0);
    CHECK(std::isfinite(heat_res.tail_estimate));

    const SpectralBasis flat = SpectralBasis::preset(16, "harmonic", "zero");
    const A6Result flat_res = check_a6(flat, 0.25, 1.0, 64);
    CHECK_FALSE(flat_res.converged);
    CHECK(flat_res.reason.find("NonIntegrable") != std::string::npos);
    // per-mode contribution is eps^{1-2q}/(1-2q) = 2 for q = 1/4, eps = 1
    CHECK(flat_res.estimate == doctest::Approx(32.0).epsilon(1e-10));
}

TEST_CASE("a6 check rejects bad exponents") {
    const SpectralBasis basis = SpectralBasis::make({1.0}, {-1.0});
    CHECK_THROWS(check_a6(basis, 0.5, 1.0, 64));
    CHECK_THROWS(check_a6(basis, -0.1, 1.0, 64));
}
