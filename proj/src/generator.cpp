#include "sgmc/generator.hpp"

#include <cmath>
#include <stdexcept>

namespace sgmc {

TestFunction TestFunction::compact_bump(double center, double width, HilbertVector ystar) {
    if (!(width > 0.0)) throw std::invalid_argument("compact_bump: width must be > 0");
    auto psi = [](double s) { return std::exp(-1.0 / (1.0 - s * s)); };
    TestFunction f;
    f.name = "bump(c=" + std::to_string(center) + ",w=" + std::to_string(width) + ")";
    f.g = [center, width, psi](double u) {
        const double s = (u - center) / width;
        return std::abs(s) < 1.0 ? psi(s) : 0.0;
    };
    f.dg = [center, width, psi](double u) {
        const double s = (u - center) / width;
        if (std::abs(s) >= 1.0) return 0.0;
        const double d = 1.0 - s * s;
        return psi(s) * (-2.0 * s / (d * d)) / width;
    };
    f.ddg = [center, width, psi](double u) {
        const double s = (u - center) / width;
        if (std::abs(s) >= 1.0) return 0.0;
        const double d = 1.0 - s * s;
        const double d2 = d * d;
        const double term = 4.0 * s * s / (d2 * d2) - 2.0 / d2 - 8.0 * s * s / (d2 * d);
        return psi(s) * term / (width * width);
    };
    f.ystar = std::move(ystar);
    f.sup_g = std::exp(-1.0);
    f.sup_dg = 0.6382 / width;          // max of |psi'| on (-1,1)
    f.sup_ddg = 2.0 * std::exp(-1.0) / (width * width) * 5.0;  // coarse reported bound
    f.compact_support = true;
    f.support_lo = center - width;
    f.support_hi = center + width;
    return f;
}

TestFunction TestFunction::smooth_saturating(double scale, HilbertVector ystar) {
    if (!(scale > 0.0)) throw std::invalid_argument("smooth_saturating: scale must be > 0");
    TestFunction f;
    f.name = "tanh(scale=" + std::to_string(scale) + ")";
    f.g = [scale](double u) { return std::tanh(u / scale); };
    f.dg = [scale](double u) {
        const double c = std::cosh(u / scale);
        return 1.0 / (scale * c * c);
    };
    f.ddg = [scale](double u) {
        const double t = std::tanh(u / scale);
        const double c = std::cosh(u / scale);
        return -2.0 * t / (scale * scale * c * c);
    };
    f.ystar = std::move(ystar);
    f.sup_g = 1.0;
    f.sup_dg = 1.0 / scale;
    f.sup_ddg = 0.7699 / (scale * scale);
    return f;
}

TestFunction TestFunction::custom(std::string name, std::function<double(double)> g,
                                  std::function<double(double)> dg,
                                  std::function<double(double)> ddg, HilbertVector ystar) {
    TestFunction f;
    f.name = std::move(name);
    f.g = std::move(g);
    f.dg = std::move(dg);
    f.ddg = std::move(ddg);
    f.ystar = std::move(ystar);
    return f;
}

namespace {

double a_star_pairing(const HilbertVector& x, const HilbertVector& ystar,
                      const SpectralBasis& basis) {
    // <x, A* y*> with A diagonal: sum mu_k x_k y*_k.
    double s = 0.0;
    const int n = std::min(x.size(), ystar.size());
    for (int k = 0; k < n; ++k) s += basis.mu[static_cast<std::size_t>(k)] * x[k] * ystar[k];
    return s;
}

}  // namespace

double eval_generator(const TestFunction& f, const HilbertVector& x, const CoefficientSet& coeffs,
                      const SpectralBasis& basis, const JumpMeasureSpec& jumps,
                      const TruncationSpec& h) {
    const double u = dot_b(x, f.ystar);
    const double du = f.dg(u);

    const HilbertVector mu = compensated_drift(coeffs, x, jumps, h.threshold);
    double value = (a_star_pairing(x, f.ystar, basis) + dot_b(mu, f.ystar)) * du;
    value += 0.5 * coeffs.sigma(x).quad_form(f.ystar) * f.ddg(u);

    if (!coeffs.jump_zero && jumps.active()) {
        for (const auto& [mark, weight] : jumps.mark_quadrature) {
            const HilbertVector v = coeffs.jump(mark, x);
            const double fv = f.g(u + dot_b(v, f.ystar));
            const double hv = dot_b(h.apply(v), f.ystar);
            value += weight * (fv - f.g(u) - hv * du);
        }
    }
    return value;
}

double eval_generator2(const TestFunction2& f, const HilbertVector& x,
                       const CoefficientSet& coeffs, const SpectralBasis& basis,
                       const JumpMeasureSpec& jumps, const TruncationSpec& h) {
    const double u1 = dot_b(x, f.y1);
    const double u2 = dot_b(x, f.y2);
    const HilbertVector mu = compensated_drift(coeffs, x, jumps, h.threshold);

    double value = (a_star_pairing(x, f.y1, basis) + dot_b(mu, f.y1)) * f.g1(u1, u2) +
                   (a_star_pairing(x, f.y2, basis) + dot_b(mu, f.y2)) * f.g2(u1, u2);

    const SigmaMatrix sig = coeffs.sigma(x);
    // <a y_i, y_j> via sigma^T columns.
    auto a_pair = [&](const HilbertVector& ya, const HilbertVector& yb) {
        double s = 0.0;
        for (int i = 0; i < sig.n_noise; ++i) {
            double ca = 0.0, cb = 0.0;
            for (int k = 0; k < sig.n_modes; ++k) {
                const double e = sig.entry(k, i);
                if (k < ya.size()) ca += e * ya[k];
                if (k < yb.size()) cb += e * yb[k];
            }
            s += ca * cb;
        }
        return s;
    };
    value += 0.5 * (a_pair(f.y1, f.y1) * f.g11(u1, u2) + 2.0 * a_pair(f.y1, f.y2) * f.g12(u1, u2) +
                    a_pair(f.y2, f.y2) * f.g22(u1, u2));

    if (!coeffs.jump_zero && jumps.active()) {
        for (const auto& [mark, weight] : jumps.mark_quadrature) {
            const HilbertVector v = coeffs.jump(mark, x);
            const HilbertVector hv = h.apply(v);
            value += weight * (f.g(u1 + dot_b(v, f.y1), u2 + dot_b(v, f.y2)) - f.g(u1, u2) -
                               dot_b(hv, f.y1) * f.g1(u1, u2) - dot_b(hv, f.y2) * f.g2(u1, u2));
        }
    }
    return value;
}

double mf_increment(const TestFunction& f, const SamplePath& path, int s_index, int t_index,
                    double m, PathNorm norm, const CoefficientSet& coeffs,
                    const SpectralBasis& basis, const JumpMeasureSpec& jumps,
                    const TruncationSpec& h) {
    if (s_index > t_index) throw std::invalid_argument("mf_increment: need s <= t");
    const int tau = tau_z_index(path, m, norm, basis);
    const int a = std::min(s_index, tau);
    const int b = std::min(t_index, tau);
    double value = f.eval(path.state(b)) - f.eval(path.state(a));
    double kf_sum = 0.0;
    for (int j = a; j < b; ++j)
        kf_sum += eval_generator(f, path.state_vec(j), coeffs, basis, jumps, h);
    return value - kf_sum * path.dt;
}

double generator_bound_scan(const TestFunction& f, double radius, int sample_count,
                            const CoefficientSet& coeffs, const SpectralBasis& basis,
                            const JumpMeasureSpec& jumps, const TruncationSpec& h,
                            std::uint64_t seed) {
    RandomStream stream(seed, 0);
    const int n = basis.n_modes;
    double bound = 0.0;
    for (int s = 0; s < sample_count; ++s) {
        HilbertVector x = HilbertVector::zero(n);
        double r2 = 0.0;
        for (int k = 0; k < n; ++k) {
            x[k] = stream.next_gaussian();
            r2 += x[k] * x[k];
        }
        const double r = radius * std::pow(stream.next_open01(), 1.0 / n) / std::sqrt(r2);
        for (int k = 0; k < n; ++k) x[k] *= r;
        bound = std::max(bound, std::abs(eval_generator(f, x, coeffs, basis, jumps, h)));
    }
    return bound;
}

}  // namespace sgmc
