#include "sgmc/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sgmc/numerics.hpp"

namespace sgmc {

SigmaMatrix SigmaMatrix::diagonal(std::vector<double> d) {
    SigmaMatrix s;
    s.is_diagonal = true;
    s.n_modes = s.n_noise = static_cast<int>(d.size());
    s.diag = std::move(d);
    return s;
}

SigmaMatrix SigmaMatrix::dense_matrix(int n_modes, int n_noise, std::vector<double> entries) {
    if (entries.size() != static_cast<std::size_t>(n_modes) * static_cast<std::size_t>(n_noise))
        throw std::invalid_argument("SigmaMatrix: entry count mismatch");
    SigmaMatrix s;
    s.is_diagonal = false;
    s.n_modes = n_modes;
    s.n_noise = n_noise;
    s.dense = std::move(entries);
    return s;
}

SigmaMatrix SigmaMatrix::zeros(int n_modes) {
    return diagonal(std::vector<double>(static_cast<std::size_t>(n_modes), 0.0));
}

double SigmaMatrix::entry(int mode, int noise) const {
    if (is_diagonal) return mode == noise ? diag[static_cast<std::size_t>(mode)] : 0.0;
    return dense[static_cast<std::size_t>(mode) * n_noise + noise];
}

void SigmaMatrix::apply_add(std::span<const double> w, std::span<double> out) const {
    if (is_diagonal) {
        for (int k = 0; k < n_modes; ++k) out[k] += diag[static_cast<std::size_t>(k)] * w[k];
        return;
    }
    for (int k = 0; k < n_modes; ++k) {
        double s = 0.0;
        const double* row = dense.data() + static_cast<std::size_t>(k) * n_noise;
        for (int i = 0; i < n_noise; ++i) s += row[i] * w[i];
        out[k] += s;
    }
}

double SigmaMatrix::quad_form(const HilbertVector& ystar) const {
    // |sigma^T y|^2 over noise coordinates.
    double total = 0.0;
    if (is_diagonal) {
        const int n = std::min<int>(n_modes, ystar.size());
        for (int k = 0; k < n; ++k) {
            const double t = diag[static_cast<std::size_t>(k)] * ystar[k];
            total += t * t;
        }
        return total;
    }
    for (int i = 0; i < n_noise; ++i) {
        double col = 0.0;
        for (int k = 0; k < std::min<int>(n_modes, ystar.size()); ++k)
            col += dense[static_cast<std::size_t>(k) * n_noise + i] * ystar[k];
        total += col * col;
    }
    return total;
}

double SigmaMatrix::hs_norm_k(const SpectralBasis& basis) const {
    double s = 0.0;
    for (int k = 0; k < n_modes; ++k) {
        const double lk = basis.lambda[static_cast<std::size_t>(k)];
        if (is_diagonal) {
            const double t = diag[static_cast<std::size_t>(k)] / lk;
            s += t * t;
        } else {
            for (int i = 0; i < n_noise; ++i) {
                const double t = dense[static_cast<std::size_t>(k) * n_noise + i] / lk;
                s += t * t;
            }
        }
    }
    return std::sqrt(s);
}

namespace {

SigmaMatrix to_dense(const SigmaMatrix& a) {
    if (!a.is_diagonal) return a;
    std::vector<double> e(static_cast<std::size_t>(a.n_modes) * a.n_noise, 0.0);
    for (int k = 0; k < a.n_modes; ++k)
        e[static_cast<std::size_t>(k) * a.n_noise + k] = a.diag[static_cast<std::size_t>(k)];
    return SigmaMatrix::dense_matrix(a.n_modes, a.n_noise, std::move(e));
}

}  // namespace

SigmaMatrix operator+(const SigmaMatrix& a, const SigmaMatrix& b) {
    if (a.n_modes != b.n_modes) throw std::invalid_argument("SigmaMatrix: shape mismatch");
    if (a.is_diagonal && b.is_diagonal) {
        std::vector<double> d = a.diag;
        for (std::size_t i = 0; i < d.size(); ++i) d[i] += b.diag[i];
        return SigmaMatrix::diagonal(std::move(d));
    }
    SigmaMatrix da = to_dense(a), db = to_dense(b);
    if (da.n_noise != db.n_noise) throw std::invalid_argument("SigmaMatrix: noise dim mismatch");
    for (std::size_t i = 0; i < da.dense.size(); ++i) da.dense[i] += db.dense[i];
    return da;
}

SigmaMatrix operator-(const SigmaMatrix& a, const SigmaMatrix& b) { return a + (-1.0) * b; }

SigmaMatrix operator*(double s, const SigmaMatrix& a) {
    SigmaMatrix out = a;
    for (double& v : out.diag) v *= s;
    for (double& v : out.dense) v *= s;
    return out;
}

double sigma_op_norm_b(const SigmaMatrix& a) {
    if (a.is_diagonal) {
        double m = 0.0;
        for (double d : a.diag) m = std::max(m, std::abs(d));
        return m;
    }
    // Power iteration on sigma sigma^T with a fixed starting vector.
    std::vector<double> v(static_cast<std::size_t>(a.n_modes));
    for (int k = 0; k < a.n_modes; ++k) v[static_cast<std::size_t>(k)] = 1.0 / (k + 1.0);
    double norm = 0.0;
    for (int iter = 0; iter < 300; ++iter) {
        // w = sigma^T v, u = sigma w
        std::vector<double> w(static_cast<std::size_t>(a.n_noise), 0.0);
        for (int k = 0; k < a.n_modes; ++k)
            for (int i = 0; i < a.n_noise; ++i)
                w[static_cast<std::size_t>(i)] +=
                    a.dense[static_cast<std::size_t>(k) * a.n_noise + i] * v[static_cast<std::size_t>(k)];
        std::vector<double> u(static_cast<std::size_t>(a.n_modes), 0.0);
        for (int k = 0; k < a.n_modes; ++k) {
            const double* row = a.dense.data() + static_cast<std::size_t>(k) * a.n_noise;
            double s = 0.0;
            for (int i = 0; i < a.n_noise; ++i) s += row[i] * w[static_cast<std::size_t>(i)];
            u[static_cast<std::size_t>(k)] = s;
        }
        double un = 0.0;
        for (double x : u) un += x * x;
        un = std::sqrt(un);
        if (un == 0.0) return 0.0;
        const double next = std::sqrt(un);
        for (std::size_t i = 0; i < u.size(); ++i) v[i] = u[i] / un;
        if (std::abs(next - norm) <= 1e-13 * std::max(1.0, next)) return next;
        norm = next;
    }
    return norm;
}

namespace {

double nemytskii_hk_bound(const SpectralBasis& basis) {
    // sum over modes of (envelope_k / lambda_k)^2 with envelope lambda_k / k.
    double s = 0.0;
    for (int k = 1; k <= basis.n_modes; ++k) s += 1.0 / (static_cast<double>(k) * k);
    return std::sqrt(s);
}

}  // namespace

CoefficientSet CoefficientSet::catalog(const SpectralBasis& basis, const std::string& drift_name,
                                       double drift_param, const std::string& sigma_name,
                                       double sigma_param, const std::string& jump_name,
                                       double jump_param) {
    CoefficientSet set;
    set.name = drift_name + "/" + sigma_name + "/" + jump_name;
    const int n = basis.n_modes;
    double drift_l = 0.0;

    if (drift_name == "zero") {
        set.drift = [n](const HilbertVector&) { return HilbertVector::zero(n); };
        set.drift_zero = true;
    } else if (drift_name == "constant") {
        const HilbertVector c = HilbertVector::mode(1, drift_param, n);
        set.drift = [c](const HilbertVector&) { return c; };
        drift_l = std::abs(drift_param) / basis.lambda[0];
    } else if (drift_name == "linear") {
        const double rate = drift_param;
        set.drift = [rate, n](const HilbertVector& x) {
            HilbertVector out = HilbertVector::zero(n);
            for (int i = 0; i < std::min(n, x.size()); ++i) out[i] = rate * x[i];
            return out;
        };
        drift_l = std::abs(drift_param);
    } else if (drift_name == "bounded-nemytskii") {
        const double amp = drift_param;
        std::vector<double> env(static_cast<std::size_t>(n));
        for (int k = 1; k <= n; ++k)
            env[static_cast<std::size_t>(k - 1)] = basis.lambda[static_cast<std::size_t>(k - 1)] / k;
        set.drift = [amp, env, n](const HilbertVector& x) {
            HilbertVector out = HilbertVector::zero(n);
            for (int i = 0; i < n; ++i) {
                const double c = i < x.size() ? x[i] : 0.0;
                out[i] = amp * env[static_cast<std::size_t>(i)] * std::tanh(c);
            }
            return out;
        };
        drift_l = std::abs(amp) * nemytskii_hk_bound(basis);
    } else if (drift_name == "heat-drift") {
        const double amp = drift_param;
        set.drift = [amp, n](const HilbertVector& x) {
            const double c1 = x.size() > 0 ? x[0] : 0.0;
            return HilbertVector::mode(1, amp * std::tanh(c1), n);
        };
        drift_l = std::abs(amp) / basis.lambda[0];
    } else {
        throw std::invalid_argument("unknown drift preset: " + drift_name);
    }

    SigmaMatrix sig;
    if (sigma_name == "zero") {
        sig = SigmaMatrix::zeros(n);
    } else if (sigma_name == "identity") {
        sig = SigmaMatrix::diagonal(std::vector<double>(static_cast<std::size_t>(n), 1.0));
    } else if (sigma_name == "scalar") {
        sig = SigmaMatrix::diagonal(std::vector<double>(static_cast<std::size_t>(n), sigma_param));
    } else if (sigma_name == "diagonal-decay") {
        std::vector<double> d(static_cast<std::size_t>(n));
        for (int k = 1; k <= n; ++k) d[static_cast<std::size_t>(k - 1)] = sigma_param / k;
        sig = SigmaMatrix::diagonal(std::move(d));
    } else if (sigma_name == "mode1") {
        std::vector<double> d(static_cast<std::size_t>(n), 0.0);
        d[0] = sigma_param;
        sig = SigmaMatrix::diagonal(std::move(d));
    } else {
        throw std::invalid_argument("unknown sigma preset: " + sigma_name);
    }
    const double sigma_hs = sig.hs_norm_k(basis);
    set.sigma = [sig](const HilbertVector&) { return sig; };
    set.sigma_state_dependent = false;

    if (jump_name == "none") {
        set.jump = [n](const Mark&, const HilbertVector&) { return HilbertVector::zero(n); };
        set.jump_zero = true;
        set.growth.gamma = [](const Mark&) { return 0.0; };
        set.growth.zeta = [](double, const Mark&) { return 0.0; };
    } else if (jump_name == "constant-mode") {
        const double amp = jump_param;
        set.jump = [amp, n](const Mark&, const HilbertVector&) {
            return HilbertVector::mode(1, amp, n);
        };
        const double gk = std::abs(amp) / basis.lambda[0];
        set.growth.gamma = [gk](const Mark&) { return gk; };
        set.growth.zeta = [amp](double, const Mark&) { return std::abs(amp); };
    } else if (jump_name == "linear-mark") {
        const double amp = jump_param;
        set.jump = [amp, n](const Mark& y, const HilbertVector&) {
            return HilbertVector::mode(1, amp * y[0], n);
        };
        const double l1 = basis.lambda[0];
        set.growth.gamma = [amp, l1](const Mark& y) { return std::abs(amp * y[0]) / l1; };
        set.growth.zeta = [amp](double, const Mark& y) { return std::abs(amp * y[0]); };
    } else if (jump_name == "bounded-nemytskii") {
        const double amp = jump_param;
        std::vector<double> env(static_cast<std::size_t>(n));
        for (int k = 1; k <= n; ++k)
            env[static_cast<std::size_t>(k - 1)] = basis.lambda[static_cast<std::size_t>(k - 1)] / k;
        set.jump = [amp, env, n](const Mark& y, const HilbertVector& x) {
            const double g = std::abs(y[0]);
            HilbertVector out = HilbertVector::zero(n);
            for (int i = 0; i < n; ++i) {
                const double c = i < x.size() ? x[i] : 0.0;
                out[i] = amp * g * env[static_cast<std::size_t>(i)] * std::tanh(c);
            }
            return out;
        };
        const double envb = nemytskii_hk_bound(basis);
        const double amp_abs = std::abs(amp);
        set.growth.gamma = [amp_abs, envb](const Mark& y) { return amp_abs * envb * std::abs(y[0]); };
        const double lmax = basis.lambda_max;
        set.growth.zeta = [amp_abs, envb, lmax](double, const Mark& y) {
            return amp_abs * envb * lmax * std::abs(y[0]);
        };
    } else {
        throw std::invalid_argument("unknown jump preset: " + jump_name);
    }

    set.growth.L = drift_l + sigma_hs;
    return set;
}

double epsilon_n(int n, const SpectralBasis& basis) {
    if (n < 1 || n > basis.n_modes)
        throw std::invalid_argument("epsilon_n: need 1 <= n <= n_modes");
    double min_lambda = basis.lambda[0];
    for (int k = 1; k < n; ++k)
        min_lambda = std::min(min_lambda, basis.lambda[static_cast<std::size_t>(k)]);
    return min_lambda / n;
}

std::vector<double> project_theta(const HilbertVector& x, int n) {
    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < std::min(n, x.size()); ++i) out[static_cast<std::size_t>(i)] = x[i];
    return out;
}

namespace {

double mollifier_density(std::span<const double> u) {
    double r2 = 0.0;
    for (double c : u) r2 += c * c;
    if (r2 >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - r2));
}

}  // namespace

BallQuadrature BallQuadrature::product_rule(int dim, int per_axis) {
    if (dim < 1) throw std::invalid_argument("BallQuadrature: dim must be >= 1");
    GaussRule axis = gauss_legendre(per_axis);
    BallQuadrature q;
    q.dim = dim;
    std::vector<int> idx(static_cast<std::size_t>(dim), 0);
    std::vector<double> node(static_cast<std::size_t>(dim));
    double total = 0.0;
    for (;;) {
        double w = 1.0;
        for (int d = 0; d < dim; ++d) {
            node[static_cast<std::size_t>(d)] = axis.nodes[static_cast<std::size_t>(idx[static_cast<std::size_t>(d)])];
            w *= axis.weights[static_cast<std::size_t>(idx[static_cast<std::size_t>(d)])];
        }
        const double density = mollifier_density(node);
        if (density > 0.0) {
            q.nodes.insert(q.nodes.end(), node.begin(), node.end());
            q.weights.push_back(w * density);
            total += w * density;
        }
        int d = 0;
        while (d < dim && ++idx[static_cast<std::size_t>(d)] == per_axis) {
            idx[static_cast<std::size_t>(d)] = 0;
            ++d;
        }
        if (d == dim) break;
    }
    for (double& w : q.weights) w /= total;
    return q;
}

BallQuadrature BallQuadrature::monte_carlo(int dim, int count, std::uint64_t seed) {
    BallQuadrature q;
    q.dim = dim;
    RandomStream stream(seed, 0);
    std::vector<double> node(static_cast<std::size_t>(dim));
    double total = 0.0;
    // Antithetic pairs keep odd moments exactly zero.
    for (int j = 0; j < (count + 1) / 2; ++j) {
        double r2;
        do {
            r2 = 0.0;
            for (int d = 0; d < dim; ++d) {
                node[static_cast<std::size_t>(d)] = 2.0 * stream.next_open01() - 1.0;
                r2 += node[static_cast<std::size_t>(d)] * node[static_cast<std::size_t>(d)];
            }
        } while (r2 >= 1.0);
        const double density = mollifier_density(node);
        q.nodes.insert(q.nodes.end(), node.begin(), node.end());
        q.weights.push_back(density);
        for (double& c : node) c = -c;
        q.nodes.insert(q.nodes.end(), node.begin(), node.end());
        q.weights.push_back(density);
        total += 2.0 * density;
    }
    for (double& w : q.weights) w /= total;
    return q;
}

BallQuadrature BallQuadrature::standard(int dim) {
    static const int per_axis[] = {0, 33, 15, 9, 7, 5, 5, 3, 3};
    if (dim <= kProductDimCap) return product_rule(dim, per_axis[dim]);
    return monte_carlo(dim, 4096, 0x5eedULL);
}

namespace {

// Evaluation argument of the mollified coefficient: the projection of x onto
// the first n modes, shifted by eps_n * u in basis coefficients.
HilbertVector mollify_arg(const HilbertVector& x, std::span<const double> u, double eps,
                          int n) {
    HilbertVector arg = HilbertVector::zero(n);
    const int nx = std::min(n, x.size());
    for (int i = 0; i < nx; ++i) arg[i] = x[i];
    for (int i = 0; i < n; ++i) arg[i] += eps * u[i];
    return arg;
}

void require_dim(const BallQuadrature& quad, int n) {
    if (quad.dim != n)
        throw std::invalid_argument("mollify: quadrature dimension does not match n");
}

}  // namespace

HilbertVector mollify_drift(const CoefficientSet& coeff, int n, const SpectralBasis& basis,
                            const BallQuadrature& quad, const HilbertVector& x) {
    require_dim(quad, n);
    const double eps = epsilon_n(n, basis);
    HilbertVector acc;
    for (int j = 0; j < quad.count(); ++j) {
        HilbertVector val = coeff.drift(mollify_arg(x, quad.node(j), eps, n));
        if (j == 0)
            acc = quad.weights[static_cast<std::size_t>(j)] * val;
        else
            acc = acc + quad.weights[static_cast<std::size_t>(j)] * val;
    }
    return acc;
}

SigmaMatrix mollify_sigma(const CoefficientSet& coeff, int n, const SpectralBasis& basis,
                          const BallQuadrature& quad, const HilbertVector& x) {
    require_dim(quad, n);
    const double eps = epsilon_n(n, basis);
    SigmaMatrix acc;
    for (int j = 0; j < quad.count(); ++j) {
        SigmaMatrix val = coeff.sigma(mollify_arg(x, quad.node(j), eps, n));
        if (j == 0)
            acc = quad.weights[static_cast<std::size_t>(j)] * val;
        else
            acc = acc + quad.weights[static_cast<std::size_t>(j)] * val;
    }
    return acc;
}

HilbertVector mollify_jump(const CoefficientSet& coeff, int n, const SpectralBasis& basis,
                           const BallQuadrature& quad, const Mark& mark, const HilbertVector& x) {
    require_dim(quad, n);
    const double eps = epsilon_n(n, basis);
    HilbertVector acc;
    for (int j = 0; j < quad.count(); ++j) {
        HilbertVector val = coeff.jump(mark, mollify_arg(x, quad.node(j), eps, n));
        if (j == 0)
            acc = quad.weights[static_cast<std::size_t>(j)] * val;
        else
            acc = acc + quad.weights[static_cast<std::size_t>(j)] * val;
    }
    return acc;
}

CoefficientSet mollified(const CoefficientSet& base, int n, const SpectralBasis& basis) {
    return mollified(base, n, basis, BallQuadrature::standard(n));
}

CoefficientSet mollified(const CoefficientSet& base, int n, const SpectralBasis& basis,
                         const BallQuadrature& quad) {
    require_dim(quad, n);
    CoefficientSet out = base;
    out.name = base.name + "/molly" + std::to_string(n);
    if (!base.drift_zero)
        out.drift = [base, n, basis, quad](const HilbertVector& x) {
            return mollify_drift(base, n, basis, quad, x);
        };
    if (base.sigma_state_dependent)
        out.sigma = [base, n, basis, quad](const HilbertVector& x) {
            return mollify_sigma(base, n, basis, quad, x);
        };
    if (!base.jump_zero)
        out.jump = [base, n, basis, quad](const Mark& y, const HilbertVector& x) {
            return mollify_jump(base, n, basis, quad, y, x);
        };
    return out;
}

HilbertVector truncate_arg(const HilbertVector& x, double m, const SpectralBasis& basis) {
    const double nk = norm_k(x, basis);
    if (nk <= m) return x;
    return (m / nk) * x;
}

CoefficientSet truncated(const CoefficientSet& base, double m, const SpectralBasis& basis) {
    CoefficientSet out = base;
    out.name = base.name + "/trunc";
    if (!base.drift_zero)
        out.drift = [base, m, basis](const HilbertVector& x) {
            return base.drift(truncate_arg(x, m, basis));
        };
    if (base.sigma_state_dependent)
        out.sigma = [base, m, basis](const HilbertVector& x) {
            return base.sigma(truncate_arg(x, m, basis));
        };
    if (!base.jump_zero)
        out.jump = [base, m, basis](const Mark& y, const HilbertVector& x) {
            return base.jump(y, truncate_arg(x, m, basis));
        };
    return out;
}

HilbertVector jump_compensator(const CoefficientSet& coeff, const HilbertVector& x,
                               const JumpMeasureSpec& jumps) {
    HilbertVector acc = HilbertVector::zero(x.size());
    if (coeff.jump_zero || !jumps.active()) return acc;
    for (const auto& [mark, weight] : jumps.mark_quadrature)
        acc = acc + weight * coeff.jump(mark, x);
    return acc;
}

HilbertVector compensated_drift(const CoefficientSet& coeff, const HilbertVector& x,
                                const JumpMeasureSpec& jumps, double h_threshold) {
    HilbertVector mu = coeff.drift(x);
    if (coeff.jump_zero || !jumps.active()) return mu;
    for (const auto& [mark, weight] : jumps.mark_quadrature) {
        HilbertVector v = coeff.jump(mark, x);
        if (norm_b(v) > h_threshold) mu = mu - weight * v;  // h(v) = 0 above the threshold
    }
    return mu;
}

GrowthAudit audit_growth(const CoefficientSet& coeff, const SpectralBasis& basis,
                         const JumpMeasureSpec& jumps, int samples, double radius,
                         std::uint64_t seed) {
    GrowthAudit audit;
    RandomStream stream(seed, 0);
    const int n = basis.n_modes;
    for (int s = 0; s < samples; ++s) {
        HilbertVector x = HilbertVector::zero(n);
        for (int k = 0; k < n; ++k)
            x[k] = radius * basis.lambda[static_cast<std::size_t>(k)] * stream.next_gaussian();
        const double nk = norm_k(x, basis);
        const double lg = norm_k(coeff.drift(x), basis) + coeff.sigma(x).hs_norm_k(basis);
        audit.worst_lg_excess =
            std::max(audit.worst_lg_excess, lg - coeff.growth.L * (1.0 + nk));
        if (!coeff.jump_zero && jumps.active()) {
            const Mark y = jumps.mark_sampler(stream);
            const double vg = norm_k(coeff.jump(y, x), basis);
            audit.worst_gamma_excess =
                std::max(audit.worst_gamma_excess, vg - coeff.growth.gamma(y) * (1.0 + nk));
        }
    }
    return audit;
}

std::vector<ConvergenceRow> convergence_scan(const CoefficientSet& coeff,
                                             const std::vector<int>& n_list,
                                             const std::vector<HilbertVector>& grid,
                                             const std::vector<Mark>& marks,
                                             const SpectralBasis& basis) {
    if (grid.empty()) throw std::invalid_argument("convergence_scan: grid must be non-empty");
    std::vector<ConvergenceRow> rows;
    for (int n : n_list) {
        const BallQuadrature quad = BallQuadrature::standard(n);
        ConvergenceRow row;
        row.n = n;
        for (const HilbertVector& x : grid) {
            row.dist_b =
                std::max(row.dist_b, norm_b(mollify_drift(coeff, n, basis, quad, x) - coeff.drift(x)));
            row.dist_sigma = std::max(
                row.dist_sigma,
                sigma_op_norm_b(mollify_sigma(coeff, n, basis, quad, x) - coeff.sigma(x)));
            for (const Mark& y : marks)
                row.dist_v = std::max(
                    row.dist_v, norm_b(mollify_jump(coeff, n, basis, quad, y, x) - coeff.jump(y, x)));
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace sgmc
