#include "sgmc/noise.hpp"

#include <cmath>
#include <stdexcept>

#include "sgmc/numerics.hpp"

namespace sgmc {

namespace {

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

}  // namespace

std::array<std::uint32_t, 4> philox4x32(const std::array<std::uint32_t, 4>& counter,
                                        const std::array<std::uint32_t, 2>& key) {
    std::array<std::uint32_t, 4> c = counter;
    std::array<std::uint32_t, 2> k = key;
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kPhiloxM0, c[0], hi0, lo0);
        mulhilo(kPhiloxM1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
        k[0] += kWeyl0;
        k[1] += kWeyl1;
    }
    return c;
}

std::uint32_t RandomStream::next_u32() {
    if (block_pos_ >= 4) {
        const std::array<std::uint32_t, 4> ctr = {
            static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32),
            static_cast<std::uint32_t>(path_), static_cast<std::uint32_t>(path_ >> 32)};
        const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed_),
                                                  static_cast<std::uint32_t>(seed_ >> 32)};
        block_ = philox4x32(ctr, key);
        block_pos_ = 0;
        ++counter_;
    }
    return block_[static_cast<std::size_t>(block_pos_++)];
}

std::uint64_t RandomStream::next_u64() {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return (hi << 32) | lo;
}

double RandomStream::next_open01() {
    // (k + 0.5) * 2^-53 for k in [0, 2^53): strictly inside (0, 1).
    const std::uint64_t k = next_u64() >> 11;
    return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
}

double RandomStream::next_gaussian() {
    if (has_cached_gaussian_) {
        has_cached_gaussian_ = false;
        return cached_gaussian_;
    }
    const double u1 = next_open01();
    const double u2 = next_open01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    cached_gaussian_ = r * std::sin(a);
    has_cached_gaussian_ = true;
    return r * std::cos(a);
}

double RandomStream::next_exponential() { return -std::log(next_open01()); }

std::vector<double> bm_increments(double dt, int n_noise, RandomStream& stream) {
    if (!(dt > 0.0)) throw std::invalid_argument("bm_increments: dt must be > 0");
    std::vector<double> out(static_cast<std::size_t>(n_noise));
    const double scale = std::sqrt(dt);
    for (double& v : out) v = scale * stream.next_gaussian();
    return out;
}

void JumpMeasureSpec::validate() const {
    if (total_mass < 0.0) throw std::invalid_argument("JumpMeasureSpec: negative total mass");
    if (total_mass == 0.0) return;
    double w = 0.0;
    for (const auto& [mark, weight] : mark_quadrature) w += weight;
    if (std::abs(w - total_mass) > 1e-12 * std::max(1.0, total_mass))
        throw std::invalid_argument("JumpMeasureSpec: quadrature weights must sum to the total mass");
}

JumpMeasureSpec JumpMeasureSpec::preset(const std::string& name, double total_mass, double param) {
    JumpMeasureSpec spec;
    if (name == "none") {
        spec.total_mass = 0.0;
        spec.gamma_eval = [](const Mark&) { return 0.0; };
        return spec;
    }
    spec.total_mass = total_mass;
    if (name == "single-atom") {
        const Mark atom = {param};
        spec.mark_sampler = [atom](RandomStream&) { return atom; };
        spec.mark_quadrature = {{atom, total_mass}};
        spec.gamma_eval = [](const Mark& y) { return std::abs(y[0]); };
    } else if (name == "compound-gaussian-marks") {
        const double sd = param;
        spec.mark_sampler = [sd](RandomStream& s) { return Mark{sd * s.next_gaussian()}; };
        // Deterministic quadrature against the normal mark density on
        // [-8 sd, 8 sd]; weights renormalized so they sum exactly to the mass.
        const int n = 64;
        GaussRule rule = gauss_legendre(n, -8.0 * sd, 8.0 * sd);
        double norm = 0.0;
        std::vector<double> dens(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            const double z = rule.nodes[static_cast<std::size_t>(i)] / sd;
            dens[static_cast<std::size_t>(i)] =
                rule.weights[static_cast<std::size_t>(i)] * std::exp(-0.5 * z * z);
            norm += dens[static_cast<std::size_t>(i)];
        }
        for (int i = 0; i < n; ++i)
            spec.mark_quadrature.push_back(
                {Mark{rule.nodes[static_cast<std::size_t>(i)]},
                 total_mass * dens[static_cast<std::size_t>(i)] / norm});
        spec.gamma_eval = [](const Mark& y) { return std::abs(y[0]); };
    } else {
        throw std::invalid_argument("unknown jump spec preset: " + name);
    }
    spec.validate();
    return spec;
}

std::vector<JumpEvent> poisson_events(double t0, double t1, const JumpMeasureSpec& spec,
                                      RandomStream& stream) {
    if (!(t0 < t1)) throw std::invalid_argument("poisson_events: need t0 < t1");
    std::vector<JumpEvent> events;
    if (!spec.active()) return events;
    double t = t0;
    for (;;) {
        t += stream.next_exponential() / spec.total_mass;
        if (t > t1) break;
        events.push_back({t, spec.mark_sampler(stream)});
    }
    return events;
}

}  // namespace sgmc
