// SPDX-License-Identifier: Apache-2.0

#include "sicperf/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace sicperf {

void system_config::validate() const {
    if (m < 1 || n < m) throw std::invalid_argument("system_config: requires n >= m >= 1");
    if (!(p > 0.0)) throw std::invalid_argument("system_config: requires p > 0");
    if (!(n0 > 0.0)) throw std::invalid_argument("system_config: requires n0 > 0");
    if (kappa_t < 0.0 || kappa_r < 0.0 || omega < 0.0) {
        throw std::invalid_argument("system_config: impairment parameters must be >= 0");
    }
}

double system_config::snr_db() const { return 10.0 * std::log10(p / n0); }

void modulation_spec::validate() const {
    if (points.size() != states || states < 2) {
        throw std::invalid_argument("modulation_spec: point count must equal states >= 2");
    }
    if (!(a_const > 0.0) || !(b_const > 0.0)) {
        throw std::invalid_argument("modulation_spec: constants must be > 0");
    }
    double energy = 0.0;
    for (const cplx& z : points) energy += std::norm(z);
    energy /= static_cast<double>(states);
    if (std::abs(energy - 1.0) > 1e-12) {
        throw std::invalid_argument("modulation_spec: average symbol energy must be 1");
    }
}

modulation_spec bpsk() {
    modulation_spec mod;
    mod.states = 2;
    mod.a_const = 1.0;
    mod.b_const = 1.0;
    mod.points = {cplx(1.0, 0.0), cplx(-1.0, 0.0)};
    return mod;
}

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

gauss_stream::gauss_stream(std::uint64_t seed) : state_(seed) {
    // Burn a few outputs so nearby seeds decorrelate.
    for (int i = 0; i < 4; ++i) splitmix64(state_);
}

gauss_stream gauss_stream::for_trial(std::uint64_t seed, std::uint64_t trial) {
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    std::uint64_t t = trial ^ 0x6a09e667f3bcc909ULL;
    std::uint64_t b = splitmix64(t);
    return gauss_stream(a ^ (b * 0x2545f4914f6cdd1dULL) ^ trial);
}

std::uint64_t gauss_stream::next_u64() { return splitmix64(state_); }

double gauss_stream::uniform() {
    // 53-bit mantissa in [0, 1).
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double gauss_stream::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    // Box-Muller; u1 is kept away from zero.
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
}

cplx gauss_stream::cnormal(double variance) {
    const double sd = std::sqrt(0.5 * variance);
    const double re = normal();
    const double im = normal();
    return cplx(sd * re, sd * im);
}

channel_realization sample_realization(const system_config& cfg, gauss_stream& rng) {
    cfg.validate();
    channel_realization out;
    out.h = complex_matrix(cfg.n, cfg.m);
    out.delta_h = complex_matrix(cfg.n, cfg.m);
    out.h_hat = complex_matrix(cfg.n, cfg.m);
    for (std::size_t i = 0; i < cfg.n; ++i) {
        for (std::size_t j = 0; j < cfg.m; ++j) {
            out.h(i, j) = rng.cnormal(1.0);
            out.delta_h(i, j) = (cfg.omega > 0.0) ? rng.cnormal(cfg.omega) : cplx(0.0, 0.0);
            out.h_hat(i, j) = out.h(i, j) + out.delta_h(i, j);
        }
    }
    return out;
}

std::vector<cplx> sample_received(const system_config& cfg, const channel_realization& real,
                                  const std::vector<cplx>& s, gauss_stream& rng) {
    return sample_received(cfg, real, s, rng, noise_flags{});
}

std::vector<cplx> sample_received(const system_config& cfg, const channel_realization& real,
                                  const std::vector<cplx>& s, gauss_stream& rng,
                                  const noise_flags& flags) {
    cfg.validate();
    if (s.size() != cfg.m || real.h.rows() != cfg.n || real.h.cols() != cfg.m) {
        throw std::invalid_argument("sample_received: dimension mismatch");
    }
    std::vector<cplx> tx(s);
    if (flags.transmit_distortion && cfg.kappa_t > 0.0) {
        const double var_t = cfg.p * cfg.kappa_t * cfg.kappa_t;
        for (std::size_t j = 0; j < cfg.m; ++j) tx[j] += rng.cnormal(var_t);
    }
    std::vector<cplx> y = matvec(real.h, tx);
    const double var_r = cfg.p * cfg.kappa_r * cfg.kappa_r * static_cast<double>(cfg.m);
    for (std::size_t i = 0; i < cfg.n; ++i) {
        if (flags.receive_distortion && var_r > 0.0) y[i] += rng.cnormal(var_r);
        if (flags.thermal) y[i] += rng.cnormal(cfg.n0);
    }
    return y;
}

std::vector<cplx> sample_symbols(const system_config& cfg, const modulation_spec& mod,
                                 gauss_stream& rng) {
    const double scale = std::sqrt(cfg.p);
    std::vector<cplx> s(cfg.m);
    for (std::size_t j = 0; j < cfg.m; ++j) {
        const std::uint64_t idx = rng.next_u64() % mod.states;
        s[j] = scale * mod.points[idx];
    }
    return s;
}

}  // namespace sicperf
