// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <vector>

#include "doctest.h"
#include "sicperf/channel.hpp"
#include "sicperf/mmse_sic.hpp"

using namespace sicperf;

namespace {

system_config make_cfg(std::size_t n, std::size_t m, double kt = 0.0, double kr = 0.0,
                       double w = 0.0) {
    system_config cfg;
    cfg.n = n;
    cfg.m = m;
    cfg.p = 10.0;
    cfg.n0 = 1.0;
    cfg.kappa_t = kt;
    cfg.kappa_r = kr;
    cfg.omega = w;
    return cfg;
}

}  // namespace

TEST_CASE("scalar mmse filter is the Wiener weight") {
    // n = m = 1, H = [1]: g = 1 / (a + N0/p) with a = 1 when ideal.
    system_config cfg = make_cfg(1, 1);
    complex_matrix h(1, 1, {cplx(1, 0)});
    const auto g = mmse_filter(cfg, h, 0);
    CHECK(g[0].real() == doctest::Approx(1.0 / (1.0 + cfg.n0 / cfg.p)).epsilon(1e-12));
    CHECK(g[0].imag() == doctest::Approx(0.0));
}

TEST_CASE("mmse filter satisfies its normal equations") {
    gauss_stream rng(41);
    system_config cfg = make_cfg(4, 4, 0.08, 0.1, 0.1);
    const channel_realization real = sample_realization(cfg, rng);
    const double a = cfg.kappa_t * cfg.kappa_t * (cfg.omega + 1.0) + cfg.omega + 1.0;
    const double b = cfg.kappa_r * cfg.kappa_r * 4.0 + cfg.n0 / cfg.p;
    for (std::size_t j = 0; j < 4; ++j) {
        const auto g = mmse_filter(cfg, real.h_hat, j);
        // (a H H^H + b I) g = h_j
        complex_matrix hhh = multiply(real.h_hat, adjoint(real.h_hat));
        std::vector<cplx> lhs(4, cplx(0, 0));
        for (std::size_t i = 0; i < 4; ++i) {
            for (std::size_t k = 0; k < 4; ++k) lhs[i] += a * hhh(i, k) * g[k];
            lhs[i] += b * g[i];
        }
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(std::abs(lhs[i] - real.h_hat(i, j)) < 1e-9);
        }
    }
}

TEST_CASE("stream sindr direct vs woodbury") {
    gauss_stream rng(51);
    for (std::size_t n = 2; n <= 6; ++n) {
        for (std::size_t m = 1; m <= n; ++m) {
            system_config cfg = make_cfg(n, m, 0.08, 0.08, 0.1);
            for (int rep = 0; rep < 10; ++rep) {
                const channel_realization real = sample_realization(cfg, rng);
                for (std::size_t j = 0; j < m; ++j) {
                    const double d = mmse_stream_sindr_direct(cfg, real.h, j);
                    const double w = mmse_stream_sindr_woodbury(cfg, real.h, j);
                    CHECK(d == doctest::Approx(w).epsilon(1e-9));
                }
            }
        }
    }
}

TEST_CASE("beta lies strictly inside (0,1)") {
    gauss_stream rng(61);
    system_config cfg = make_cfg(4, 4, 0.05, 0.05, 0.05);
    for (int rep = 0; rep < 25; ++rep) {
        const channel_realization real = sample_realization(cfg, rng);
        for (std::size_t j = 0; j < 4; ++j) {
            const double b = mmse_beta(cfg, real.h, j);
            CHECK(b > 0.0);
            CHECK(b < 1.0);
        }
    }
}

TEST_CASE("sic profile stage m and ideal reductions") {
    gauss_stream rng(71);
    // Ideal stage m: p ||h_m||^2 / N0.
    system_config cfg = make_cfg(4, 3);
    const channel_realization real = sample_realization(cfg, rng);
    const sindr_profile prof = mmse_sindr_profile(cfg, real);
    double nh = 0.0;
    for (std::size_t i = 0; i < 4; ++i) nh += std::norm(real.h(i, 2));
    CHECK(prof.values[2] == doctest::Approx(cfg.p * nh / cfg.n0).epsilon(1e-10));

    // Ideal i < m equals classical MMSE SINR Phi of the deflated system.
    const double a = 1.0, b = cfg.n0 / cfg.p;
    for (std::size_t i = 1; i < 3; ++i) {
        // Deflated interferers: streams i..m-1 (0-based), target stream i-1.
        complex_matrix k(4, 3 - i);
        for (std::size_t c = 0; c < 3 - i; ++c) {
            for (std::size_t r = 0; r < 4; ++r) k(r, c) = real.h(r, i + c);
        }
        complex_matrix m2 = multiply(k, adjoint(k));
        for (std::size_t r = 0; r < 4; ++r) m2(r, r) += b / a;
        std::vector<cplx> hi(4);
        for (std::size_t r = 0; r < 4; ++r) hi[r] = real.h(r, i - 1);
        const auto x = solve_hpd(m2, hi);
        double phi = 0.0;
        for (std::size_t r = 0; r < 4; ++r) phi += (std::conj(hi[r]) * x[r]).real();
        CHECK(prof.values[i - 1] == doctest::Approx(phi).epsilon(1e-9));
    }

    // Direct pre-Woodbury form agrees on all stages in the impaired case.
    system_config imp = make_cfg(4, 3, 0.08, 0.08, 0.1);
    const channel_realization r2 = sample_realization(imp, rng);
    const sindr_profile p2 = mmse_sindr_profile(imp, r2);
    for (std::size_t stage = 1; stage < 3; ++stage) {
        CHECK(p2.values[stage - 1] ==
              doctest::Approx(mmse_sindr_direct(imp, r2, stage)).epsilon(1e-9));
    }
}

TEST_CASE("stage m scalar form") {
    // SINDR_m = y / (b + (a - 1) y) with y = ||h_m||^2 (normalized by p).
    system_config cfg = make_cfg(3, 2, 0.1, 0.08, 0.1);
    gauss_stream rng(81);
    const channel_realization real = sample_realization(cfg, rng);
    const sindr_profile prof = mmse_sindr_profile(cfg, real);
    double y = 0.0;
    for (std::size_t i = 0; i < 3; ++i) y += std::norm(real.h(i, 1));
    const double a = cfg.kappa_t * cfg.kappa_t * (cfg.omega + 1.0) + cfg.omega + 1.0;
    const double b = cfg.kappa_r * cfg.kappa_r * 2.0 + cfg.n0 / cfg.p;
    CHECK(prof.values[1] == doctest::Approx(y / (b + (a - 1.0) * y)).epsilon(1e-10));
}

TEST_CASE("mmse sic decode noiseless recovery") {
    system_config cfg = make_cfg(4, 4);
    const modulation_spec mod = bpsk();
    gauss_stream rng(91);
    const channel_realization real = sample_realization(cfg, rng);
    const double sp = std::sqrt(cfg.p);
    const std::vector<cplx> s{cplx(sp, 0), cplx(sp, 0), cplx(-sp, 0), cplx(sp, 0)};
    noise_flags off;
    off.transmit_distortion = false;
    off.receive_distortion = false;
    off.thermal = false;
    const auto y = sample_received(cfg, real, s, rng, off);
    const auto dec = mmse_sic_decode(cfg, y, real, mod);
    for (std::size_t j = 0; j < 4; ++j) CHECK(std::abs(dec[j] - s[j]) < 1e-9);
}
