// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <vector>

#include "doctest.h"
#include "sicperf/channel.hpp"

using namespace sicperf;

TEST_CASE("system_config validation") {
    system_config cfg;
    cfg.n = 4;
    cfg.m = 4;
    CHECK_NOTHROW(cfg.validate());
    cfg.m = 5;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.m = 4;
    cfg.p = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.p = 1.0;
    cfg.kappa_t = -0.1;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("bpsk modulation") {
    const modulation_spec mod = bpsk();
    CHECK(mod.states == 2);
    CHECK(mod.a_const == doctest::Approx(1.0));
    CHECK(mod.b_const == doctest::Approx(1.0));
    CHECK_NOTHROW(mod.validate());
    modulation_spec bad = mod;
    bad.points[0] = cplx(2.0, 0.0);
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("gauss_stream determinism and range") {
    gauss_stream a(42), b(42);
    for (int i = 0; i < 100; ++i) {
        CHECK(a.next_u64() == b.next_u64());
    }
    gauss_stream c = gauss_stream::for_trial(7, 123);
    gauss_stream d = gauss_stream::for_trial(7, 123);
    gauss_stream e = gauss_stream::for_trial(7, 124);
    bool differs = false;
    for (int i = 0; i < 16; ++i) {
        const double x = c.uniform();
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
        CHECK(x == d.uniform());
        if (x != e.uniform()) differs = true;
    }
    CHECK(differs);
}

TEST_CASE("sample_realization moments") {
    system_config cfg;
    cfg.n = 2;
    cfg.m = 2;
    cfg.omega = 0.1;

    gauss_stream rng(2024);
    const std::size_t draws = 100000;
    double hvar = 0.0, dvar = 0.0, cross = 0.0;
    for (std::size_t t = 0; t < draws; ++t) {
        const channel_realization real = sample_realization(cfg, rng);
        hvar += std::norm(real.h(0, 0));
        dvar += std::norm(real.delta_h(0, 0));
        cross += (real.h(0, 0) * std::conj(real.delta_h(0, 0))).real();
        // h_hat = h + delta_h (up to one rounding of the sum).
        CHECK(std::abs(real.h_hat(1, 1) - (real.h(1, 1) + real.delta_h(1, 1))) == 0.0);
    }
    CHECK(hvar / draws == doctest::Approx(1.0).epsilon(0.02));
    CHECK(dvar / draws == doctest::Approx(0.1).epsilon(0.05));
    CHECK(std::abs(cross / draws) < 0.01);
}

TEST_CASE("omega zero gives exact estimate") {
    system_config cfg;
    cfg.n = 3;
    cfg.m = 2;
    cfg.omega = 0.0;
    gauss_stream rng(1);
    const channel_realization real = sample_realization(cfg, rng);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            CHECK(real.delta_h(i, j) == cplx(0.0, 0.0));
            CHECK(real.h_hat(i, j) == real.h(i, j));
        }
    }
}

TEST_CASE("sample_received ideal noiseless reduction") {
    system_config cfg;
    cfg.n = 3;
    cfg.m = 2;
    cfg.p = 4.0;
    gauss_stream rng(5);
    const channel_realization real = sample_realization(cfg, rng);
    const std::vector<cplx> s{cplx(2.0, 0.0), cplx(-2.0, 0.0)};
    noise_flags off;
    off.transmit_distortion = false;
    off.receive_distortion = false;
    off.thermal = false;
    const auto y = sample_received(cfg, real, s, rng, off);
    for (std::size_t i = 0; i < 3; ++i) {
        cplx hs(0.0, 0.0);
        for (std::size_t j = 0; j < 2; ++j) hs += real.h(i, j) * s[j];
        CHECK(std::abs(y[i] - hs) < 1e-14);
    }
    CHECK_THROWS_AS(sample_received(cfg, real, {cplx(1.0, 0.0)}, rng), std::invalid_argument);
}

TEST_CASE("sample_received noise covariance") {
    system_config cfg;
    cfg.n = 2;
    cfg.m = 2;
    cfg.p = 10.0;
    cfg.n0 = 1.0;
    cfg.kappa_r = 0.1;
    gauss_stream rng(77);
    const channel_realization real = sample_realization(cfg, rng);
    const std::vector<cplx> zero{cplx(0, 0), cplx(0, 0)};
    const double expected = cfg.p * cfg.kappa_r * cfg.kappa_r * 2.0 + cfg.n0;
    double acc = 0.0;
    const std::size_t draws = 100000;
    for (std::size_t t = 0; t < draws; ++t) {
        const auto y = sample_received(cfg, real, zero, rng);
        acc += std::norm(y[0]);
    }
    CHECK(acc / draws == doctest::Approx(expected).epsilon(0.03));
}

TEST_CASE("received power bookkeeping single stream") {
    // H = e1 basis column, m = 1: power on antenna 1 is p(1+kt^2)+p kr^2+N0.
    system_config cfg;
    cfg.n = 2;
    cfg.m = 1;
    cfg.p = 10.0;
    cfg.n0 = 1.0;
    cfg.kappa_t = 0.1;
    cfg.kappa_r = 0.08;
    channel_realization real;
    real.h = complex_matrix(2, 1, {cplx(1, 0), cplx(0, 0)});
    real.delta_h = complex_matrix(2, 1, {cplx(0, 0), cplx(0, 0)});
    real.h_hat = real.h;
    gauss_stream rng(31);
    const modulation_spec mod = bpsk();
    double acc = 0.0;
    const std::size_t draws = 100000;
    for (std::size_t t = 0; t < draws; ++t) {
        const auto s = sample_symbols(cfg, mod, rng);
        const auto y = sample_received(cfg, real, s, rng);
        acc += std::norm(y[0]);
    }
    const double expected = cfg.p * (1.0 + cfg.kappa_t * cfg.kappa_t) +
                            cfg.p * cfg.kappa_r * cfg.kappa_r + cfg.n0;
    CHECK(acc / draws == doctest::Approx(expected).epsilon(0.03));
}
