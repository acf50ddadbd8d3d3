// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "sicperf/channel.hpp"
#include "sicperf/zf_sic.hpp"

using namespace sicperf;

namespace {

system_config basic_cfg(std::size_t n, std::size_t m) {
    system_config cfg;
    cfg.n = n;
    cfg.m = m;
    cfg.p = 10.0;
    cfg.n0 = 1.0;
    return cfg;
}

}  // namespace

TEST_CASE("detection order rules") {
    // Equal norms: identity by tie-break.
    complex_matrix eq(2, 2, {cplx(1, 0), cplx(0, 1), cplx(0, 1), cplx(1, 0)});
    const detection_order tie = compute_detection_order(eq, ordering_strategy::foschini);
    CHECK(tie.perm == std::vector<std::size_t>{0, 1});

    // Norms (1, 4): stream 2 decoded first.
    complex_matrix two(2, 2, {cplx(1, 0), cplx(2, 0), cplx(0, 0), cplx(0, 0)});
    const detection_order ord = compute_detection_order(two, ordering_strategy::foschini);
    CHECK(ord.perm[0] == 1);
    CHECK(ord.perm[1] == 0);

    // Fixed: identity.
    const detection_order fix = compute_detection_order(two, ordering_strategy::fixed);
    CHECK(fix.perm == std::vector<std::size_t>{0, 1});

    // Random 4x4: decode-order norms non-increasing.
    gauss_stream rng(3);
    system_config cfg = basic_cfg(4, 4);
    const channel_realization real = sample_realization(cfg, rng);
    const detection_order r = compute_detection_order(real.h_hat, ordering_strategy::foschini);
    const auto ns = col_norms_sq(real.h_hat);
    for (std::size_t k = 1; k < 4; ++k) CHECK(ns[r.perm[k - 1]] >= ns[r.perm[k]]);
}

TEST_CASE("zf sindr profile ideal and impaired reductions") {
    system_config cfg = basic_cfg(4, 4);
    gauss_stream rng(11);
    const channel_realization real = sample_realization(cfg, rng);
    const detection_order order = compute_detection_order(real.h_hat, ordering_strategy::fixed);

    // Ideal: SINDR_i = p r_ii^2 / N0, layer i <-> stage m-i+1.
    const auto layers = zf_layer_decomposition(cfg, real, order, sindr_channel_mode::estimated);
    const sindr_profile prof = zf_sindr_profile(cfg, real, order);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(prof.values[4 - 1 - i] ==
              doctest::Approx(cfg.p * layers[i].r_ii_sq / cfg.n0).epsilon(1e-12));
        CHECK(layers[i].y_i == 0.0);  // omega = 0
    }

    // omega = 0, impairments on: SNDR form.
    system_config imp = cfg;
    imp.kappa_t = 0.1;
    imp.kappa_r = 0.08;
    const sindr_profile p2 = zf_sindr_profile(imp, real, order);
    for (std::size_t i = 0; i < 4; ++i) {
        const double sig = imp.p * layers[i].r_ii_sq;
        const double expect =
            sig / (sig * 0.01 + imp.p * 0.08 * 0.08 * 4.0 + imp.n0);
        CHECK(p2.values[4 - 1 - i] == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("zf sindr matches direct assembly on 2x2") {
    system_config cfg = basic_cfg(2, 2);
    cfg.kappa_t = 0.08;
    cfg.kappa_r = 0.08;
    cfg.omega = 0.1;
    gauss_stream rng(21);
    const channel_realization real = sample_realization(cfg, rng);
    const detection_order order =
        compute_detection_order(real.h_hat, ordering_strategy::foschini);
    const sindr_profile prof =
        zf_sindr_profile(cfg, real, order, sindr_channel_mode::estimated);

    // Direct evaluation from raw matrix products on the permuted estimate.
    complex_matrix hp(2, 2), dp(2, 2);
    for (std::size_t j = 0; j < 2; ++j) {
        const std::size_t src = order.perm[2 - 1 - j];
        for (std::size_t i = 0; i < 2; ++i) {
            hp(i, j) = real.h_hat(i, src);
            dp(i, j) = real.delta_h(i, src);
        }
    }
    const qr_factors f = qr_decompose(hp);
    const complex_matrix x = multiply(adjoint(f.q), dp);
    for (std::size_t i = 0; i < 2; ++i) {
        double y = 0.0;
        for (std::size_t j = 0; j < 2; ++j) y += std::norm(x(i, j));
        const double sig = cfg.p * f.diag_sq[i];
        const double kt2 = cfg.kappa_t * cfg.kappa_t;
        const double expect = sig / (sig * kt2 + cfg.p * y * (1 + kt2) +
                                     cfg.p * cfg.kappa_r * cfg.kappa_r * 2.0 + cfg.n0);
        CHECK(prof.values[2 - 1 - i] == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("Y_i mean is m*omega") {
    system_config cfg = basic_cfg(4, 4);
    cfg.omega = 0.1;
    gauss_stream rng(17);
    const detection_order order{std::vector<std::size_t>{0, 1, 2, 3}, ordering_strategy::fixed};
    double mean = 0.0;
    const std::size_t draws = 20000;
    for (std::size_t t = 0; t < draws; ++t) {
        const channel_realization real = sample_realization(cfg, rng);
        const auto layers =
            zf_layer_decomposition(cfg, real, order, sindr_channel_mode::true_channel);
        mean += layers[1].y_i;
    }
    CHECK(mean / draws == doctest::Approx(4.0 * 0.1).epsilon(0.03));
}

TEST_CASE("zf decode noiseless recovery and permutation consistency") {
    system_config cfg = basic_cfg(4, 4);
    const modulation_spec mod = bpsk();
    gauss_stream rng(9);
    const channel_realization real = sample_realization(cfg, rng);
    std::vector<cplx> s(4);
    const double sp = std::sqrt(cfg.p);
    s = {cplx(sp, 0), cplx(-sp, 0), cplx(-sp, 0), cplx(sp, 0)};
    noise_flags off;
    off.transmit_distortion = false;
    off.receive_distortion = false;
    off.thermal = false;
    const auto y = sample_received(cfg, real, s, rng, off);

    const detection_order ord = compute_detection_order(real.h_hat, ordering_strategy::foschini);
    const auto dec = zf_sic_decode(cfg, y, real, ord, mod);
    for (std::size_t j = 0; j < 4; ++j) CHECK(std::abs(dec[j] - s[j]) < 1e-9);

    // Decoding with order sigma on H equals identity order on permuted H.
    channel_realization perm;
    perm.h = complex_matrix(4, 4);
    perm.delta_h = complex_matrix(4, 4);
    perm.h_hat = complex_matrix(4, 4);
    // Column j of the permuted system = stream ord.perm[m-1-j] (layer order),
    // and identity decode on it processes layers in the same sequence.
    std::vector<std::size_t> col_src(4);
    for (std::size_t j = 0; j < 4; ++j) col_src[j] = ord.perm[j];
    for (std::size_t j = 0; j < 4; ++j) {
        for (std::size_t i = 0; i < 4; ++i) {
            perm.h(i, j) = real.h(i, col_src[j]);
            perm.delta_h(i, j) = real.delta_h(i, col_src[j]);
            perm.h_hat(i, j) = real.h_hat(i, col_src[j]);
        }
    }
    std::vector<cplx> s_perm(4);
    for (std::size_t j = 0; j < 4; ++j) s_perm[j] = s[col_src[j]];
    const detection_order ident{std::vector<std::size_t>{0, 1, 2, 3}, ordering_strategy::fixed};
    const auto dec2 = zf_sic_decode(cfg, y, perm, ident, mod);
    for (std::size_t j = 0; j < 4; ++j) CHECK(std::abs(dec2[j] - s[col_src[j]]) < 1e-9);
}

TEST_CASE("slice_symbol nearest point") {
    system_config cfg = basic_cfg(2, 2);
    cfg.p = 4.0;
    const modulation_spec mod = bpsk();
    CHECK(slice_symbol(cfg, mod, cplx(0.3, 0.9)) == cplx(2.0, 0.0));
    CHECK(slice_symbol(cfg, mod, cplx(-0.1, -5.0)) == cplx(-2.0, 0.0));
}
