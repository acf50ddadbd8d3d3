// SPDX-License-Identifier: Apache-2.0

#include "sicperf/zf_sic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sicperf {

namespace {

// Columns arranged in decoding-layer order: layer i (1-based) sits in column
// i-1, so norms are non-decreasing with the column index and the strongest
// stream occupies layer m (decoded first).
complex_matrix permute_to_layer_order(const complex_matrix& a, const detection_order& order) {
    const std::size_t m = a.cols();
    complex_matrix out(a.rows(), m);
    for (std::size_t j = 0; j < m; ++j) {
        const std::size_t src = order.perm[m - 1 - j];
        for (std::size_t i = 0; i < a.rows(); ++i) out(i, j) = a(i, src);
    }
    return out;
}

}  // namespace

detection_order compute_detection_order(const complex_matrix& h_hat, ordering_strategy strategy) {
    const std::size_t m = h_hat.cols();
    detection_order order;
    order.strategy = strategy;
    order.perm.resize(m);
    std::iota(order.perm.begin(), order.perm.end(), std::size_t{0});
    if (strategy == ordering_strategy::foschini) {
        const std::vector<double> norms = col_norms_sq(h_hat);
        std::stable_sort(order.perm.begin(), order.perm.end(),
                         [&norms](std::size_t a, std::size_t b) { return norms[a] > norms[b]; });
    }
    return order;
}

std::vector<zf_layer_terms> zf_layer_decomposition(const system_config& cfg,
                                                   const channel_realization& real,
                                                   const detection_order& order,
                                                   sindr_channel_mode mode) {
    cfg.validate();
    const std::size_t m = cfg.m;

    const bool use_true = (mode == sindr_channel_mode::true_channel);
    const complex_matrix& basis = use_true ? real.h : real.h_hat;
    detection_order eff = order;
    if (use_true && order.strategy == ordering_strategy::foschini) {
        eff = compute_detection_order(real.h, ordering_strategy::foschini);
    }

    const complex_matrix mp = permute_to_layer_order(basis, eff);
    const complex_matrix dp = permute_to_layer_order(real.delta_h, eff);
    const qr_factors f = qr_decompose(mp);

    // Y_i = sum_j |(Q^H delta_H)_{ij}|^2: squared row sums of the rotated
    // estimation error (rows 1..m).
    const complex_matrix x = multiply(adjoint(f.q), dp);
    std::vector<zf_layer_terms> out(m);
    for (std::size_t i = 0; i < m; ++i) {
        out[i].r_ii_sq = f.diag_sq[i];
        double y = 0.0;
        for (std::size_t j = 0; j < m; ++j) y += std::norm(x(i, j));
        out[i].y_i = y;
        if (!(out[i].r_ii_sq > 1e-300)) {
            throw std::runtime_error("zf_sindr_profile: degenerate realization (vanishing r_ii)");
        }
    }
    return out;
}

sindr_profile zf_sindr_profile(const system_config& cfg, const channel_realization& real,
                               const detection_order& order, sindr_channel_mode mode) {
    const std::vector<zf_layer_terms> layers = zf_layer_decomposition(cfg, real, order, mode);
    const std::size_t m = cfg.m;
    const double kt2 = cfg.kappa_t * cfg.kappa_t;
    const double floor_noise = cfg.p * cfg.kappa_r * cfg.kappa_r * static_cast<double>(m) + cfg.n0;

    sindr_profile prof;
    prof.scheme = sindr_scheme::zf;
    prof.values.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double sig = cfg.p * layers[i].r_ii_sq;
        const double den = sig * kt2 + cfg.p * layers[i].y_i * (1.0 + kt2) + floor_noise;
        // layer i+1 <-> SIC stage m-i
        prof.values[m - 1 - i] = sig / den;
    }
    return prof;
}

cplx slice_symbol(const system_config& cfg, const modulation_spec& mod, const cplx& v) {
    const double scale = std::sqrt(cfg.p);
    double best = 0.0;
    cplx out;
    bool first = true;
    for (const cplx& pt : mod.points) {
        const cplx cand = scale * pt;
        const double d = std::norm(v - cand);
        if (first || d < best) {
            best = d;
            out = cand;
            first = false;
        }
    }
    return out;
}

std::vector<cplx> zf_sic_decode(const system_config& cfg, const std::vector<cplx>& y,
                                const channel_realization& real, const detection_order& order,
                                const modulation_spec& mod, const std::vector<cplx>* genie_symbols) {
    cfg.validate();
    mod.validate();
    if (y.size() != cfg.n) throw std::invalid_argument("zf_sic_decode: received vector size mismatch");
    const std::size_t m = cfg.m;

    const complex_matrix hp = permute_to_layer_order(real.h_hat, order);
    const qr_factors f = qr_decompose(hp);
    for (std::size_t i = 0; i < m; ++i) {
        if (!(f.diag_sq[i] > 1e-300)) {
            throw std::runtime_error("zf_sic_decode: degenerate r_ii");
        }
    }
    const std::vector<cplx> z = adjoint_matvec(f.q, y);

    // Genie feedback is given in original stream order; map it to layers.
    std::vector<cplx> genie_layer;
    if (genie_symbols != nullptr) {
        genie_layer.resize(m);
        for (std::size_t j = 0; j < m; ++j) genie_layer[j] = (*genie_symbols)[order.perm[m - 1 - j]];
    }

    std::vector<cplx> s_layer(m);
    for (std::size_t ii = m; ii-- > 0;) {
        cplx v = z[ii];
        for (std::size_t j = ii + 1; j < m; ++j) {
            const cplx fb = (genie_symbols != nullptr) ? genie_layer[j] : s_layer[j];
            v -= f.r(ii, j) * fb;
        }
        v /= f.r(ii, ii);
        s_layer[ii] = slice_symbol(cfg, mod, v);
    }

    std::vector<cplx> out(m);
    for (std::size_t j = 0; j < m; ++j) out[order.perm[m - 1 - j]] = s_layer[j];
    return out;
}

}  // namespace sicperf
