// SPDX-License-Identifier: Apache-2.0

#include "sicperf/mmse_sic.hpp"

#include <cmath>
#include <stdexcept>

namespace sicperf {

namespace {

struct mmse_constants {
    double a;  // k_T^2 (w+1) + w + 1
    double b;  // k_R^2 m + N0/p
    double d;  // 2 sqrt(w) + 1
};

mmse_constants constants_of(const system_config& cfg) {
    mmse_constants c;
    c.a = cfg.kappa_t * cfg.kappa_t * (cfg.omega + 1.0) + cfg.omega + 1.0;
    c.b = cfg.kappa_r * cfg.kappa_r * static_cast<double>(cfg.m) + cfg.n0 / cfg.p;
    c.d = 2.0 * std::sqrt(cfg.omega) + 1.0;
    return c;
}

// scale * A A^H + diag * I
complex_matrix gram_plus_diag(const complex_matrix& a, double scale, double diag) {
    const std::size_t n = a.rows();
    complex_matrix g(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            cplx s(0.0, 0.0);
            for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * std::conj(a(j, k));
            s *= scale;
            if (i == j) s += diag;
            g(i, j) = s;
            g(j, i) = std::conj(s);
        }
    }
    return g;
}

std::vector<cplx> column_of(const complex_matrix& a, std::size_t j) {
    std::vector<cplx> c(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) c[i] = a(i, j);
    return c;
}

complex_matrix columns_from(const complex_matrix& a, std::size_t first) {
    if (first >= a.cols()) throw std::invalid_argument("columns_from: empty selection");
    complex_matrix out(a.rows(), a.cols() - first);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = first; j < a.cols(); ++j) out(i, j - first) = a(i, j);
    }
    return out;
}

complex_matrix columns_without(const complex_matrix& a, std::size_t skip) {
    complex_matrix out(a.rows(), a.cols() - 1);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        std::size_t jj = 0;
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (j == skip) continue;
            out(i, jj++) = a(i, j);
        }
    }
    return out;
}

double herm_quadform_solve(const complex_matrix& sys, const std::vector<cplx>& h) {
    const std::vector<cplx> x = solve_hpd(sys, h);
    cplx q(0.0, 0.0);
    for (std::size_t i = 0; i < h.size(); ++i) q += std::conj(h[i]) * x[i];
    return q.real();
}

}  // namespace

std::vector<cplx> mmse_filter(const system_config& cfg, const complex_matrix& h_matrix,
                              std::size_t j) {
    cfg.validate();
    if (j >= h_matrix.cols()) throw std::invalid_argument("mmse_filter: stream index out of range");
    const mmse_constants c = constants_of(cfg);
    const complex_matrix sys = gram_plus_diag(h_matrix, c.a, c.b);
    return solve_hpd(sys, column_of(h_matrix, j));
}

double mmse_stream_sindr_direct(const system_config& cfg, const complex_matrix& h, std::size_t j) {
    const mmse_constants c = constants_of(cfg);
    // (1/b) h_j^H (H H^H (a/b) + I)^{-1} h_j, then the distortion feedback.
    const complex_matrix sys = gram_plus_diag(h, c.a / c.b, 1.0);
    const double num = herm_quadform_solve(sys, column_of(h, j)) / c.b;
    return num / (1.0 - num / c.d);
}

double mmse_stream_sindr_woodbury(const system_config& cfg, const complex_matrix& h, std::size_t j) {
    const mmse_constants c = constants_of(cfg);
    double phi;
    if (h.cols() == 1) {
        double y = 0.0;
        for (std::size_t i = 0; i < h.rows(); ++i) y += std::norm(h(i, 0));
        phi = y / (c.b / c.a);
    } else {
        const complex_matrix k = columns_without(h, j);
        const complex_matrix sys = gram_plus_diag(k, 1.0, c.b / c.a);
        phi = herm_quadform_solve(sys, column_of(h, j));
    }
    const double chat = (1.0 / c.a) * phi / (1.0 + phi);
    return chat / (1.0 - chat / c.d);
}

double mmse_beta(const system_config& cfg, const complex_matrix& h, std::size_t j) {
    const std::vector<cplx> g = mmse_filter(cfg, h, j);
    const std::vector<cplx> hj = column_of(h, j);
    cplx beta(0.0, 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) beta += std::conj(g[i]) * hj[i];
    return beta.real();
}

sindr_profile mmse_sindr_profile(const system_config& cfg, const channel_realization& real) {
    cfg.validate();
    const std::size_t m = cfg.m;
    const mmse_constants c = constants_of(cfg);

    sindr_profile prof;
    prof.scheme = sindr_scheme::mmse;
    prof.values.resize(m);
    for (std::size_t i = 0; i < m; ++i) {  // stage i+1 decodes stream i
        const std::vector<cplx> hi = column_of(real.h, i);
        if (i + 1 == m) {
            // Last stage: interference-free quadratic form with the residual
            // self-distortion coefficient a - 1.
            const complex_matrix hm(cfg.n, 1, hi);
            const complex_matrix sys = gram_plus_diag(hm, (c.a - 1.0) / c.b, 1.0);
            prof.values[i] = herm_quadform_solve(sys, hi) / c.b;
        } else {
            const complex_matrix k = columns_from(real.h, i + 1);
            const complex_matrix sys = gram_plus_diag(k, 1.0, c.b / c.a);
            const double phi = herm_quadform_solve(sys, hi);
            const double chat = (1.0 / c.a) * phi / (1.0 + phi);
            if (!(chat < c.d)) {
                throw std::runtime_error("mmse_sindr_profile: model violation (C >= 2 sqrt(w) + 1)");
            }
            prof.values[i] = chat / (1.0 - chat / c.d);
        }
    }
    return prof;
}

double mmse_sindr_direct(const system_config& cfg, const channel_realization& real,
                         std::size_t stage) {
    cfg.validate();
    if (stage < 1 || stage > cfg.m) throw std::invalid_argument("mmse_sindr_direct: bad stage");
    const mmse_constants c = constants_of(cfg);
    const std::size_t i = stage - 1;
    if (stage == cfg.m) {
        const std::vector<cplx> hi = column_of(real.h, i);
        const complex_matrix hm(cfg.n, 1, hi);
        const complex_matrix sys = gram_plus_diag(hm, (c.a - 1.0) / c.b, 1.0);
        return herm_quadform_solve(sys, hi) / c.b;
    }
    // Pre-Woodbury form on the deflated system [h_i K_i].
    const complex_matrix sub = columns_from(real.h, i);
    const complex_matrix sys = gram_plus_diag(sub, c.a / c.b, 1.0);
    const double num = herm_quadform_solve(sys, column_of(real.h, i)) / c.b;
    return num / (1.0 - num / c.d);
}

std::vector<cplx> mmse_sic_decode(const system_config& cfg, const std::vector<cplx>& y,
                                  const channel_realization& real, const modulation_spec& mod,
                                  const std::vector<cplx>* genie_symbols) {
    cfg.validate();
    mod.validate();
    if (y.size() != cfg.n) throw std::invalid_argument("mmse_sic_decode: received vector size mismatch");
    const std::size_t m = cfg.m;
    const mmse_constants c = constants_of(cfg);

    std::vector<cplx> residual(y);
    std::vector<cplx> out(m);
    for (std::size_t i = 0; i < m; ++i) {
        const complex_matrix active = columns_from(real.h_hat, i);
        const complex_matrix sys = gram_plus_diag(active, c.a, c.b);
        const std::vector<cplx> g = solve_hpd(sys, column_of(real.h_hat, i));
        cplx v(0.0, 0.0);
        for (std::size_t r = 0; r < cfg.n; ++r) v += std::conj(g[r]) * residual[r];
        out[i] = slice_symbol(cfg, mod, v);
        const cplx fb = (genie_symbols != nullptr) ? (*genie_symbols)[i] : out[i];
        for (std::size_t r = 0; r < cfg.n; ++r) residual[r] -= real.h_hat(r, i) * fb;
    }
    return out;
}

}  // namespace sicperf
