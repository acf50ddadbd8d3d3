// SPDX-License-Identifier: Apache-2.0
//
// Closed-form and asymptotic performance expressions: the ordered-statistics
// coefficient expansion, per-layer tail, ZF/MMSE outage, floors and
// high-SNR asymptotes.

#ifndef SICPERF_ANALYTIC_HPP
#define SICPERF_ANALYTIC_HPP

#include <cstddef>
#include <vector>

#include "sicperf/channel.hpp"
#include "sicperf/zf_sic.hpp"

namespace sicperf {

enum class index_convention { sic_stage, decoding_layer };

struct outage_query {
    double gamma_th = 1.0;                    // linear SINDR threshold, > 0
    std::size_t index = 1;                    // 1..m, meaning per `indexing`
    index_convention indexing = index_convention::sic_stage;
    ordering_strategy ordering = ordering_strategy::foschini;
    sindr_scheme scheme = sindr_scheme::zf;
};

// One term of the expanded nested sums: the induced density of the ordered
// p r_ii^2 is f(x) = sum_terms sign * e^{log_mag} * x^exponent * e^{-rate x}.
struct coeff_term {
    int sign = 1;
    double log_mag = 0.0;
    int exponent = 0;
    double rate = 1.0;  // (m + l - i + 1)/p family
};

struct ordered_layer_coefficients {
    std::vector<coeff_term> terms;
    std::size_t layer = 1;  // decoding-layer index i
    std::size_t n = 1;
    std::size_t m = 1;
    double p = 1.0;
    ordering_strategy ordering = ordering_strategy::foschini;
};

// Full flat expansion of the ordered-statistics density for decoding layer i.
// Cached per (i, n, m, p, ordering); the returned reference stays valid for
// the program lifetime. Throws std::invalid_argument outside the documented
// envelope 1 <= i <= m <= n <= 8.
const ordered_layer_coefficients& xi_coefficients(std::size_t i, std::size_t n, std::size_t m,
                                                  double p, ordering_strategy ordering);

// Pr[p r_ii^2 >= z]; value clamped to [0, 1].
double rii_tail(const ordered_layer_coefficients& coeffs, double z);

enum class zf_outage_mode { general, perfect_csi, ideal };

// Per-layer ZF-SIC outage probability. `general` evaluates the full closed
// form (stable analytic limit path at omega = 0); `perfect_csi` forces
// omega = 0; `ideal` additionally forces kappa_t = kappa_r = 0. Returns 1
// exactly when kappa_t^2 gamma_th >= 1.
double zf_outage(const system_config& cfg, const outage_query& q,
                 zf_outage_mode mode = zf_outage_mode::general);

enum class zf_floor_mode { general, csi_only, hw_only };

// High-SNR outage floor (leading order in the impairment levels). `general`
// evaluates both printed forms (binomial k-sum and Tricomi-U) and throws
// std::runtime_error if they disagree beyond 1e-8 relative.
double zf_outage_floor(const system_config& cfg, const outage_query& q,
                       zf_floor_mode mode = zf_floor_mode::general);

enum class mmse_outage_mode { general, ideal };

// Fixed-order MMSE-SIC outage per stage. Returns 1 exactly at and above the
// validity boundary gamma_th >= 1/(kappa_t^2 (omega+1) + omega). Foschini
// ordering is rejected (no closed form exists).
double mmse_outage(const system_config& cfg, const outage_query& q,
                   mmse_outage_mode mode = mmse_outage_mode::general);

// MMSE floor: the general expression with the N0/p term dropped.
double mmse_outage_floor(const system_config& cfg, const outage_query& q);

struct high_snr_asymptote {
    double coefficient = 0.0;  // P ~ coefficient * (N0/p)^{diversity_order}
    double diversity_order = 0.0;
};

// Transmitter-impairments-only asymptote (requires kappa_r = 0): diversity
// order n - m + i for stage i < m and n for the last stage.
high_snr_asymptote mmse_tx_only_asymptote(const system_config& cfg, const outage_query& q);

// Validity boundary 1/(kappa_t^2 (omega+1) + omega), +inf in ideal conditions.
double mmse_validity_bound(const system_config& cfg);

}  // namespace sicperf

#endif
