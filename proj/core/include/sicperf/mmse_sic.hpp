// SPDX-License-Identifier: Apache-2.0
//
// Impairment-aware MMSE filtering and fixed-order MMSE-SIC: the optimal
// linear filter, the per-stage SINDR forms (pre- and post-Woodbury), and
// symbol-level decoding.

#ifndef SICPERF_MMSE_SIC_HPP
#define SICPERF_MMSE_SIC_HPP

#include <vector>

#include "sicperf/channel.hpp"
#include "sicperf/matcore.hpp"
#include "sicperf/zf_sic.hpp"

namespace sicperf {

struct mmse_stage_context {
    std::size_t stage = 1;    // i in 1..m
    complex_matrix deflated;  // n x (m - i) not-yet-decoded interferer columns
    std::vector<cplx> target; // h_i
};

// Impairment-aware MMSE weight for stream j (0-based):
//   g = (H H^H (k_T^2 (w+1) + w + 1) + (k_R^2 m + N0/p) I)^{-1} h_j.
std::vector<cplx> mmse_filter(const system_config& cfg, const complex_matrix& h_matrix,
                              std::size_t j);

// Fixed-order per-stage SINDR: stages 1 <= i < m use the post-Woodbury form
//   SINDR_i = C / (1 - C/(2 sqrt(w) + 1)),  C = (1/a) Phi/(1 + Phi),
//   Phi = h_i^H (K_i K_i^H + (b/a) I)^{-1} h_i
// built from the deflated true channel; stage m uses the interference-free
// quadratic form. Stage k of the returned profile is stream k.
sindr_profile mmse_sindr_profile(const system_config& cfg, const channel_realization& real);

// Pre-Woodbury form of the same per-stage SINDR, evaluated on the full
// (deflated) system matrix [h_i K_i]. Used as the dual-expression oracle.
double mmse_sindr_direct(const system_config& cfg, const channel_realization& real,
                         std::size_t stage);

// Per-stream (non-SIC) versions of both forms, for the full channel matrix;
// stream j is 0-based. These realize the two printed SINDR expressions whose
// Woodbury equivalence is asserted in the tests.
double mmse_stream_sindr_direct(const system_config& cfg, const complex_matrix& h, std::size_t j);
double mmse_stream_sindr_woodbury(const system_config& cfg, const complex_matrix& h, std::size_t j);

// beta_j = g^H h_j for the full-matrix filter of stream j; lies in (0, 1).
double mmse_beta(const system_config& cfg, const complex_matrix& h, std::size_t j);

// Fixed-order decision-feedback MMSE-SIC decode; filters are built from the
// receiver's H_hat, cancellation reconstructs decided streams with H_hat
// columns. Output in stream order. genie_symbols as in zf_sic_decode.
std::vector<cplx> mmse_sic_decode(const system_config& cfg, const std::vector<cplx>& y,
                                  const channel_realization& real, const modulation_spec& mod,
                                  const std::vector<cplx>* genie_symbols = nullptr);

}  // namespace sicperf

#endif
