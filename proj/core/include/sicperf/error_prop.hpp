// SPDX-License-Identifier: Apache-2.0
//
// Error-propagation ASEP model: the conditional per-layer ASEP quadrature,
// the overall decision-feedback combination, and the two closed forms
// (ordered ZF with an impaired receiver; fixed-order MMSE, clean transmitter).

#ifndef SICPERF_ERROR_PROP_HPP
#define SICPERF_ERROR_PROP_HPP

#include <cstddef>
#include <functional>
#include <vector>

#include "sicperf/channel.hpp"
#include "sicperf/zf_sic.hpp"

namespace sicperf {

// Which printed bound supplies the MMSE integration limit: the section-VI
// text uses kappa_r in the denominator, the section-IV validity bound uses
// kappa_t. Both are exposed; section6 is the default.
enum class z_limit_convention { section6, section4 };

struct asep_query {
    modulation_spec mod;
    sindr_scheme scheme = sindr_scheme::zf;
    system_config cfg;
    double z_limit = 0.0;  // integration upper limit Z (linear SINDR); inf allowed
};

// Z = 1/kappa_t^2 for ZF; 1/(kappa_r^2 (omega+1) + omega) for MMSE
// (section6) or 1/(kappa_t^2 (omega+1) + omega) (section4); +inf when the
// denominator vanishes.
double asep_z_limit(const system_config& cfg, sindr_scheme scheme,
                    z_limit_convention convention = z_limit_convention::section6);

// (A sqrt(B) / 2 sqrt(pi)) \int_0^Z e^{-Bx} x^{-1/2} P_out(x) dx, evaluated
// after the x = u^2 substitution that removes the endpoint singularity.
// Result lies in [0, A/2]. Throws std::runtime_error (with the current
// estimate in the message) if the adaptive quadrature fails to converge.
double conditional_asep(const asep_query& q, const std::function<double(double)>& outage_fn);

// Overall ASEP of the decision-feedback chain,
//   (1 - 1/M)/m * sum_t t * Pbar_t * prod_{l > t} (1 - Pbar_l),
// with per_layer_asep[t-1] = Pbar of decoding layer t (layer m decoded
// first).
double overall_asep(const modulation_spec& mod, const std::vector<double>& per_layer_asep);

// Closed-form ordered ZF-SIC ASEP for decoding layer i (requires
// kappa_t = 0 and omega > 0). Throws std::invalid_argument otherwise.
double zf_asep_closed(const system_config& cfg, std::size_t i, const modulation_spec& mod);

// Closed-form fixed-order MMSE-SIC ASEP for stage i < m (requires
// kappa_t = 0, omega = 0). The last stage has no closed form; use
// conditional_asep. Throws std::invalid_argument on violations.
double mmse_asep_closed(const system_config& cfg, std::size_t i, const modulation_spec& mod);

}  // namespace sicperf

#endif
