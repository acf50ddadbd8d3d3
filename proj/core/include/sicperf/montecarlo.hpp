// SPDX-License-Identifier: Apache-2.0
//
// Deterministic, worker-count-independent Monte-Carlo estimation of outage
// probabilities (formula sampling of the SINDR profiles) and symbol error
// rates (link-level decode), with Wilson 95% intervals.

#ifndef SICPERF_MONTECARLO_HPP
#define SICPERF_MONTECARLO_HPP

#include <cstdint>
#include <vector>

#include "sicperf/analytic.hpp"
#include "sicperf/channel.hpp"
#include "sicperf/zf_sic.hpp"

namespace sicperf {

enum class mc_mode { formula_sampling, link_level };
enum class feedback_mode { genie, decision };

struct outage_estimate {
    double value = 0.0;
    double ci_low = 0.0;   // 95% Wilson lower bound
    double ci_high = 0.0;  // 95% Wilson upper bound
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    mc_mode mode = mc_mode::formula_sampling;
};

// Wilson 95% score interval for k successes in n trials.
void wilson_interval(std::uint64_t k, std::uint64_t n, double& low, double& high);

// Fraction of realizations whose SINDR at the queried stage falls at or
// below gamma_th, sampled from zf_sindr_profile / mmse_sindr_profile.
// Per-trial counter-based sub-seeding makes the result independent of the
// worker count; threads = 0 resolves to the THREADS environment variable or
// the hardware concurrency. Degenerate realizations are deterministically
// resampled, capped at 0.01% of trials (std::runtime_error beyond).
// Requires trials >= 1000 and mode == formula_sampling (link-level symbol
// statistics live in estimate_ser).
outage_estimate estimate_outage(const system_config& cfg, const outage_query& q,
                                std::uint64_t trials, std::uint64_t seed,
                                mc_mode mode = mc_mode::formula_sampling,
                                sindr_channel_mode chan_mode = sindr_channel_mode::estimated,
                                unsigned threads = 0);

struct ser_estimate {
    std::vector<outage_estimate> per_stage;  // index k = SIC stage k+1
    outage_estimate overall;                 // raw symbol-error fraction, all streams
};

// Link-level SER with genie or decision feedback. Ordering applies to the
// ZF scheme (Foschini or fixed); MMSE decodes in the fixed natural order.
// The noise_flags overload suppresses individual noise terms for debugging.
ser_estimate estimate_ser(const system_config& cfg, sindr_scheme scheme,
                          ordering_strategy ordering, const modulation_spec& mod,
                          std::uint64_t trials, std::uint64_t seed, feedback_mode feedback,
                          unsigned threads = 0);
ser_estimate estimate_ser(const system_config& cfg, sindr_scheme scheme,
                          ordering_strategy ordering, const modulation_spec& mod,
                          std::uint64_t trials, std::uint64_t seed, feedback_mode feedback,
                          const noise_flags& flags, unsigned threads = 0);

// Thread-count resolution used by the estimators: explicit value, else the
// THREADS environment variable, else the hardware concurrency (min 1).
unsigned resolve_threads(unsigned requested);

}  // namespace sicperf

#endif
