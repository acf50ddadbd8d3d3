// SPDX-License-Identifier: Apache-2.0

#include "sicperf/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "sicperf/mmse_sic.hpp"

namespace sicperf {

namespace {

constexpr std::uint64_t block_size = 4096;  // fixed work unit, worker-count invariant
constexpr std::uint64_t resample_salt = 0x6b79b2c1e58d3a4fULL;
constexpr unsigned max_resample_attempts = 16;

struct trial_counts {
    std::vector<std::uint64_t> stage_hits;
    std::uint64_t overall_hits = 0;
    std::uint64_t degenerate = 0;
};

// Run `body` over all trials in fixed-size blocks distributed over workers
// by an atomic block counter; per-block integer counts are merged under a
// mutex-free atomic scheme (plain accumulation after join since each worker
// owns its partial).
template <typename Body>
trial_counts run_trials(std::uint64_t trials, std::size_t stages, unsigned threads,
                        const Body& body) {
    const std::uint64_t blocks = (trials + block_size - 1) / block_size;
    std::atomic<std::uint64_t> next_block{0};
    std::atomic<bool> failed{false};
    std::vector<trial_counts> partials(threads);
    std::vector<std::exception_ptr> errors(threads);
    auto worker = [&](unsigned w) {
        trial_counts& c = partials[w];
        c.stage_hits.assign(stages, 0);
        try {
            for (;;) {
                const std::uint64_t blk = next_block.fetch_add(1);
                if (blk >= blocks || failed.load(std::memory_order_relaxed)) break;
                const std::uint64_t begin = blk * block_size;
                const std::uint64_t end = std::min(trials, begin + block_size);
                for (std::uint64_t t = begin; t < end; ++t) body(t, c);
            }
        } catch (...) {
            errors[w] = std::current_exception();
            failed.store(true, std::memory_order_relaxed);
        }
    };
    if (threads <= 1) {
        worker(0);
        if (errors[0]) std::rethrow_exception(errors[0]);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker, w);
        for (auto& th : pool) th.join();
        for (const auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }
    trial_counts total;
    total.stage_hits.assign(stages, 0);
    for (const trial_counts& c : partials) {
        for (std::size_t s = 0; s < stages; ++s) total.stage_hits[s] += c.stage_hits[s];
        total.overall_hits += c.overall_hits;
        total.degenerate += c.degenerate;
    }
    return total;
}

std::size_t stage_of(const system_config& cfg, const outage_query& q) {
    if (q.index < 1 || q.index > cfg.m) throw std::invalid_argument("estimate_outage: index out of range");
    return (q.indexing == index_convention::sic_stage) ? q.index : cfg.m - q.index + 1;
}

complex_matrix permute_columns(const complex_matrix& a, const std::vector<std::size_t>& perm) {
    complex_matrix out(a.rows(), a.cols());
    for (std::size_t j = 0; j < a.cols(); ++j) {
        for (std::size_t i = 0; i < a.rows(); ++i) out(i, j) = a(i, perm[j]);
    }
    return out;
}

}  // namespace

unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

void wilson_interval(std::uint64_t k, std::uint64_t n, double& low, double& high) {
    if (n == 0) throw std::invalid_argument("wilson_interval: n must be positive");
    if (k > n) throw std::invalid_argument("wilson_interval: k must not exceed n");
    const double z = 1.959963984540054;  // 97.5% normal quantile
    const double nn = static_cast<double>(n);
    const double phat = static_cast<double>(k) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = (phat + z2 / (2.0 * nn)) / denom;
    const double half = z / denom * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn));
    low = std::max(0.0, center - half);
    high = std::min(1.0, center + half);
}

outage_estimate estimate_outage(const system_config& cfg, const outage_query& q,
                                std::uint64_t trials, std::uint64_t seed, mc_mode mode,
                                sindr_channel_mode chan_mode, unsigned threads) {
    cfg.validate();
    if (trials < 1000) throw std::invalid_argument("estimate_outage: requires trials >= 1000");
    if (mode != mc_mode::formula_sampling) {
        throw std::invalid_argument("estimate_outage: only formula_sampling here; use estimate_ser");
    }
    const std::size_t stage = stage_of(cfg, q);
    const unsigned nthreads = resolve_threads(threads);

    const auto body = [&](std::uint64_t t, trial_counts& c) {
        for (unsigned attempt = 0;; ++attempt) {
            if (attempt >= max_resample_attempts) {
                throw std::runtime_error("estimate_outage: persistent degenerate realization");
            }
            const std::uint64_t s = (attempt == 0) ? seed : seed ^ (resample_salt * attempt);
            gauss_stream rng = gauss_stream::for_trial(s, t);
            const channel_realization real = sample_realization(cfg, rng);
            try {
                double sindr;
                if (q.scheme == sindr_scheme::zf) {
                    const detection_order order =
                        compute_detection_order(real.h_hat, q.ordering);
                    const sindr_profile prof = zf_sindr_profile(cfg, real, order, chan_mode);
                    sindr = prof.values[stage - 1];
                } else {
                    channel_realization eff = real;
                    if (q.ordering == ordering_strategy::foschini) {
                        // Decode strongest-first: place the stage-k stream in
                        // column k-1 and evaluate the natural-order profile.
                        const detection_order order = compute_detection_order(
                            (chan_mode == sindr_channel_mode::true_channel) ? real.h
                                                                            : real.h_hat,
                            ordering_strategy::foschini);
                        eff.h = permute_columns(real.h, order.perm);
                        eff.delta_h = permute_columns(real.delta_h, order.perm);
                        eff.h_hat = permute_columns(real.h_hat, order.perm);
                    }
                    const sindr_profile prof = mmse_sindr_profile(cfg, eff);
                    sindr = prof.values[stage - 1];
                }
                if (sindr <= q.gamma_th) ++c.stage_hits[stage - 1];
                return;
            } catch (const std::runtime_error&) {
                ++c.degenerate;
            }
        }
    };

    const trial_counts counts = run_trials(trials, cfg.m, nthreads, body);
    if (counts.degenerate * 10000 > trials) {
        throw std::runtime_error("estimate_outage: degenerate-resample cap exceeded");
    }

    outage_estimate est;
    est.trials = trials;
    est.seed = seed;
    est.mode = mc_mode::formula_sampling;
    est.value = static_cast<double>(counts.stage_hits[stage - 1]) / static_cast<double>(trials);
    wilson_interval(counts.stage_hits[stage - 1], trials, est.ci_low, est.ci_high);
    return est;
}

ser_estimate estimate_ser(const system_config& cfg, sindr_scheme scheme,
                          ordering_strategy ordering, const modulation_spec& mod,
                          std::uint64_t trials, std::uint64_t seed, feedback_mode feedback,
                          unsigned threads) {
    return estimate_ser(cfg, scheme, ordering, mod, trials, seed, feedback, noise_flags{},
                        threads);
}

ser_estimate estimate_ser(const system_config& cfg, sindr_scheme scheme,
                          ordering_strategy ordering, const modulation_spec& mod,
                          std::uint64_t trials, std::uint64_t seed, feedback_mode feedback,
                          const noise_flags& flags, unsigned threads) {
    cfg.validate();
    mod.validate();
    if (trials < 1000) throw std::invalid_argument("estimate_ser: requires trials >= 1000");
    const std::size_t m = cfg.m;
    const unsigned nthreads = resolve_threads(threads);

    const auto body = [&](std::uint64_t t, trial_counts& c) {
        gauss_stream rng = gauss_stream::for_trial(seed, t);
        const channel_realization real = sample_realization(cfg, rng);
        const std::vector<cplx> s = sample_symbols(cfg, mod, rng);
        const std::vector<cplx> y = sample_received(cfg, real, s, rng, flags);
        const std::vector<cplx>* genie =
            (feedback == feedback_mode::genie) ? &s : nullptr;

        std::vector<cplx> out;
        std::vector<std::size_t> stream_of_stage(m);
        if (scheme == sindr_scheme::zf) {
            const detection_order order = compute_detection_order(real.h_hat, ordering);
            out = zf_sic_decode(cfg, y, real, order, mod, genie);
            for (std::size_t k = 0; k < m; ++k) stream_of_stage[k] = order.perm[k];
        } else {
            out = mmse_sic_decode(cfg, y, real, mod, genie);
            for (std::size_t k = 0; k < m; ++k) stream_of_stage[k] = k;
        }
        for (std::size_t k = 0; k < m; ++k) {
            const std::size_t j = stream_of_stage[k];
            const bool err = std::norm(out[j] - s[j]) > 1e-18;
            if (err) {
                ++c.stage_hits[k];
                ++c.overall_hits;
            }
        }
    };

    const trial_counts counts = run_trials(trials, m, nthreads, body);

    ser_estimate est;
    est.per_stage.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        outage_estimate& e = est.per_stage[k];
        e.trials = trials;
        e.seed = seed;
        e.mode = mc_mode::link_level;
        e.value = static_cast<double>(counts.stage_hits[k]) / static_cast<double>(trials);
        wilson_interval(counts.stage_hits[k], trials, e.ci_low, e.ci_high);
    }
    const std::uint64_t symbols = trials * static_cast<std::uint64_t>(m);
    est.overall.trials = symbols;
    est.overall.seed = seed;
    est.overall.mode = mc_mode::link_level;
    est.overall.value = static_cast<double>(counts.overall_hits) / static_cast<double>(symbols);
    wilson_interval(counts.overall_hits, symbols, est.overall.ci_low, est.overall.ci_high);
    return est;
}

}  // namespace sicperf
