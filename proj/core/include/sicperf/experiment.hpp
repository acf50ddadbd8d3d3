// SPDX-License-Identifier: Apache-2.0
//
// Declarative experiment runner: JSON spec parsing, figure presets, the
// p/N0 sweep driver and CSV emission.

#ifndef SICPERF_EXPERIMENT_HPP
#define SICPERF_EXPERIMENT_HPP

#include <optional>
#include <string>
#include <vector>

#include "sicperf/analytic.hpp"
#include "sicperf/channel.hpp"
#include "sicperf/montecarlo.hpp"

namespace sicperf {

enum class query_kind { outage, asep, asep_overall };

struct experiment_query {
    query_kind kind = query_kind::outage;
    sindr_scheme scheme = sindr_scheme::zf;
    ordering_strategy ordering = ordering_strategy::foschini;
    std::size_t index = 1;  // SIC stage (ignored for asep_overall)
    index_convention indexing = index_convention::sic_stage;
    double gamma_th = 1.0;  // linear threshold (outage queries)
    std::string label;      // CSV file stem; auto-filled when empty
    // Per-query impairment overrides (empty = use the spec-level config).
    std::optional<double> kappa_t, kappa_r, omega;
};

struct experiment_spec {
    system_config config;          // p is overwritten per sweep point
    std::vector<double> sweep_db;  // p/N0 points in dB, strictly increasing
    std::vector<experiment_query> queries;
    bool engine_analytic = true;
    bool engine_mc = true;
    std::uint64_t trials = 1000000;
    std::uint64_t ser_trials = 100000;
    std::uint64_t seed = 20240615;
    std::string output_dir = ".";
    std::string name = "experiment";

    // Structural checks (sweep monotone, at least one query and engine,
    // envelope n <= 8). Throws std::invalid_argument with a field diagnostic.
    void validate() const;
};

// Parse a JSON spec document. Unknown keys are rejected; dB-valued inputs
// carry a _db suffix and are converted at parse time. Throws
// std::invalid_argument with a line/field diagnostic on malformed input.
experiment_spec parse_spec(const std::string& json_text);
experiment_spec load_spec(const std::string& path);

// Fully-populated spec for figure presets fig1..fig5; unknown id throws.
experiment_spec figure_preset(const std::string& id);

// Evaluate the analytic value of one query at one sweep point (NaN when no
// closed form applies). Exposed for tests.
double analytic_value(const system_config& cfg, const experiment_query& q);

// Run the sweep and write one CSV per query into spec.output_dir; returns
// the written paths in query order. threads = 0 resolves via THREADS env.
std::vector<std::string> run_experiment(const experiment_spec& spec, unsigned threads = 0);

}  // namespace sicperf

#endif
