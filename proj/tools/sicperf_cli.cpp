// SPDX-License-Identifier: Apache-2.0
//
// sicperf experiment runner: `run <spec>`, `preset <fig1..fig5>`,
// `validate <spec>`.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sicperf/experiment.hpp"

namespace {

void apply_engines(sicperf::experiment_spec& spec, const std::string& engines) {
    if (engines.empty()) return;
    spec.engine_analytic = false;
    spec.engine_mc = false;
    std::size_t start = 0;
    while (start <= engines.size()) {
        const std::size_t comma = engines.find(',', start);
        const std::string tok = engines.substr(
            start, comma == std::string::npos ? std::string::npos : comma - start);
        if (tok == "analytic") {
            spec.engine_analytic = true;
        } else if (tok == "mc" || tok == "montecarlo") {
            spec.engine_mc = true;
        } else if (!tok.empty()) {
            throw CLI::ValidationError("--engines", "unknown engine '" + tok + "'");
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (!spec.engine_analytic && !spec.engine_mc) {
        throw CLI::ValidationError("--engines", "at least one engine required");
    }
}

int execute(sicperf::experiment_spec spec, const std::string& engines, std::uint64_t trials,
            std::uint64_t seed, const std::string& out_dir, unsigned threads, bool dry_run) {
    apply_engines(spec, engines);
    if (trials > 0) {
        spec.trials = trials;
        spec.ser_trials = trials;
    }
    if (seed > 0) spec.seed = seed;
    if (!out_dir.empty()) spec.output_dir = out_dir;
    spec.validate();
    if (dry_run) {
        std::cout << "spec OK: " << spec.name << " (" << spec.queries.size() << " queries, "
                  << spec.sweep_db.size() << " sweep points)\n";
        return 0;
    }
    const std::vector<std::string> paths = sicperf::run_experiment(spec, threads);
    for (const std::string& p : paths) std::cout << p << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sicperf: SIC receiver performance analysis and simulation"};
    app.require_subcommand(1);
    app.fallthrough();  // accept the global --engines/--threads after the subcommand too

    std::string engines;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::string out_dir;
    unsigned threads = 0;
    bool dry_run = false;
    app.add_option("--engines", engines, "comma list from {analytic,mc}");
    app.add_option("--threads", threads, "Monte-Carlo worker count (env THREADS)");

    std::string spec_path;
    CLI::App* run = app.add_subcommand("run", "run an experiment spec file");
    run->add_option("spec-file", spec_path, "JSON experiment spec")->required();
    run->add_option("--trials", trials, "override trial count");
    run->add_option("--seed", seed, "override RNG seed");
    run->add_option("--out", out_dir, "output directory");
    run->add_flag("--dry-run", dry_run, "validate without computing");

    std::string preset_id;
    CLI::App* preset = app.add_subcommand("preset", "run a built-in figure preset");
    preset->add_option("id", preset_id, "fig1..fig5")->required();
    preset->add_option("--trials", trials, "override trial count");
    preset->add_option("--seed", seed, "override RNG seed");
    preset->add_option("--out", out_dir, "output directory");
    preset->add_flag("--dry-run", dry_run, "validate without computing");

    std::string validate_path;
    CLI::App* validate = app.add_subcommand("validate", "validate a spec file and exit");
    validate->add_option("spec-file", validate_path, "JSON experiment spec")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            return execute(sicperf::load_spec(spec_path), engines, trials, seed, out_dir,
                           threads, dry_run);
        }
        if (preset->parsed()) {
            return execute(sicperf::figure_preset(preset_id), engines, trials, seed, out_dir,
                           threads, dry_run);
        }
        const sicperf::experiment_spec spec = sicperf::load_spec(validate_path);
        std::cout << "spec OK: " << spec.name << " (" << spec.queries.size() << " queries)\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
