// Command-line front end: selects an experiment, applies parameter overrides,
// runs it, and reports the output manifest.

#include "histwalk/errors.hpp"
#include "histwalk/experiment.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

int main(int argc, char** argv) {
    CLI::App app{"Memory-dependent walk simulations and analysis"};

    std::string config_path;
    std::string experiment;
    std::string out_dir;
    std::uint64_t seed = 0;
    int jobs = 0;
    std::vector<std::string> formats;
    std::vector<std::string> param_overrides;

    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--experiment", experiment,
                   "Experiment name (fig1-variance .. fig7-gamma-sweep, custom)");
    app.add_option("--out", out_dir, "Output directory (default: out)");
    auto* seed_opt = app.add_option("--seed", seed, "Base RNG seed (default: 42)");
    auto* jobs_opt = app.add_option("--jobs", jobs, "Worker threads for sweeps");
    app.add_option("--format", formats,
                   "Output format: csv, json, or svg (repeatable; default: csv json)");
    app.add_option("--param", param_overrides,
                   "Model parameter override key=value (repeatable; value may be a "
                   "number, a JSON array, or a string)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        histwalk::ExperimentConfig cfg;
        if (!config_path.empty()) cfg = histwalk::load_config(config_path);
        if (!experiment.empty()) cfg.experiment = experiment;
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (seed_opt->count() > 0) cfg.seed = seed;
        if (jobs_opt->count() > 0) cfg.jobs = jobs;
        if (!formats.empty()) cfg.formats = formats;
        for (const auto& kv : param_overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos || eq == 0)
                throw histwalk::config_error("--param expects key=value, got '" + kv + "'");
            histwalk::apply_param(cfg, kv.substr(0, eq), kv.substr(eq + 1));
        }

        const auto manifest = histwalk::run_experiment(cfg);
        std::cout << manifest.experiment << ": " << manifest.files.size()
                  << " file(s) in " << manifest.run_dir.string() << " ("
                  << manifest.duration_ms << " ms)\n";
        return 0;
    } catch (const histwalk::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const histwalk::invariant_error& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return 3;
    } catch (const histwalk::io_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
