#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace histwalk {

inline constexpr const char* kToolVersion = "1.0.0";

// Fully describes one reproducible run: a named experiment, its numeric and
// string parameters (defaults baked per experiment, overridable), output
// location/formats, seed, and worker count for sweeps.
struct ExperimentConfig {
    std::string experiment = "custom";
    std::map<std::string, std::vector<double>> params;  // scalars stored as size-1
    std::map<std::string, std::string> string_params;
    std::filesystem::path out_dir = "out";
    std::vector<std::string> formats = {"csv", "json"};
    std::uint64_t seed = 42;
    int jobs = 1;
};

// Parses a JSON config file. Unknown top-level keys or malformed values throw
// config_error naming the offender.
ExperimentConfig load_config(const std::filesystem::path& path);

// Applies one --param key=value override; the value is parsed as a JSON
// number/array when possible, else kept as a string.
void apply_param(ExperimentConfig& cfg, const std::string& key, const std::string& value);

// Checks the experiment name and that every supplied parameter key is known
// to that experiment.
void validate(const ExperimentConfig& cfg);

// JSON round-trip support: parse(serialize(cfg)) == cfg.
std::string serialize_config(const ExperimentConfig& cfg);
ExperimentConfig parse_config_text(const std::string& json_text);

struct ManifestFile {
    std::string path;  // relative to the run directory
    std::string sha256;
};

struct RunManifest {
    std::string experiment;
    std::string version;
    std::uint64_t seed = 0;
    double duration_ms = 0;
    std::map<std::string, std::string> effective;  // resolved parameter values
    std::vector<ManifestFile> files;
    std::filesystem::path run_dir;
};

// Runs the named experiment under cfg.out_dir/<experiment>/, emits the
// requested formats, writes manifest.json last, and returns the manifest.
RunManifest run_experiment(const ExperimentConfig& cfg);

}  // namespace histwalk
