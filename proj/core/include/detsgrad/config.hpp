#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "detsgrad/sim.hpp"

namespace detsgrad {

// Declarative experiment description: a SimConfig plus run-harness fields.
// The on-disk form is a JSON file, schema-validated with precise field paths;
// unknown keys are rejected.
struct ExperimentConfig {
    std::string name = "experiment";
    std::vector<std::uint64_t> seeds = {1};
    std::string output_dir = "runs/out";
    SimConfig sim;
};

// Parses and validates the JSON text. `source` names the origin for
// diagnostics. Throws ConfigError carrying the JSON pointer of the offending
// field.
ExperimentConfig parse_experiment_json(const std::string& text, const std::string& source);

ExperimentConfig load_experiment_file(const std::filesystem::path& file);

// Canonical JSON echo of a config (stable key order, round-trips through
// parse_experiment_json).
std::string experiment_to_json(const ExperimentConfig& config, int indent = 2);

// Applies "dotted.path=value" overrides to raw JSON text; values parse as
// JSON scalars when possible, else as strings. Throws ConfigError on a path
// that does not exist in the schema.
std::string apply_overrides(const std::string& json_text, std::span<const std::string> overrides);

// Built-in experiment presets covering the five-experiment matrix at two
// scales ("paper-*": full-scale parameters, expects the IDX files on disk;
// "desk-*": minutes-scale runs on generated data or synthetic objectives).
std::vector<std::string> preset_names();
std::string preset_json(const std::string& name);  // throws ConfigError for unknown names

// Per-seed run summary JSON (accuracies when a classifier context exists).
std::string run_summary_json(const ExperimentConfig& config, std::uint64_t seed,
                             const SimResult& result);

// Mean/stddev aggregate across the per-seed summaries of an experiment.
std::string aggregate_summary_json(const std::vector<std::string>& summary_jsons);

}  // namespace detsgrad
