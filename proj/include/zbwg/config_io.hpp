#pragma once

#include "zbwg/dirac.hpp"
#include "zbwg/sweep.hpp"

#include <string>
#include <vector>

namespace zbwg {

// Full resolved run configuration: every key a command can read, with all
// defaults materialized. Config files are `key = value` text (# comments);
// a manifest JSON produced by an earlier run is accepted in place of a
// config file and reproduces that run's resolved configuration exactly.
struct ResolvedConfig {
    LatticeConfig lattice;
    PropagationPlan plan;
    int k_nodes = 257;
    bool quadrature_check = true;
    double compare_window_zb_periods = 10.0;
    double compare_tolerance = 0.05;
    AxisSpec axis_x{SweepAxis::OmegaRatio, 0.4, 5.15, 96};
    AxisSpec axis_y{SweepAxis::GainRatio, 0.0, 1.0, 96};
    double low_omega_floor = 0.3;
    int q_count = 256;

    SweepSpec sweep_spec() const;
};

// Applies one `key=value` (or `key = value`) assignment. Unknown keys and
// unparsable values throw ConfigError.
void apply_override(ResolvedConfig& config, const std::string& assignment);

// Loads a config file (KV text, plain JSON, or a manifest JSON) and applies
// the overrides on top. An empty path yields the defaults.
ResolvedConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

std::string config_to_json(const ResolvedConfig& config); // ordered, lossless doubles
ResolvedConfig config_from_json(const std::string& json_text);

struct RunManifest {
    std::string command;
    std::string tool_version;
    double duration_seconds = 0.0;
    std::string termination; // "completed", "diverged" or "n/a"
    ResolvedConfig config;
    std::vector<std::string> outputs; // file names, relative to the manifest
};
void write_manifest(const RunManifest& manifest, const std::string& path);

struct CommandOutcome {
    Termination termination = Termination::Completed;
    std::vector<std::string> files;
};

// Command bodies shared by the CLI and the test suites. Each writes its
// data files plus <out_prefix>_manifest.json and returns the files written.
// Configuration problems throw ConfigError before any file is written;
// numeric failures (non-finite states, unresolved quadrature, failed
// decompositions) propagate as their exception types. A diverged run still
// writes the partial trajectory and reports Termination::Diverged.
CommandOutcome cmd_simulate(const ResolvedConfig& config, const std::string& out_prefix);
CommandOutcome cmd_analytic(const ResolvedConfig& config, const std::string& out_prefix);
CommandOutcome cmd_compare(const ResolvedConfig& config, const std::string& out_prefix);
CommandOutcome cmd_sweep(const ResolvedConfig& config, const std::string& out_prefix,
                         ExecMode mode = ExecMode::Parallel, int workers = 0);
CommandOutcome cmd_dispersion(const ResolvedConfig& config, const std::string& out_prefix);

} // namespace zbwg
