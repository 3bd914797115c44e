#pragma once

#include "sunburst/dynamics.hpp"
#include "sunburst/spectral.hpp"
#include "sunburst/types.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace sunburst {

/// Version tag recorded in run manifests.
const char* version_tag();

struct TimeGridSpec {
    double t_min = 0.0;
    double t_max = 10.0;
    int points = 1000;

    RealVector materialize() const;
};

/// Configuration of one reproduction run, mirrored by the JSON config file.
struct RunConfig {
    std::string experiment;  // rratio_sweep | quench_limits | coherence_table
                             // | ipr_trace | transition_curve
    HamiltonianSpec spec;
    std::optional<HamiltonianSpec> spec_xxz;  // second curve of the sweep
    std::vector<double> kappa_grid;
    TimeGridSpec time_grid;
    double window_lo = 0.0;  // averaging window for time statistics
    double window_hi = 0.0;
    std::vector<int> coherence_ladder;
    int realizations = 50;
    double trim_fraction = 0.10;
    std::uint64_t seed = 0;
    std::string out = "results";

    void validate() const;
};

/// Parses a config JSON document / file; unknown experiment names and
/// malformed fields raise std::invalid_argument. Fields not present fall
/// back to per-experiment defaults.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const RunConfig& config);

// Deterministic shortest round-trip decimal rendering; CSV outputs are
// byte-identical for identical config + seed.
std::string format_double(double v);

void write_sweep_csv(const std::filesystem::path& path,
                     const std::vector<SweepRow>& rows);
void write_trace_csv(const std::filesystem::path& path, const QuenchTrace& trace);

// One subcommand per reproduced figure/table. Each writes its CSV outputs
// plus a manifest.json sidecar (config echo, version, duration, checksums)
// into the output directory; the manifest appears only on completion.
void cmd_rratio(const RunConfig& config);
void cmd_quench_limits(const RunConfig& config);
void cmd_coherence_table(const RunConfig& config);
void cmd_ipr_trace(const RunConfig& config);
void cmd_transition_curve(const RunConfig& config);

/// Dispatch by config.experiment.
void run_experiment(const RunConfig& config);

}  // namespace sunburst
