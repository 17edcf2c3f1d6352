#pragma once

#include <functional>
#include <map>
#include <string>

#include "swarm3d/scenario.hpp"

namespace s3d {

// Runs one scenario; output is a pure function of (config, seed).
RunOutput run_scenario(const ScenarioConfig& config);

struct BatchSummary {
    std::vector<std::uint64_t> seeds;
    std::vector<std::int64_t> steps;  // aligned with seeds
    std::vector<std::string> stop_reasons;
    double median_steps = 0;
    double mean_steps = 0;
    double iqr_steps = 0;
    int completed = 0;  // runs whose stop reason was not "horizon"
};

// Same config re-run with each seed; aggregation over per-seed step counts.
BatchSummary batch_run(const ScenarioConfig& config, const std::vector<std::uint64_t>& seeds);

// Quantile with linear interpolation (used for median / IQR).
double quantile(std::vector<double> values, double q);

void write_csv(const TrajectoryTable& table, const std::string& path);
TrajectoryTable read_csv(const std::string& path);

// Writes <base>_trajectory.csv and <base>_run.json under dir.
void write_outputs(const RunOutput& out, const std::string& dir, const std::string& base);

std::string batch_to_csv(const BatchSummary& summary);

// Named experiment presets (comparison tables and demos). Scenario presets return a
// config; table presets produce their CSV directly.
std::vector<std::string> preset_names();
bool is_table_preset(const std::string& name);
ScenarioConfig preset_scenario(const std::string& name, std::uint64_t seed);
std::string run_table_preset(const std::string& name);  // returns CSV text

// Region spanning m conventional cells per axis for the given lattice kind,
// centered at the origin-side corner at (0,0,0).
Region region_of_cells(LatticeKind kind, int m, double r_s);

}  // namespace s3d
