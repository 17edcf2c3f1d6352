#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "swarm3d/formation.hpp"
#include "swarm3d/lattice.hpp"
#include "swarm3d/search.hpp"
#include "swarm3d/shapes.hpp"
#include "swarm3d/vec3.hpp"

namespace s3d {

enum class Mode { coverage, shape, search, formation };
const char* to_string(Mode m);
Mode mode_from_string(const std::string& name);

struct TargetsSpec {
    enum class Placement { random, cluster, explicit_list };
    Placement placement = Placement::random;
    int count = 0;
    double cluster_radius_m = 1.0;
    std::vector<Vec3> positions_m;  // explicit_list
    bool mobile = false;
    double step_scale_m = 1.0;
};

struct FormationPart {
    FormationConfig config;
    double t_end_s = 200.0;
    bool anonymous = false;
    Region init_box_m{{0, 0, 0}, {50, 50, 50}};
    bool random_heading_consensus = false;
    int trajectory_stride = 1;
};

// One experiment, fully described. Field names carry units; the JSON grammar is
// documented in the README and kept stable.
struct ScenarioConfig {
    Mode mode = Mode::coverage;
    Region region{{0, 0, 0}, {10, 10, 10}};
    LatticeKind lattice = LatticeKind::truncated_octahedron;
    int n_agents = 1;
    double r_s_m = 1.0;
    double r_c_m = 2.0;
    std::uint64_t seed = 1;
    std::int64_t horizon_ticks = 10000;

    SearchStrategy strategy = SearchStrategy::neighbor_grid;
    SearchStopRule stop_rule = SearchStopRule::all_targets_found;
    LevyParams levy{2.0, 0.0};   // l_min_m 0 => one lattice neighbor spacing
    double normal_sigma_m = 0.0; // 0 => one lattice neighbor spacing
    TargetsSpec targets;

    std::optional<ShapePredicate> shape;
    Vec3 shape_center_m;  // predicate evaluated at p - center

    std::optional<Region> deploy_box_m;  // search: initial agent drop zone

    bool consensus_phase = true;  // coverage/shape: run St1 or drop on the grid

    std::optional<FormationPart> formation;

    bool record_trajectory = true;

    void validate() const;               // throws with field-level messages
    std::vector<std::string> warnings() const;
};

ScenarioConfig parse_scenario(const std::string& json_text);
ScenarioConfig load_scenario(const std::string& path);
// Canonical serialized form: sorted keys, stable float formatting.
std::string serialize_scenario(const ScenarioConfig& config);

struct Metrics {
    std::int64_t steps_to_stop = 0;
    std::string stop_reason;
    std::vector<std::pair<int, std::int64_t>> detection_ticks;
    std::vector<DetectionEvent> detection_events;  // tick, agent, target, position
    std::vector<double> coverage_fraction;
    std::int64_t consensus_ticks = 0;
    // Formation summary (present in formation mode).
    double peak_ey = 0, final_ey = 0, peak_ez = 0, final_ez = 0;
    double max_u_norm = 0, max_u_dot_c = 0, max_c_norm_err = 0;
    double min_v = 0, max_v = 0;
    bool assignment_all_distinct = false;
    std::int64_t last_assignment_change_epoch = -1;
    std::vector<std::string> warnings;
};

struct TrajectoryTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct RunOutput {
    Metrics metrics;
    TrajectoryTable trajectory;
    std::string sidecar_json;  // config + seed + warnings + metrics
};

}  // namespace s3d
