#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "swarm3d/lattice.hpp"
#include "swarm3d/network.hpp"
#include "swarm3d/rng.hpp"

namespace s3d {

// Per-agent map of grid vertices known to have been visited (b_v flags);
// grows monotonically, merged with neighbors' maps through gossip.
struct VisitedMap {
    VertexKeySet visited;
};

struct TargetState {
    int id = 0;
    Vec3 position;
    bool detected = false;  // b_T, latching
    bool mobile = false;
    double step_scale = 0.0;  // sigma of the normal step length for mobile targets
};

// Heavy-tailed step lengths P(l) ~ l^-alpha on [l_min, inf), 1 < alpha < 3.
struct LevyParams {
    double alpha = 2.0;
    double l_min = 1.0;

    void validate() const {
        if (!(alpha > 1.0 && alpha < 3.0))
            throw std::invalid_argument("levy: alpha must be in (1, 3)");
        if (!(l_min > 0.0)) throw std::invalid_argument("levy: l_min must be > 0");
    }
};

enum class SearchStrategy {
    neighbor_grid,       // unvisited-neighbor random walk with gossip maps
    levy_grid,           // Levy length + sphere direction, snapped to the grid
    levy_continuous,     // same draw, endpoint not snapped (baseline)
    grid_normal_length,  // grid walk with |N(0, sigma)| lengths
};
enum class SearchStopRule { all_visited, all_targets_found };
enum class SearchStopReason { all_visited, all_targets_found, horizon };

const char* to_string(SearchStrategy s);
const char* to_string(SearchStopReason r);
SearchStrategy search_strategy_from_string(const std::string& name);

// Binary sensing: returns ids of previously undetected targets within closed
// distance r_s of agent_p and latches their detected flags.
std::vector<int> detect(Vec3 agent_p, std::vector<TargetState>& targets, double r_s);

// Eq-style two-case rule: uniform over unvisited in-region neighbors if any,
// else uniform over all in-region neighbors; marks the chosen vertex visited.
// An isolated vertex (no in-region neighbors) is its own successor.
VertexKey grid_search_step(const VertexKey& at, VisitedMap& visited,
                           const CoveringIndex& cov, RngStream& rng);

bool stop_all_visited(std::span<const VisitedMap> maps, const CoveringIndex& cov);
bool stop_all_targets_found(std::span<const TargetState> targets);

// Inverse-transform Pareto tail: l = l_min * u^(-1/(alpha-1)), u in (0, 1].
double levy_length_from_u(const LevyParams& params, double u);
double levy_sample_length(const LevyParams& params, RngStream& rng);

inline constexpr int kRejectionBudget = 1000;

// Draw (sphere-uniform direction, Levy length) until the continuous endpoint
// lies inside the region, then snap to the nearest covering vertex.
// Throws std::runtime_error once the rejection budget is exhausted.
VertexKey levy_grid_step(Vec3 at, const Region& region, const LevyParams& params,
                         const CoveringIndex& cov, RngStream& rng);

// Same draw, endpoint kept continuous.
Vec3 levy_continuous_step(Vec3 at, const Region& region, const LevyParams& params,
                          RngStream& rng);

// Grid walk with half-normal lengths (the grid-normal comparison strategy).
VertexKey grid_normal_step(Vec3 at, const Region& region, double sigma,
                           const CoveringIndex& cov, RngStream& rng);

// Mobile-target kinematics: heading angles uniform in [0, 2pi), length from
// N(0, step_scale); proposals leaving the region are redrawn.
TargetState moving_target_step(const TargetState& t, const Region& region,
                               RngStream& rng);

struct SearchScenario {
    LatticeKind kind = LatticeKind::truncated_octahedron;
    double r_s = 1.0;
    double r_c = 2.0;
    Region region;
    int n_agents = 1;
    SearchStrategy strategy = SearchStrategy::neighbor_grid;
    SearchStopRule stop_rule = SearchStopRule::all_targets_found;
    LevyParams levy;          // levy_grid / levy_continuous
    double normal_sigma = 0;  // grid_normal_length; 0 => min neighbor spacing
    std::vector<TargetState> targets;
    // Initial agent drop zone; defaults to the whole region. The two-stage
    // pipeline starts searchers wherever the consensus phase parked them, which
    // is typically a small patch of the grid.
    std::optional<Region> deploy_box;
    std::uint64_t seed = 0;
    std::int64_t horizon = 100000;
    bool record_trajectory = false;
};

struct DetectionEvent {
    std::int64_t tick = 0;
    int agent = 0;
    int target = 0;
    Vec3 position;  // agent position at detection
};

struct SearchResult {
    std::int64_t steps = 0;
    SearchStopReason reason = SearchStopReason::horizon;
    std::vector<DetectionEvent> detections;
    // tick at which each stop condition first held (-1 if never); lets one
    // trajectory answer both stop-rule questions.
    std::int64_t first_all_targets_tick = -1;
    std::int64_t first_all_visited_tick = -1;
    std::vector<std::vector<Vec3>> agent_history;   // when recording
    std::vector<std::vector<Vec3>> target_history;  // when recording
};

SearchResult run_search(const SearchScenario& scenario);

}  // namespace s3d
