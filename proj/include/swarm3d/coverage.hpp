#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "swarm3d/consensus.hpp"
#include "swarm3d/lattice.hpp"
#include "swarm3d/rng.hpp"
#include "swarm3d/shapes.hpp"

namespace s3d {

// Pre-move snapshot of who sits where. For duplicated vertices (possible right
// after the consensus phase) the lowest agent index is recorded.
struct OccupancyView {
    std::unordered_map<VertexKey, int, VertexKeyHash> occupied;
    std::int64_t tick = 0;
};

// State of one random-spread run. Agents live on vertices of `allowed`, which is
// the full covering set for plain coverage and the in-shape subset during the
// third stage of shape formation.
struct CoverageRun {
    LatticeSpec spec;
    Region region;
    CoveringIndex allowed;
    std::vector<VertexKey> agent_keys;
    std::uint64_t rng_seed = 0;
    std::int64_t steps_taken = 0;

    std::vector<Vec3> agent_positions() const;
};

OccupancyView occupancy_of(const CoverageRun& run);

// One synchronous tick of the random spread rule: every agent moves to a
// uniformly random element of S_i = {current vertex} u {unoccupied allowed
// neighbors}, each with probability 1/|S_i|. The rule is neighborhood-agnostic:
// |S_i| is at most 1 + (face neighbors of the cell), i.e. 15 on the truncated
// octahedral grid, 7 on the cubic grid. Occupancy is evaluated against the
// passed pre-move snapshot; when several agents pick the same vacant vertex one
// of them wins uniformly at random and the others stay put for this tick.
CoverageRun spread_step(const CoverageRun& run, const OccupancyView& occupancy);

// True iff every allowed vertex carries an agent.
bool is_coverage_complete(const CoverageRun& run, const OccupancyView& occupancy);

enum class CoverageStopReason { complete, horizon };

struct CoverageScenario {
    LatticeKind kind = LatticeKind::truncated_octahedron;
    double r_s = 1.0;
    double r_c = 2.0;
    Region region;
    int n_agents = 0;
    std::uint64_t seed = 0;
    std::int64_t horizon = 10000;
    // Consensus phase: when false, agents are dropped uniformly at random onto
    // covering vertices with the common grid given (isolates the spread Markov
    // dynamics, the way the absorption experiments are run).
    bool consensus_phase = true;
    std::int64_t consensus_cap = 5000;
    bool record_trajectory = false;
    std::optional<ShapePredicate> shape;  // set => three-stage shape formation
    Vec3 shape_center;                    // predicate evaluated at p - center
};

struct CoverageOutcome {
    CoverageRun run;
    CoverageStopReason reason = CoverageStopReason::horizon;
    std::int64_t consensus_ticks = 0;
    double consensus_final_spread = 0.0;
    std::vector<double> coverage_fraction;        // per spread tick
    std::vector<std::vector<Vec3>> position_history;  // only when recording
};

// Plain coverage: (optional consensus+snap phase), then random spread over the
// covering set until complete or horizon.
CoverageOutcome run_coverage(const CoverageScenario& scenario);

// Three-stage shape formation: St1 consensus+snap, St2 relocate to the nearest
// in-shape vertex, St3 random spread restricted to in-shape vertices.
// Throws if the shape contains no covering vertex.
CoverageOutcome run_shape_formation(const CoverageScenario& scenario);

}  // namespace s3d
