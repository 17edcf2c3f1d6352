#pragma once

#include <span>
#include <vector>

#include "swarm3d/lattice.hpp"
#include "swarm3d/network.hpp"
#include "swarm3d/vec3.hpp"

namespace s3d {

// Per-agent consensus variables: grid-seed coordinates (x, y, z), orientation
// (theta, psi) and formation speed v. Each is repeatedly replaced by the average
// over the agent and its communication neighbors.
struct ConsensusState {
    double x = 0.0, y = 0.0, z = 0.0;
    double theta = 0.0, psi = 0.0;
    double v = 0.0;
};

// Plain equal-weight averaging: each variable becomes
// (own + sum of neighbors) / (1 + |N_i|), all agents synchronously from tick-K values.
std::vector<ConsensusState> consensus_step(std::span<const ConsensusState> states,
                                           const CommGraph& g);

// Convergence metric: max over the six variables of (max - min) across agents.
double consensus_spread(std::span<const ConsensusState> states);

// Formation-frame rule: the positional variables track the swarm mass center,
//   x~_i(k+1) = [ (x_i + x~_i) + sum_j (x_j + x~_j) ] / (1 + |N_i|) - x_i(k+1),
// so x_i + x~_i converges to a common value even while agents move; theta, psi
// and v average plainly.
std::vector<ConsensusState> formation_center_consensus_step(
    std::span<const ConsensusState> states, std::span<const Vec3> positions,
    std::span<const Vec3> next_positions, const CommGraph& g);

// Snap p onto the grid the agent currently believes in: the lattice of the given
// kind and r_s seeded at the agent's (x, y, z) consensus variables.
Vec3 snap_to_grid(const LatticeSpec& spec, const ConsensusState& state, Vec3 p);

// Agents treat the grid as common once consensus_spread falls below this.
inline constexpr double kConsensusTolerance = 1e-6;

}  // namespace s3d
