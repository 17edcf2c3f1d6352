#pragma once

#include <cstdint>
#include <span>
#include <unordered_set>
#include <vector>

#include "swarm3d/lattice.hpp"
#include "swarm3d/vec3.hpp"

namespace s3d {

// Range-limited communication graph G(K): edge (i,j) iff ||p_i - p_j|| <= r_c.
struct CommGraph {
    int n = 0;
    double r_c = 0.0;
    std::vector<std::vector<int>> adj;  // sorted neighbor lists, no self loops

    bool has_edge(int i, int j) const;
};

CommGraph build_graph(std::span<const Vec3> positions, double r_c);

const std::vector<int>& neighbor_set(const CommGraph& g, int i);

bool is_connected(const CommGraph& g);

// Joint connectivity over a window: true iff the union of all edge sets is a
// connected graph on the common vertex set.
bool union_connected_over_window(std::span<const CommGraph> graphs);

// Shared search knowledge carried by each agent and merged on contact.
struct GossipRecord {
    VertexKeySet visited_vertices;
    std::unordered_set<int> detected_targets;
    int sender = -1;
    std::int64_t tick = 0;
};

// One synchronous round: every agent's record becomes the union of its own and
// its graph neighbors' records. Sets only grow.
std::vector<GossipRecord> gossip_exchange(const std::vector<GossipRecord>& records,
                                          const CommGraph& g);

}  // namespace s3d
