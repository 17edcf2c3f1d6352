#include "swarm3d/network.hpp"

#include <algorithm>
#include <stdexcept>

namespace s3d {

bool CommGraph::has_edge(int i, int j) const {
    if (i < 0 || j < 0 || i >= n || j >= n || i == j) return false;
    const auto& a = adj[static_cast<std::size_t>(i)];
    return std::binary_search(a.begin(), a.end(), j);
}

CommGraph build_graph(std::span<const Vec3> positions, double r_c) {
    if (!(r_c > 0.0)) throw std::invalid_argument("build_graph: r_c must be > 0");
    CommGraph g;
    g.n = static_cast<int>(positions.size());
    g.r_c = r_c;
    g.adj.assign(positions.size(), {});
    const double r2 = r_c * r_c;
    for (int i = 0; i < g.n; ++i)
        for (int j = i + 1; j < g.n; ++j)
            if (norm_sq(positions[static_cast<std::size_t>(i)] -
                        positions[static_cast<std::size_t>(j)]) <= r2) {
                g.adj[static_cast<std::size_t>(i)].push_back(j);
                g.adj[static_cast<std::size_t>(j)].push_back(i);
            }
    return g;
}

const std::vector<int>& neighbor_set(const CommGraph& g, int i) {
    if (i < 0 || i >= g.n) throw std::out_of_range("neighbor_set: index out of range");
    return g.adj[static_cast<std::size_t>(i)];
}

namespace {

bool connected(int n, const std::vector<std::vector<int>>& adj) {
    if (n <= 1) return true;
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : adj[static_cast<std::size_t>(v)])
            if (!seen[static_cast<std::size_t>(w)]) {
                seen[static_cast<std::size_t>(w)] = 1;
                ++count;
                stack.push_back(w);
            }
    }
    return count == n;
}

}  // namespace

bool is_connected(const CommGraph& g) {
    if (g.n < 1) throw std::invalid_argument("is_connected: empty graph");
    return connected(g.n, g.adj);
}

bool union_connected_over_window(std::span<const CommGraph> graphs) {
    if (graphs.empty())
        throw std::invalid_argument("union_connected_over_window: empty window");
    const int n = graphs.front().n;
    std::vector<std::vector<int>> merged(static_cast<std::size_t>(n));
    for (const CommGraph& g : graphs) {
        if (g.n != n)
            throw std::invalid_argument("union_connected_over_window: mismatched n");
        for (int i = 0; i < n; ++i)
            for (int j : g.adj[static_cast<std::size_t>(i)])
                merged[static_cast<std::size_t>(i)].push_back(j);
    }
    return connected(n, merged);
}

std::vector<GossipRecord> gossip_exchange(const std::vector<GossipRecord>& records,
                                          const CommGraph& g) {
    if (static_cast<int>(records.size()) != g.n)
        throw std::invalid_argument("gossip_exchange: one record per agent required");
    std::vector<GossipRecord> out = records;
    for (int i = 0; i < g.n; ++i) {
        GossipRecord& r = out[static_cast<std::size_t>(i)];
        for (int j : g.adj[static_cast<std::size_t>(i)]) {
            const GossipRecord& src = records[static_cast<std::size_t>(j)];
            r.visited_vertices.insert(src.visited_vertices.begin(),
                                      src.visited_vertices.end());
            r.detected_targets.insert(src.detected_targets.begin(),
                                      src.detected_targets.end());
        }
    }
    return out;
}

}  // namespace s3d
