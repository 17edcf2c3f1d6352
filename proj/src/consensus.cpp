#include "swarm3d/consensus.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace s3d {

namespace {

void check_sizes(std::size_t states, const CommGraph& g) {
    if (states != static_cast<std::size_t>(g.n))
        throw std::invalid_argument("consensus: one state per agent required");
}

}  // namespace

std::vector<ConsensusState> consensus_step(std::span<const ConsensusState> states,
                                           const CommGraph& g) {
    check_sizes(states.size(), g);
    std::vector<ConsensusState> out(states.size());
    for (int i = 0; i < g.n; ++i) {
        const auto& nbrs = g.adj[static_cast<std::size_t>(i)];
        ConsensusState acc = states[static_cast<std::size_t>(i)];
        for (int j : nbrs) {
            const ConsensusState& s = states[static_cast<std::size_t>(j)];
            acc.x += s.x;
            acc.y += s.y;
            acc.z += s.z;
            acc.theta += s.theta;
            acc.psi += s.psi;
            acc.v += s.v;
        }
        const double w = 1.0 / (1.0 + static_cast<double>(nbrs.size()));
        out[static_cast<std::size_t>(i)] = {acc.x * w,     acc.y * w,   acc.z * w,
                                            acc.theta * w, acc.psi * w, acc.v * w};
    }
    return out;
}

double consensus_spread(std::span<const ConsensusState> states) {
    if (states.empty()) throw std::invalid_argument("consensus_spread: empty input");
    double lo[6], hi[6];
    auto fields = [](const ConsensusState& s) {
        return std::array<double, 6>{s.x, s.y, s.z, s.theta, s.psi, s.v};
    };
    auto first = fields(states.front());
    for (int f = 0; f < 6; ++f) lo[f] = hi[f] = first[static_cast<std::size_t>(f)];
    for (const ConsensusState& s : states) {
        auto v = fields(s);
        for (int f = 0; f < 6; ++f) {
            lo[f] = std::min(lo[f], v[static_cast<std::size_t>(f)]);
            hi[f] = std::max(hi[f], v[static_cast<std::size_t>(f)]);
        }
    }
    double spread = 0.0;
    for (int f = 0; f < 6; ++f) spread = std::max(spread, hi[f] - lo[f]);
    return spread;
}

std::vector<ConsensusState> formation_center_consensus_step(
    std::span<const ConsensusState> states, std::span<const Vec3> positions,
    std::span<const Vec3> next_positions, const CommGraph& g) {
    check_sizes(states.size(), g);
    if (positions.size() != states.size() || next_positions.size() != states.size())
        throw std::invalid_argument("formation consensus: arrays must be aligned");
    std::vector<ConsensusState> out(states.size());
    for (int i = 0; i < g.n; ++i) {
        const std::size_t ui = static_cast<std::size_t>(i);
        const auto& nbrs = g.adj[ui];
        const double w = 1.0 / (1.0 + static_cast<double>(nbrs.size()));
        double sx = states[ui].x + positions[ui].x;
        double sy = states[ui].y + positions[ui].y;
        double sz = states[ui].z + positions[ui].z;
        double st = states[ui].theta, sp = states[ui].psi, sv = states[ui].v;
        for (int j : nbrs) {
            const std::size_t uj = static_cast<std::size_t>(j);
            sx += states[uj].x + positions[uj].x;
            sy += states[uj].y + positions[uj].y;
            sz += states[uj].z + positions[uj].z;
            st += states[uj].theta;
            sp += states[uj].psi;
            sv += states[uj].v;
        }
        out[ui] = {sx * w - next_positions[ui].x, sy * w - next_positions[ui].y,
                   sz * w - next_positions[ui].z, st * w, sp * w, sv * w};
    }
    return out;
}

Vec3 snap_to_grid(const LatticeSpec& spec, const ConsensusState& state, Vec3 p) {
    LatticeSpec believed{spec.kind, {state.x, state.y, state.z}, spec.r_s};
    return nearest_vertex(believed, p);
}

}  // namespace s3d
