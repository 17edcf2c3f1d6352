#pragma once

#include <cstdint>
#include <functional>
#include <unordered_set>
#include <vector>

#include "swarm3d/vec3.hpp"

namespace s3d {

// The four space-filling cells used as covering grids. Each lattice is scaled so
// that every cell's circumsphere radius equals the sensing radius r_s: occupying
// all vertices (cell centers) inside a region then senses every point of it.
enum class LatticeKind {
    truncated_octahedron,
    cube,
    hexagonal_prism,
    rhombic_dodecahedron,
};

const char* to_string(LatticeKind kind);
LatticeKind lattice_kind_from_string(const std::string& name);

struct LatticeSpec {
    LatticeKind kind = LatticeKind::truncated_octahedron;
    Vec3 seed;      // grid origin (X, Y, Z); any vertex anchors the whole grid
    double r_s = 1.0;  // sensing radius, meters

    void validate() const {
        if (!finite(seed)) throw std::invalid_argument("lattice: seed must be finite");
        if (!(r_s > 0.0)) throw std::invalid_argument("lattice: r_s must be > 0");
    }
};

// Integer index triple identifying a lattice vertex; the canonical identity used
// for visited maps, occupancy and gossip payloads (no floating-point keys).
struct VertexKey {
    std::int64_t a1 = 0;
    std::int64_t a2 = 0;
    std::int64_t a3 = 0;

    friend bool operator==(const VertexKey&, const VertexKey&) = default;
    friend auto operator<=>(const VertexKey&, const VertexKey&) = default;
};

struct VertexKeyHash {
    std::size_t operator()(const VertexKey& k) const {
        std::uint64_t h = 0x9e3779b97f4a7c15ULL;
        auto mixin = [&h](std::uint64_t v) {
            h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        };
        mixin(static_cast<std::uint64_t>(k.a1));
        mixin(static_cast<std::uint64_t>(k.a2));
        mixin(static_cast<std::uint64_t>(k.a3));
        return static_cast<std::size_t>(h);
    }
};

using VertexKeySet = std::unordered_set<VertexKey, VertexKeyHash>;

// Vertex position for index triple (a1, a2, a3) in the seed-anchored frame.
Vec3 lattice_vertex(const LatticeSpec& spec, std::int64_t a1, std::int64_t a2,
                    std::int64_t a3);
Vec3 lattice_vertex(const LatticeSpec& spec, const VertexKey& key);

// Closest vertex to p; ties resolved toward the lexicographically smallest
// (x, y, z) position so replays are deterministic.
VertexKey nearest_key(const LatticeSpec& spec, Vec3 p);
Vec3 nearest_vertex(const LatticeSpec& spec, Vec3 p);

// Face-sharing cell neighbors: 14 for the truncated octahedron, 6 for the cube,
// 8 for the hexagonal prism, 12 for the rhombic dodecahedron.
std::vector<VertexKey> neighbor_keys(LatticeKind kind, const VertexKey& at);
// Throws if v is not a lattice vertex (distance above tolerance).
std::vector<Vec3> neighbor_vertices(const LatticeSpec& spec, Vec3 v);

// Covering set V-hat = lattice vertices inside the (closed) region.
// Keys come back sorted (a3, a2, a1 ascending) for deterministic iteration.
std::vector<VertexKey> covering_keys(const LatticeSpec& spec, const Region& region);
std::vector<Vec3> covering_set(const LatticeSpec& spec, const Region& region);

// Cell volume / circumsphere volume, closed form.
double volumetric_quotient(LatticeKind kind);
// Minimum R_c / R_s that keeps all face neighbors inside communication range
// (max neighbor spacing divided by r_s; 4/sqrt(5) for the truncated octahedron).
double min_connectivity_ratio(LatticeKind kind);
// Shortest and longest distance between face-neighboring vertices, in units of r_s.
double min_neighbor_spacing(LatticeKind kind);
double max_neighbor_spacing(LatticeKind kind);
// Cell volume for sensing radius r_s.
double cell_volume(LatticeKind kind, double r_s);
// Edge of the conventional (rectangular) repeating block, in units of r_s; a
// "m x m x m cell region" in scenario presets means m such blocks per axis.
double conventional_cell_edge(LatticeKind kind);

// Covering set with a membership index plus region-aware lookups; the shared
// substrate for the coverage and search runs.
struct CoveringIndex {
    LatticeSpec spec;
    Region region;
    std::vector<VertexKey> keys;      // sorted
    std::vector<Vec3> positions;      // aligned with keys
    VertexKeySet key_set;

    static CoveringIndex build(const LatticeSpec& spec, const Region& region);

    std::size_t size() const { return keys.size(); }
    bool contains(const VertexKey& k) const { return key_set.count(k) > 0; }

    // Face neighbors that are themselves covering vertices.
    std::vector<VertexKey> neighbors_in(const VertexKey& at) const;

    // Nearest covering vertex to p (nearest lattice vertex when it lies inside
    // the region, otherwise a scan over the covering set; same tie rule).
    VertexKey nearest_in(Vec3 p) const;
};

}  // namespace s3d
