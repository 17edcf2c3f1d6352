#include "swarm3d/lattice.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace s3d {

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);
const double kSqrt3 = std::sqrt(3.0);
const double kSqrt5 = std::sqrt(5.0);

// Per-kind step lengths in units of r_s.
//   truncated octahedron: BCC with placement step s = 2/sqrt(5); square-face
//     neighbors at 2s along the axes, hexagon-face neighbors at s*sqrt(3).
//   cube: simple cubic, edge 2/sqrt(3).
//   hexagonal prism: planar hex lattice with spacing sqrt(2), stacked every
//     2/sqrt(3) (the prism aspect that maximizes the volumetric quotient).
//   rhombic dodecahedron: FCC with conventional cube edge 2, neighbors sqrt(2).
struct Steps {
    double to_s;
    double cube_d;
    double hex_d;
    double hex_h;
    double fcc_u;
};

Steps steps_for(double r_s) {
    return {2.0 * r_s / kSqrt5, 2.0 * r_s / kSqrt3, kSqrt2 * r_s, 2.0 * r_s / kSqrt3,
            r_s};
}

struct Sublattice {
    Vec3 offset;   // added to seed
    Vec3 step;     // per-axis spacing of the rectangular sublattice
    int parity;    // sublattice id used when mapping back to a VertexKey
};

// Each lattice decomposes into 1, 2 or 4 rectangular sublattices; nearest-vertex
// queries round within each and compare.
std::vector<Sublattice> sublattices(const LatticeSpec& spec) {
    const Steps st = steps_for(spec.r_s);
    switch (spec.kind) {
        case LatticeKind::truncated_octahedron: {
            double c = 2.0 * st.to_s;
            return {{{0, 0, 0}, {c, c, c}, 0},
                    {{st.to_s, st.to_s, st.to_s}, {c, c, c}, 1}};
        }
        case LatticeKind::cube:
            return {{{0, 0, 0}, {st.cube_d, st.cube_d, st.cube_d}, 0}};
        case LatticeKind::hexagonal_prism: {
            double row = st.hex_d * kSqrt3;
            return {{{0, 0, 0}, {st.hex_d, row, st.hex_h}, 0},
                    {{0.5 * st.hex_d, 0.5 * row, 0}, {st.hex_d, row, st.hex_h}, 1}};
        }
        case LatticeKind::rhombic_dodecahedron: {
            double c = 2.0 * st.fcc_u;
            return {{{0, 0, 0}, {c, c, c}, 0},
                    {{st.fcc_u, st.fcc_u, 0}, {c, c, c}, 1},
                    {{st.fcc_u, 0, st.fcc_u}, {c, c, c}, 2},
                    {{0, st.fcc_u, st.fcc_u}, {c, c, c}, 3}};
        }
    }
    throw std::logic_error("sublattices: bad kind");
}

// Map a sublattice cell index (m1, m2, m3) back to the lattice's VertexKey.
VertexKey key_from_sublattice(LatticeKind kind, int parity, std::int64_t m1,
                              std::int64_t m2, std::int64_t m3) {
    switch (kind) {
        case LatticeKind::truncated_octahedron:
            // position in s units: (2*m1 + parity, 2*m2 + parity, 2*m3 + parity)
            return {m1 - m3, m2 - m3, 2 * m3 + parity};
        case LatticeKind::cube:
            return {m1, m2, m3};
        case LatticeKind::hexagonal_prism:
            // rows: a2 = 2*m2 + parity, x index m1 = a1 + m2
            return {m1 - m2, 2 * m2 + parity, m3};
        case LatticeKind::rhombic_dodecahedron: {
            // position in u units: 2*m + offset with offsets listed above
            std::int64_t i = 2 * m1, j = 2 * m2, k = 2 * m3;
            if (parity == 1) { i += 1; j += 1; }
            if (parity == 2) { i += 1; k += 1; }
            if (parity == 3) { j += 1; k += 1; }
            return {(i + j - k) / 2, (i - j + k) / 2, (-i + j + k) / 2};
        }
    }
    throw std::logic_error("key_from_sublattice: bad kind");
}

// Face-neighbor index offsets, fixed order (determines draw order downstream).
const std::vector<VertexKey>& neighbor_offsets(LatticeKind kind) {
    static const std::vector<VertexKey> to = {
        // square faces (+-2s along axes)
        {1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {-1, -1, 2}, {1, 1, -2},
        // hexagonal faces (+-s, +-s, +-s)
        {0, 0, 1}, {0, 0, -1}, {1, 1, -1}, {-1, -1, 1},
        {0, -1, 1}, {-1, 0, 1}, {1, 0, -1}, {0, 1, -1}};
    static const std::vector<VertexKey> cube = {{1, 0, 0},  {-1, 0, 0}, {0, 1, 0},
                                                {0, -1, 0}, {0, 0, 1},  {0, 0, -1}};
    static const std::vector<VertexKey> hex = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0},
                                               {0, -1, 0}, {1, -1, 0}, {-1, 1, 0},
                                               {0, 0, 1}, {0, 0, -1}};
    static const std::vector<VertexKey> rhombic = {
        {1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1},
        {0, 1, -1}, {0, -1, 1}, {1, -1, 0}, {-1, 1, 0}, {1, 0, -1}, {-1, 0, 1}};
    switch (kind) {
        case LatticeKind::truncated_octahedron: return to;
        case LatticeKind::cube: return cube;
        case LatticeKind::hexagonal_prism: return hex;
        case LatticeKind::rhombic_dodecahedron: return rhombic;
    }
    throw std::logic_error("neighbor_offsets: bad kind");
}

}  // namespace

const char* to_string(LatticeKind kind) {
    switch (kind) {
        case LatticeKind::truncated_octahedron: return "truncated_octahedron";
        case LatticeKind::cube: return "cube";
        case LatticeKind::hexagonal_prism: return "hexagonal_prism";
        case LatticeKind::rhombic_dodecahedron: return "rhombic_dodecahedron";
    }
    throw std::logic_error("to_string: bad kind");
}

LatticeKind lattice_kind_from_string(const std::string& name) {
    if (name == "truncated_octahedron" || name == "to")
        return LatticeKind::truncated_octahedron;
    if (name == "cube") return LatticeKind::cube;
    if (name == "hexagonal_prism" || name == "hex")
        return LatticeKind::hexagonal_prism;
    if (name == "rhombic_dodecahedron" || name == "rhombic")
        return LatticeKind::rhombic_dodecahedron;
    throw std::invalid_argument("unknown lattice kind: " + name);
}

Vec3 lattice_vertex(const LatticeSpec& spec, std::int64_t a1, std::int64_t a2,
                    std::int64_t a3) {
    const Steps st = steps_for(spec.r_s);
    const double f1 = static_cast<double>(a1);
    const double f2 = static_cast<double>(a2);
    const double f3 = static_cast<double>(a3);
    switch (spec.kind) {
        case LatticeKind::truncated_octahedron:
            return spec.seed + Vec3{(2.0 * f1 + f3) * st.to_s, (2.0 * f2 + f3) * st.to_s,
                                    f3 * st.to_s};
        case LatticeKind::cube:
            return spec.seed + Vec3{f1 * st.cube_d, f2 * st.cube_d, f3 * st.cube_d};
        case LatticeKind::hexagonal_prism:
            return spec.seed + Vec3{(f1 + 0.5 * f2) * st.hex_d,
                                    f2 * (kSqrt3 / 2.0) * st.hex_d, f3 * st.hex_h};
        case LatticeKind::rhombic_dodecahedron:
            return spec.seed + Vec3{(f1 + f2) * st.fcc_u, (f1 + f3) * st.fcc_u,
                                    (f2 + f3) * st.fcc_u};
    }
    throw std::logic_error("lattice_vertex: bad kind");
}

Vec3 lattice_vertex(const LatticeSpec& spec, const VertexKey& key) {
    return lattice_vertex(spec, key.a1, key.a2, key.a3);
}

VertexKey nearest_key(const LatticeSpec& spec, Vec3 p) {
    const double tie_eps = 1e-9 * spec.r_s;
    double best_d2 = std::numeric_limits<double>::infinity();
    VertexKey best{};
    Vec3 best_pos{};
    bool have = false;
    for (const Sublattice& sub : sublattices(spec)) {
        Vec3 rel = p - spec.seed - sub.offset;
        std::int64_t b1 = static_cast<std::int64_t>(std::floor(rel.x / sub.step.x));
        std::int64_t b2 = static_cast<std::int64_t>(std::floor(rel.y / sub.step.y));
        std::int64_t b3 = static_cast<std::int64_t>(std::floor(rel.z / sub.step.z));
        for (int dx = 0; dx <= 1; ++dx)
            for (int dy = 0; dy <= 1; ++dy)
                for (int dz = 0; dz <= 1; ++dz) {
                    VertexKey k = key_from_sublattice(spec.kind, sub.parity, b1 + dx,
                                                      b2 + dy, b3 + dz);
                    Vec3 pos = lattice_vertex(spec, k);
                    double d2 = norm_sq(pos - p);
                    double scale = std::max({d2, best_d2 == std::numeric_limits<double>::infinity() ? 0.0 : best_d2,
                                             spec.r_s * spec.r_s});
                    if (!have || d2 < best_d2 - 1e-12 * scale) {
                        best_d2 = d2; best = k; best_pos = pos; have = true;
                    } else if (d2 <= best_d2 + 1e-12 * scale &&
                               lex_less(pos, best_pos, tie_eps)) {
                        best_d2 = std::min(best_d2, d2); best = k; best_pos = pos;
                    }
                }
    }
    return best;
}

Vec3 nearest_vertex(const LatticeSpec& spec, Vec3 p) {
    return lattice_vertex(spec, nearest_key(spec, p));
}

std::vector<VertexKey> neighbor_keys(LatticeKind kind, const VertexKey& at) {
    std::vector<VertexKey> out;
    const auto& offs = neighbor_offsets(kind);
    out.reserve(offs.size());
    for (const VertexKey& d : offs)
        out.push_back({at.a1 + d.a1, at.a2 + d.a2, at.a3 + d.a3});
    return out;
}

std::vector<Vec3> neighbor_vertices(const LatticeSpec& spec, Vec3 v) {
    VertexKey k = nearest_key(spec, v);
    Vec3 snapped = lattice_vertex(spec, k);
    if (distance(snapped, v) > 1e-6 * spec.r_s)
        throw std::invalid_argument("neighbor_vertices: point is not a lattice vertex");
    std::vector<Vec3> out;
    for (const VertexKey& nk : neighbor_keys(spec.kind, k))
        out.push_back(lattice_vertex(spec, nk));
    return out;
}

std::vector<VertexKey> covering_keys(const LatticeSpec& spec, const Region& region) {
    spec.validate();
    region.validate();

    // Index bounds from the region corners expanded by one cell, then filter.
    const double margin = max_neighbor_spacing(spec.kind) * spec.r_s;
    Region grown = region.expanded(margin);
    const Steps st = steps_for(spec.r_s);

    auto frac_index = [&](Vec3 p) -> std::array<double, 3> {
        Vec3 rel = p - spec.seed;
        switch (spec.kind) {
            case LatticeKind::truncated_octahedron: {
                double k = rel.z / st.to_s;
                return {(rel.x / st.to_s - k) / 2.0, (rel.y / st.to_s - k) / 2.0, k};
            }
            case LatticeKind::cube:
                return {rel.x / st.cube_d, rel.y / st.cube_d, rel.z / st.cube_d};
            case LatticeKind::hexagonal_prism: {
                double a2 = rel.y / ((kSqrt3 / 2.0) * st.hex_d);
                return {rel.x / st.hex_d - 0.5 * a2, a2, rel.z / st.hex_h};
            }
            case LatticeKind::rhombic_dodecahedron: {
                double i = rel.x / st.fcc_u, j = rel.y / st.fcc_u, k = rel.z / st.fcc_u;
                return {(i + j - k) / 2.0, (i - j + k) / 2.0, (-i + j + k) / 2.0};
            }
        }
        throw std::logic_error("frac_index: bad kind");
    };

    std::array<std::int64_t, 3> lo{}, hi{};
    bool first = true;
    for (int cx = 0; cx <= 1; ++cx)
        for (int cy = 0; cy <= 1; ++cy)
            for (int cz = 0; cz <= 1; ++cz) {
                Vec3 corner{cx ? grown.max_corner.x : grown.min_corner.x,
                            cy ? grown.max_corner.y : grown.min_corner.y,
                            cz ? grown.max_corner.z : grown.min_corner.z};
                auto f = frac_index(corner);
                for (int i = 0; i < 3; ++i) {
                    auto lo_i = static_cast<std::int64_t>(std::floor(f[i])) - 2;
                    auto hi_i = static_cast<std::int64_t>(std::ceil(f[i])) + 2;
                    if (first || lo_i < lo[i]) lo[i] = lo_i;
                    if (first || hi_i > hi[i]) hi[i] = hi_i;
                }
                first = false;
            }

    std::vector<VertexKey> keys;
    for (std::int64_t a3 = lo[2]; a3 <= hi[2]; ++a3)
        for (std::int64_t a2 = lo[1]; a2 <= hi[1]; ++a2)
            for (std::int64_t a1 = lo[0]; a1 <= hi[0]; ++a1) {
                VertexKey k{a1, a2, a3};
                if (region.contains(lattice_vertex(spec, k))) keys.push_back(k);
            }
    return keys;
}

std::vector<Vec3> covering_set(const LatticeSpec& spec, const Region& region) {
    std::vector<Vec3> out;
    for (const VertexKey& k : covering_keys(spec, region))
        out.push_back(lattice_vertex(spec, k));
    return out;
}

double volumetric_quotient(LatticeKind kind) {
    switch (kind) {
        case LatticeKind::truncated_octahedron:
            return 24.0 / (5.0 * kSqrt5 * kPi);   // ~0.6833
        case LatticeKind::cube:
            return 2.0 / (kSqrt3 * kPi);          // ~0.3676
        case LatticeKind::hexagonal_prism:
        case LatticeKind::rhombic_dodecahedron:
            return 3.0 / (2.0 * kPi);             // ~0.4775
    }
    throw std::logic_error("volumetric_quotient: bad kind");
}

double min_neighbor_spacing(LatticeKind kind) {
    LatticeSpec unit{kind, {0, 0, 0}, 1.0};
    double best = std::numeric_limits<double>::infinity();
    for (const VertexKey& k : neighbor_keys(kind, VertexKey{}))
        best = std::min(best, norm(lattice_vertex(unit, k)));
    return best;
}

double max_neighbor_spacing(LatticeKind kind) {
    LatticeSpec unit{kind, {0, 0, 0}, 1.0};
    double best = 0.0;
    for (const VertexKey& k : neighbor_keys(kind, VertexKey{}))
        best = std::max(best, norm(lattice_vertex(unit, k)));
    return best;
}

double min_connectivity_ratio(LatticeKind kind) { return max_neighbor_spacing(kind); }

double cell_volume(LatticeKind kind, double r_s) {
    double sphere = (4.0 / 3.0) * kPi * r_s * r_s * r_s;
    return volumetric_quotient(kind) * sphere;
}

double conventional_cell_edge(LatticeKind kind) {
    switch (kind) {
        case LatticeKind::truncated_octahedron: return 4.0 / kSqrt5;  // BCC cube
        case LatticeKind::cube: return 2.0 / kSqrt3;
        case LatticeKind::hexagonal_prism: return kSqrt2;             // planar pitch
        case LatticeKind::rhombic_dodecahedron: return 2.0;           // FCC cube
    }
    throw std::logic_error("conventional_cell_edge: bad kind");
}

CoveringIndex CoveringIndex::build(const LatticeSpec& spec, const Region& region) {
    CoveringIndex idx;
    idx.spec = spec;
    idx.region = region;
    idx.keys = covering_keys(spec, region);
    idx.positions.reserve(idx.keys.size());
    for (const VertexKey& k : idx.keys) {
        idx.positions.push_back(lattice_vertex(spec, k));
        idx.key_set.insert(k);
    }
    return idx;
}

std::vector<VertexKey> CoveringIndex::neighbors_in(const VertexKey& at) const {
    std::vector<VertexKey> out;
    for (const VertexKey& k : neighbor_keys(spec.kind, at))
        if (contains(k)) out.push_back(k);
    return out;
}

VertexKey CoveringIndex::nearest_in(Vec3 p) const {
    VertexKey k = nearest_key(spec, p);
    if (contains(k)) return k;
    if (keys.empty()) throw std::invalid_argument("nearest_in: empty covering set");
    const double tie_eps = 1e-9 * spec.r_s;
    std::size_t best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < positions.size(); ++i) {
        double d2 = norm_sq(positions[i] - p);
        double scale = std::max(best_d2 == std::numeric_limits<double>::infinity()
                                    ? d2 : best_d2, spec.r_s * spec.r_s);
        if (d2 < best_d2 - 1e-12 * scale) {
            best_d2 = d2; best = i;
        } else if (d2 <= best_d2 + 1e-12 * scale &&
                   lex_less(positions[i], positions[best], tie_eps)) {
            best = i;
        }
    }
    return keys[best];
}

}  // namespace s3d
