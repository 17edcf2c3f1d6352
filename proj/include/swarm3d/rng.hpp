#pragma once

#include <cstdint>

#include "swarm3d/vec3.hpp"

namespace s3d {

// splitmix64 finalizer (public-domain construction by Sebastiano Vigna).
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Stream tags so every stochastic draw is attributable to (seed, entity, purpose).
enum class StreamTag : std::uint64_t {
    init_position = 1,
    init_consensus = 2,
    init_heading = 3,
    spread_move = 4,
    search_move = 5,
    target_motion = 6,
    target_placement = 7,
    permutation = 8,
    generic = 9,
    conflict = 10,
};

// Counter-based uniform generator: output k = finalize(key + GOLDEN * k), i.e. the
// splitmix64 sequence seeded at `key`. Streams derived from distinct
// (seed, entity, tag, epoch) tuples are independent and order-insensitive, which is
// what keeps batched trials reproducible.
class RngStream {
  public:
    explicit RngStream(std::uint64_t key) : key_(key) {}

    static RngStream from(std::uint64_t seed, std::uint64_t entity, StreamTag tag,
                          std::uint64_t epoch = 0) {
        std::uint64_t k = mix64(seed + 0x632be59bd9b4e019ULL);
        k = mix64(k ^ (entity + 0x9e3779b97f4a7c15ULL));
        k = mix64(k ^ (static_cast<std::uint64_t>(tag) * 0xd6e8feb86659fd93ULL));
        k = mix64(k ^ (epoch + 0xa0761d6478bd642fULL));
        return RngStream(k);
    }

    std::uint64_t next_u64() {
        counter_ += 0x9e3779b97f4a7c15ULL;
        return mix64(key_ + counter_);
    }

    // [0, 1)
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    // (0, 1]
    double uniform_open01() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }
    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    // Uniform in [0, n); n must be > 0. Multiply-shift; bias is O(n / 2^64).
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    // Box-Muller; consumes exactly two draws per call.
    double normal(double mean = 0.0, double sigma = 1.0) {
        double u1 = uniform_open01();
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        return mean + sigma * r * std::cos(6.283185307179586476925286766559 * u2);
    }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

// Area-uniform direction on the unit sphere.
inline Vec3 unit_sphere_dir(RngStream& rng) {
    double z = 2.0 * rng.uniform01() - 1.0;
    double phi = 6.283185307179586476925286766559 * rng.uniform01();
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {r * std::cos(phi), r * std::sin(phi), z};
}

inline Vec3 uniform_in_region(const Region& region, RngStream& rng) {
    return {rng.uniform(region.min_corner.x, region.max_corner.x),
            rng.uniform(region.min_corner.y, region.max_corner.y),
            rng.uniform(region.min_corner.z, region.max_corner.z)};
}

}  // namespace s3d
