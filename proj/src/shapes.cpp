#include "swarm3d/shapes.hpp"

namespace s3d {

void validate(const ShapePredicate& shape) {
    std::visit(
        [](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Sphere>) {
                if (!(s.radius > 0)) throw std::invalid_argument("sphere: radius must be > 0");
            } else if constexpr (std::is_same_v<T, Cuboid>) {
                if (!(s.min_corner.x < s.max_corner.x && s.min_corner.y < s.max_corner.y &&
                      s.min_corner.z < s.max_corner.z))
                    throw std::invalid_argument("cuboid: bounds must be ordered");
            } else if constexpr (std::is_same_v<T, Torus>) {
                if (!(s.tube_radius > 0) || !(s.ring_radius > 0))
                    throw std::invalid_argument("torus: radii must be > 0");
            } else {
                if (!(s.a > 0 && s.b > 0 && s.c > 0))
                    throw std::invalid_argument("ellipsoid: semi-axes must be > 0");
            }
        },
        shape);
}

bool shape_contains(const ShapePredicate& shape, Vec3 p) {
    return std::visit(
        [p](const auto& s) -> bool {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Sphere>) {
                return norm_sq(p) < s.radius * s.radius;
            } else if constexpr (std::is_same_v<T, Cuboid>) {
                return p.x > s.min_corner.x && p.x < s.max_corner.x &&
                       p.y > s.min_corner.y && p.y < s.max_corner.y &&
                       p.z > s.min_corner.z && p.z < s.max_corner.z;
            } else if constexpr (std::is_same_v<T, Torus>) {
                double ring = std::sqrt(p.x * p.x + p.y * p.y) - s.ring_radius;
                return ring * ring + p.z * p.z < s.tube_radius * s.tube_radius;
            } else {
                double u = p.x / s.a, v = p.y / s.b, w = p.z / s.c;
                return u * u + v * v + w * w < 1.0;
            }
        },
        shape);
}

const char* shape_name(const ShapePredicate& shape) {
    switch (shape.index()) {
        case 0: return "sphere";
        case 1: return "cuboid";
        case 2: return "torus";
        default: return "ellipsoid";
    }
}

}  // namespace s3d
