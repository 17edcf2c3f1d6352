#pragma once

#include <variant>

#include "swarm3d/vec3.hpp"

namespace s3d {

// Target patterns for shape formation. All containment is strict (open solid);
// the torus is the implicit solid of revolution (sqrt(x^2+y^2)-c)^2 + z^2 < a^2.
struct Sphere {
    double radius = 1.0;
};
struct Cuboid {
    Vec3 min_corner;
    Vec3 max_corner;
};
struct Torus {
    double tube_radius = 1.0;  // a
    double ring_radius = 3.0;  // c
};
struct Ellipsoid {
    double a = 1.0, b = 1.0, c = 1.0;
};

using ShapePredicate = std::variant<Sphere, Cuboid, Torus, Ellipsoid>;

void validate(const ShapePredicate& shape);
bool shape_contains(const ShapePredicate& shape, Vec3 p);
const char* shape_name(const ShapePredicate& shape);

}  // namespace s3d
