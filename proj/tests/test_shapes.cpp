#include "doctest.h"

#include "swarm3d/shapes.hpp"

using namespace s3d;

TEST_CASE("sphere membership is strict") {
    ShapePredicate s = Sphere{2.0};
    CHECK(shape_contains(s, {0, 0, 0}));
    CHECK(shape_contains(s, {1.9, 0, 0}));
    CHECK_FALSE(shape_contains(s, {2.0, 0, 0}));  // boundary excluded
    CHECK_FALSE(shape_contains(s, {2.1, 0, 0}));
}

TEST_CASE("cuboid membership") {
    ShapePredicate c = Cuboid{{0, 0, 0}, {1, 2, 3}};
    CHECK(shape_contains(c, {0.5, 1.0, 1.5}));
    CHECK_FALSE(shape_contains(c, {0.0, 1.0, 1.5}));  // on a face
    CHECK_FALSE(shape_contains(c, {-0.1, 1.0, 1.5}));
}

TEST_CASE("torus implicit solid") {
    ShapePredicate t = Torus{1.0, 3.0};
    // (sqrt(x^2+y^2) - 3)^2 + z^2 < 1 at (3,0,0): 0 < 1.
    CHECK(shape_contains(t, {3, 0, 0}));
    CHECK(shape_contains(t, {0, 3.5, 0.5}));
    CHECK_FALSE(shape_contains(t, {0, 0, 0}));    // hole
    CHECK_FALSE(shape_contains(t, {4.0, 0, 0}));  // boundary excluded
    CHECK_FALSE(shape_contains(t, {5, 0, 0}));
}

TEST_CASE("ellipsoid membership, boundary excluded") {
    ShapePredicate e = Ellipsoid{1.0, 2.0, 3.0};
    CHECK_FALSE(shape_contains(e, {1, 0, 0}));  // exactly on the surface
    CHECK(shape_contains(e, {0.9, 0, 0}));
    CHECK(shape_contains(e, {0, 1.9, 0}));
    CHECK_FALSE(shape_contains(e, {0, 0, 3.0001}));
}

TEST_CASE("shape validation") {
    CHECK_THROWS_AS(validate(ShapePredicate{Sphere{0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(validate(ShapePredicate{Torus{-1.0, 3.0}}), std::invalid_argument);
    CHECK_THROWS_AS(validate(ShapePredicate{Cuboid{{1, 0, 0}, {0, 1, 1}}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate(ShapePredicate{Ellipsoid{1, 0, 1}}), std::invalid_argument);
    CHECK_NOTHROW(validate(ShapePredicate{Sphere{2.5}}));
}
