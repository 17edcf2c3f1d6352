#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace s3d {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

inline Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double s, Vec3 v) { return {s * v.x, s * v.y, s * v.z}; }
inline Vec3 operator*(Vec3 v, double s) { return s * v; }
inline Vec3& operator+=(Vec3& a, Vec3 b) { a = a + b; return a; }
inline Vec3& operator-=(Vec3& a, Vec3 b) { a = a - b; return a; }
inline bool operator==(Vec3 a, Vec3 b) { return a.x == b.x && a.y == b.y && a.z == b.z; }

inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm_sq(Vec3 v) { return dot(v, v); }
inline double norm(Vec3 v) { return std::sqrt(norm_sq(v)); }
inline double distance(Vec3 a, Vec3 b) { return norm(a - b); }
inline Vec3 cross(Vec3 a, Vec3 b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline Vec3 normalized(Vec3 v) {
    double n = norm(v);
    if (n == 0.0) throw std::invalid_argument("normalized: zero vector");
    return (1.0 / n) * v;
}

inline bool finite(Vec3 v) {
    return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

// Strict lexicographic (x, y, z) order with a small absolute tolerance for
// "equal" components; used to break ties deterministically.
inline bool lex_less(Vec3 a, Vec3 b, double eps) {
    if (a.x < b.x - eps) return true;
    if (a.x > b.x + eps) return false;
    if (a.y < b.y - eps) return true;
    if (a.y > b.y + eps) return false;
    return a.z < b.z - eps;
}

// Axis-aligned bounded region M.
struct Region {
    Vec3 min_corner;
    Vec3 max_corner;

    void validate() const {
        if (!finite(min_corner) || !finite(max_corner))
            throw std::invalid_argument("region: corners must be finite");
        if (!(min_corner.x < max_corner.x && min_corner.y < max_corner.y &&
              min_corner.z < max_corner.z))
            throw std::invalid_argument("region: min_corner must be < max_corner componentwise");
    }

    // Closed membership: points on the boundary count.
    bool contains(Vec3 p) const {
        return p.x >= min_corner.x && p.x <= max_corner.x &&
               p.y >= min_corner.y && p.y <= max_corner.y &&
               p.z >= min_corner.z && p.z <= max_corner.z;
    }

    Vec3 extent() const { return max_corner - min_corner; }
    Vec3 center() const { return 0.5 * (min_corner + max_corner); }
    double volume() const {
        Vec3 e = extent();
        return e.x * e.y * e.z;
    }

    Region shrunk(double margin) const {
        return {min_corner + Vec3{margin, margin, margin},
                max_corner - Vec3{margin, margin, margin}};
    }
    Region expanded(double margin) const { return shrunk(-margin); }
};

}  // namespace s3d
