#pragma once

#include <cmath>
#include <compare>

namespace oval {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
    double norm_sq() const { return x * x + y * y; }
};

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    Vec2 xy() const { return {x, y}; }
};

inline double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

// Wraps an angle into [0, 2*pi).
inline double wrap_angle(double a) {
    a = std::fmod(a, kTwoPi);
    if (a < 0.0) a += kTwoPi;
    if (a >= kTwoPi) a = 0.0;
    return a;
}

// Signed smallest difference a-b, in (-pi, pi].
inline double angle_diff(double a, double b) {
    double d = std::fmod(a - b, kTwoPi);
    if (d <= -kPi) d += kTwoPi;
    if (d > kPi) d -= kTwoPi;
    return d;
}

struct Pose {
    double x = 0.0;
    double y = 0.0;
    double heading = 0.0; // radians, [0, 2*pi), CCW, 0 = +x
    double floor_height = 0.0;

    Vec2 position() const { return {x, y}; }
    Vec2 direction() const { return {std::cos(heading), std::sin(heading)}; }

    bool finite() const {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(heading) &&
               std::isfinite(floor_height);
    }
};

inline Pose make_pose(double x, double y, double heading, double floor_height = 0.0) {
    return Pose{x, y, wrap_angle(heading), floor_height};
}

// Axis-aligned rectangle, half-open on the high edges for containment.
struct Rect {
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    Vec2 center() const { return {0.5 * (x0 + x1), 0.5 * (y0 + y1)}; }

    bool contains(const Vec2& p) const {
        return p.x >= x0 && p.x < x1 && p.y >= y0 && p.y < y1;
    }

    bool overlaps(const Rect& o) const {
        return x0 < o.x1 && o.x0 < x1 && y0 < o.y1 && o.y0 < y1;
    }

    // Euclidean distance from p to the rectangle (0 inside).
    double distance_to(const Vec2& p) const {
        double dx = std::max({x0 - p.x, 0.0, p.x - x1});
        double dy = std::max({y0 - p.y, 0.0, p.y - y1});
        return std::hypot(dx, dy);
    }
};

// Slab-method ray/rect intersection. Returns entry distance along dir
// (unit), or a negative value when there is no hit in front of the origin.
inline double ray_rect_intersect(const Vec2& origin, const Vec2& dir, const Rect& r) {
    double tmin = 0.0;
    double tmax = 1e18;
    for (int axis = 0; axis < 2; ++axis) {
        double o = axis == 0 ? origin.x : origin.y;
        double d = axis == 0 ? dir.x : dir.y;
        double lo = axis == 0 ? r.x0 : r.y0;
        double hi = axis == 0 ? r.x1 : r.y1;
        if (std::abs(d) < 1e-15) {
            if (o < lo || o > hi) return -1.0;
        } else {
            double t1 = (lo - o) / d;
            double t2 = (hi - o) / d;
            if (t1 > t2) std::swap(t1, t2);
            tmin = std::max(tmin, t1);
            tmax = std::min(tmax, t2);
            if (tmin > tmax) return -1.0;
        }
    }
    return tmin;
}

struct CellIndex {
    int row = 0;
    int col = 0;

    auto operator<=>(const CellIndex&) const = default; // row-major order
};

} // namespace oval
