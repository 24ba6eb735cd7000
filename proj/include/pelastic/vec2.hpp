#pragma once

#include <cmath>

namespace pelastic {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2 &operator+=(const Vec2 &o) {
        x += o.x;
        y += o.y;
        return *this;
    }
    constexpr Vec2 &operator-=(const Vec2 &o) {
        x -= o.x;
        y -= o.y;
        return *this;
    }
    constexpr Vec2 &operator*=(double s) {
        x *= s;
        y *= s;
        return *this;
    }

    friend constexpr Vec2 operator+(Vec2 a, const Vec2 &b) { return a += b; }
    friend constexpr Vec2 operator-(Vec2 a, const Vec2 &b) { return a -= b; }
    friend constexpr Vec2 operator*(Vec2 a, double s) { return a *= s; }
    friend constexpr Vec2 operator*(double s, Vec2 a) { return a *= s; }
    friend constexpr Vec2 operator-(const Vec2 &a) { return {-a.x, -a.y}; }
    friend constexpr bool operator==(const Vec2 &, const Vec2 &) = default;
};

constexpr double dot(const Vec2 &a, const Vec2 &b) { return a.x * b.x + a.y * b.y; }

// z-component of the 3d cross product
constexpr double cross(const Vec2 &a, const Vec2 &b) { return a.x * b.y - a.y * b.x; }

inline double norm(const Vec2 &a) { return std::hypot(a.x, a.y); }

inline Vec2 unit_vector(double angle) { return {std::cos(angle), std::sin(angle)}; }

// counterclockwise rotation by a quarter turn
constexpr Vec2 perp(const Vec2 &a) { return {-a.y, a.x}; }

}  // namespace pelastic
