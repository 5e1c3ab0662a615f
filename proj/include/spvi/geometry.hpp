#pragma once

#include <cmath>

namespace spvi {

/// Plain 2D vector used for vertex coordinates and gradients.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
};

inline Vec2 operator*(double s, const Vec2& v) { return {s * v.x, s * v.y}; }

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& a) { return std::hypot(a.x, a.y); }
inline double norm2(const Vec2& a) { return a.x * a.x + a.y * a.y; }
inline double dist(const Vec2& a, const Vec2& b) { return norm(a - b); }

/// Rotation by +90 degrees.
inline Vec2 perp(const Vec2& a) { return {-a.y, a.x}; }

/// Twice the signed area of the triangle (a, b, c); positive for ccw order.
inline double signed_area2(const Vec2& a, const Vec2& b, const Vec2& c) {
    return cross(b - a, c - a);
}

}  // namespace spvi
