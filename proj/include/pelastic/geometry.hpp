#pragma once

#include <span>
#include <vector>

#include "pelastic/vec2.hpp"

namespace pelastic {

// Sign of cross(b - a, c - a): +1 left turn, -1 right turn, 0 collinear.
// Exact for finite double input (floating-point filter with a rational
// fallback).
int orientation(const Vec2 &a, const Vec2 &b, const Vec2 &c);

// Closed-segment intersection test, exact.
bool segments_intersect(const Vec2 &p1, const Vec2 &p2, const Vec2 &q1, const Vec2 &q2);

// True when the implicitly closed polygon has no intersections between
// non-adjacent edges and no adjacent edges folding back onto each other.
bool is_simple(std::span<const Vec2> polygon);

// Counterclockwise hull without collinear points (Andrew's monotone chain).
std::vector<Vec2> convex_hull(std::span<const Vec2> points);

// Even-odd rule; points on the boundary count as outside.
bool point_in_polygon(std::span<const Vec2> polygon, const Vec2 &p);

}  // namespace pelastic
