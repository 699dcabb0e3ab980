#pragma once

#include <span>
#include <vector>

namespace crabnet {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2 a, Vec2 b) = default;
};

double distance(Vec2 a, Vec2 b);

/// Planar azimuth of the vector from->to in degrees, [0, 360). 0 deg is +x, CCW positive.
/// Throws DomainError for coincident points.
double bearing(Vec2 from, Vec2 to);

/// Maps any angle to [0, 360).
double wrap360(double deg);
/// Maps any angle to (-180, 180].
double wrap180(double deg);
/// min(|a-b|, 360-|a-b|) after wrapping, in [0, 180].
double circular_distance(double a_deg, double b_deg);

using Polygon = std::vector<Vec2>;

/// True iff p lies strictly inside the polygon (boundary points are outside).
bool strictly_inside(const Polygon& poly, Vec2 p);

/// True iff some part of the open segment a-b lies in the strict interior of the polygon.
/// Touching or running along the boundary does not count.
bool segment_enters_interior(const Polygon& poly, Vec2 a, Vec2 b);

}  // namespace crabnet
