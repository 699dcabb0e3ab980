#include "crabnet/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "crabnet/error.hpp"

namespace crabnet {

namespace {

constexpr double kGeomEps = 1e-9;

double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

bool on_segment(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const Vec2 ap = p - a;
  const double len = std::hypot(ab.x, ab.y);
  if (len < kGeomEps) return std::hypot(ap.x, ap.y) < kGeomEps;
  if (std::abs(cross(ab, ap)) / len > kGeomEps) return false;
  const double t = (ap.x * ab.x + ap.y * ab.y) / (len * len);
  return t >= -kGeomEps && t <= 1.0 + kGeomEps;
}

}  // namespace

double distance(Vec2 a, Vec2 b) { return std::hypot(b.x - a.x, b.y - a.y); }

double wrap360(double deg) {
  double r = std::fmod(deg, 360.0);
  if (r < 0.0) r += 360.0;
  if (r >= 360.0) r -= 360.0;
  return r;
}

double wrap180(double deg) {
  double r = wrap360(deg);
  if (r > 180.0) r -= 360.0;
  return r;
}

double circular_distance(double a_deg, double b_deg) {
  const double d = std::abs(wrap360(a_deg) - wrap360(b_deg));
  return std::min(d, 360.0 - d);
}

double bearing(Vec2 from, Vec2 to) {
  if (from == to) throw DomainError("bearing: coincident points");
  const double deg = std::atan2(to.y - from.y, to.x - from.x) * 180.0 / std::numbers::pi;
  return wrap360(deg);
}

bool strictly_inside(const Polygon& poly, Vec2 p) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    if (on_segment(p, poly[i], poly[(i + 1) % n])) return false;
  }
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 a = poly[i];
    const Vec2 b = poly[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

bool segment_enters_interior(const Polygon& poly, Vec2 a, Vec2 b) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  // Split a-b at every crossing with a polygon edge; each piece is then either
  // wholly inside, wholly outside or on the boundary, so its midpoint decides.
  std::vector<double> cuts{0.0, 1.0};
  const Vec2 d = b - a;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 p = poly[i];
    const Vec2 e = poly[(i + 1) % n] - p;
    const double denom = cross(d, e);
    if (std::abs(denom) < kGeomEps) {
      // Parallel: project edge endpoints onto the segment so collinear overlaps are split too.
      const double dd = d.x * d.x + d.y * d.y;
      if (dd < kGeomEps) continue;
      for (Vec2 q : {p, p + e}) {
        const double t = ((q - a).x * d.x + (q - a).y * d.y) / dd;
        if (t > 0.0 && t < 1.0) cuts.push_back(t);
      }
      continue;
    }
    const Vec2 ap = p - a;
    const double t = cross(ap, e) / denom;
    const double u = cross(ap, d) / denom;
    if (t > 0.0 && t < 1.0 && u >= -kGeomEps && u <= 1.0 + kGeomEps) cuts.push_back(t);
  }
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] - cuts[i] < 1e-12) continue;
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    if (strictly_inside(poly, a + mid * d)) return true;
  }
  return false;
}

}  // namespace crabnet
