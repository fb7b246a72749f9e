#pragma once

#include <cmath>

#include "kahler/algebra.hpp"

namespace kahler {

/// Cartesian point of the real plane; embeds as the edif x + y dxdy.
struct Point {
  double x = 0.0;
  double y = 0.0;

  constexpr Edif to_edif() const { return {x, y}; }
  static constexpr Point from_edif(const Edif& w) { return {w.u, w.v}; }

  friend constexpr bool operator==(const Point&, const Point&) = default;
};

inline Point operator+(const Point& p, const Point& q) { return {p.x + q.x, p.y + q.y}; }
inline Point operator-(const Point& p, const Point& q) { return {p.x - q.x, p.y - q.y}; }
inline Point operator*(double k, const Point& p) { return {k * p.x, k * p.y}; }
inline double distance(const Point& p, const Point& q) { return std::hypot(p.x - q.x, p.y - q.y); }

}  // namespace kahler
