#pragma once

#include <cmath>

namespace critflow {

struct Point {
  double x1 = 0.0;
  double x2 = 0.0;

  friend Point operator+(Point a, Point b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
  friend Point operator-(Point a, Point b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
  friend Point operator*(double s, Point a) { return {s * a.x1, s * a.x2}; }
  friend Point operator*(Point a, double s) { return {s * a.x1, s * a.x2}; }
  Point& operator+=(Point b) {
    x1 += b.x1;
    x2 += b.x2;
    return *this;
  }
  friend bool operator==(Point a, Point b) = default;

  double norm() const { return std::hypot(x1, x2); }
  double angle() const { return std::atan2(x2, x1); }

  static Point polar(double r, double theta) { return {r * std::cos(theta), r * std::sin(theta)}; }
};

/// Maps a coordinate onto the torus period [-1, 1).
inline double wrap_coordinate(double x) {
  if (x >= -1.0 && x < 1.0) return x;
  double y = std::fmod(x + 1.0, 2.0);
  if (y < 0.0) y += 2.0;
  // fmod can return exactly 2.0 after the shift for tiny negative inputs.
  if (y >= 2.0) y -= 2.0;
  return y - 1.0;
}

inline Point wrap_point(Point p) { return {wrap_coordinate(p.x1), wrap_coordinate(p.x2)}; }

/// Shortest torus displacement b - a.
inline Point torus_difference(Point a, Point b) {
  return {wrap_coordinate(b.x1 - a.x1), wrap_coordinate(b.x2 - a.x2)};
}

}  // namespace critflow
