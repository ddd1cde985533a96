#include "critflow/fields/sampling.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "critflow/errors.hpp"

namespace critflow {
namespace {

struct Stencil {
  int base;  // index of the leftmost of four nodes, unwrapped
  std::array<double, 4> w;
};

Stencil stencil(const Grid& grid, double x) {
  const double s = (wrap_coordinate(x) + 1.0) / grid.spacing();
  double fl = std::floor(s);
  double f = s - fl;
  Stencil st{};
  st.base = static_cast<int>(fl) - 1;
  st.w[0] = -f * (f - 1.0) * (f - 2.0) / 6.0;
  st.w[1] = (f + 1.0) * (f - 1.0) * (f - 2.0) / 2.0;
  st.w[2] = -(f + 1.0) * f * (f - 2.0) / 2.0;
  st.w[3] = (f + 1.0) * f * (f - 1.0) / 6.0;
  return st;
}

template <class Fn>
void accumulate(const Grid& grid, Point p, Fn&& fn) {
  const Stencil a = stencil(grid, p.x1);
  const Stencil b = stencil(grid, p.x2);
  const int mask = grid.size() - 1;
  for (int i = 0; i < 4; ++i) {
    const int i1 = (a.base + i) & mask;
    for (int j = 0; j < 4; ++j) {
      const int i2 = (b.base + j) & mask;
      fn(grid.index(i1, i2), a.w[i] * b.w[j]);
    }
  }
}

void check_polar_lattice(std::span<const double> radii, std::span<const double> angles) {
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0) || radii[i] > 1.0) {
      throw DomainError("polar radius " + std::to_string(radii[i]) + " outside (0, 1]");
    }
    if (i > 0 && !(radii[i] > radii[i - 1])) throw ConfigError("polar radii must increase");
  }
  for (std::size_t i = 0; i < angles.size(); ++i) {
    if (angles[i] < 0.0 || angles[i] > std::numbers::pi / 2 + 1e-15) {
      throw ConfigError("polar angle outside [0, pi/2]");
    }
    if (i > 0 && !(angles[i] > angles[i - 1])) throw ConfigError("polar angles must increase");
  }
}

}  // namespace

double sample_at(const Grid& grid, std::span<const double> samples, Point p) {
  double v = 0.0;
  accumulate(grid, p, [&](std::size_t idx, double w) { v += w * samples[idx]; });
  return v;
}

double sample_at(const VorticityField& field, Point p) {
  return sample_at(field.grid(), field.samples(), p);
}

std::vector<double> sample_at(const VorticityField& field, std::span<const Point> points) {
  std::vector<double> out;
  out.reserve(points.size());
  for (Point p : points) out.push_back(sample_at(field, p));
  return out;
}

Point sample_at(const VelocityField& u, Point p) {
  Point v;
  accumulate(u.grid, p, [&](std::size_t idx, double w) {
    v.x1 += w * u.u1[idx];
    v.x2 += w * u.u2[idx];
  });
  return v;
}

std::vector<double> log_spaced(double r_min, double r_max, int count) {
  if (!(r_min > 0.0) || !(r_max > r_min) || count < 2) {
    throw ConfigError("log_spaced needs 0 < r_min < r_max and count >= 2");
  }
  std::vector<double> r(count);
  const double a = std::log(r_min);
  const double b = std::log(r_max);
  for (int i = 0; i < count; ++i) r[i] = std::exp(a + (b - a) * i / (count - 1));
  r.front() = r_min;
  r.back() = r_max;
  return r;
}

std::vector<double> quadrant_angles(int count) {
  if (count < 2) throw ConfigError("quadrant_angles needs count >= 2");
  std::vector<double> a(count);
  for (int i = 0; i < count; ++i) a[i] = (std::numbers::pi / 2) * i / (count - 1);
  return a;
}

PolarPatch resample_polar(const Grid& grid, std::span<const double> samples,
                          std::span<const double> radii, std::span<const double> angles) {
  check_polar_lattice(radii, angles);
  PolarPatch patch{{radii.begin(), radii.end()}, {angles.begin(), angles.end()}, {}};
  patch.values.reserve(radii.size() * angles.size());
  for (double r : radii) {
    for (double th : angles) patch.values.push_back(sample_at(grid, samples, Point::polar(r, th)));
  }
  return patch;
}

PolarPatch resample_polar(const VorticityField& field, std::span<const double> radii,
                          std::span<const double> angles) {
  return resample_polar(field.grid(), field.samples(), radii, angles);
}

}  // namespace critflow
