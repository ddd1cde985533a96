#pragma once

#include <span>
#include <vector>

#include "critflow/fields/field_types.hpp"
#include "critflow/point.hpp"

namespace critflow {

/// Piecewise bicubic (tensor 4-point Lagrange) interpolation of periodic
/// grid samples. Exact at grid nodes; points are wrapped onto the torus.
double sample_at(const Grid& grid, std::span<const double> samples, Point p);

double sample_at(const VorticityField& field, Point p);
std::vector<double> sample_at(const VorticityField& field, std::span<const Point> points);

/// Both velocity components at p, sharing one set of interpolation weights.
Point sample_at(const VelocityField& u, Point p);

/// Log-spaced radii r_0 = r_min < ... < r_{n-1} = r_max.
std::vector<double> log_spaced(double r_min, double r_max, int count);
/// count angles uniformly covering [0, pi/2], endpoints included.
std::vector<double> quadrant_angles(int count);

/// Field values on a polar lattice in the first quadrant. values is row-major
/// with one row per radius.
struct PolarPatch {
  std::vector<double> radii;
  std::vector<double> angles;
  std::vector<double> values;

  double operator()(std::size_t ir, std::size_t ia) const { return values[ir * angles.size() + ia]; }
};

/// Throws DomainError for radii outside (0, 1] and ConfigError for
/// non-increasing radii or angles outside [0, pi/2].
PolarPatch resample_polar(const VorticityField& field, std::span<const double> radii,
                          std::span<const double> angles);

/// Same, for raw samples on a grid (used for derived fields such as gradients).
PolarPatch resample_polar(const Grid& grid, std::span<const double> samples,
                          std::span<const double> radii, std::span<const double> angles);

}  // namespace critflow
