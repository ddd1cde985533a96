#pragma once

#include <span>
#include <vector>

#include "critflow/analysis/vorticity_source.hpp"

namespace critflow {

/// Direct quadrature of the periodic Biot-Savart sum
///   u(x) = 1/(2 pi) sum_{|n_i| <= n_max} int (x-y-2n)^perp / |x-y-2n|^2 w(y) dy,
/// (v1, v2)^perp = (v2, -v1), matching velocity_from_vorticity.
/// The integration cell is centred on x, so the n = 0 kernel carries the only
/// singularity; the other images are tabulated once per (n_max, table_size)
/// and interpolated.
///
/// For mean-zero w the square truncation error decays like (n_max + 1/2)^-2.
/// The reported velocity removes that term using truncations n_max/2 and
/// n_max; the same extrapolation from n_max/4 and n_max/2 serves as the
/// stability check.
struct LatticeOptions {
  int n_max = 16;  // positive multiple of 4
  /// Allowed max-norm change between the two extrapolated values.
  double stability_tolerance = 1e-6;
  /// Cells per axis of the image-sum table on [-1, 1]^2.
  int table_size = 512;
  /// Geometric ratio and smallest panel of the mesh grading.
  double grading_ratio = 0.15;
  double min_panel = 1e-10;
};

struct LatticeReport {
  std::vector<Point> velocity;        // extrapolated
  std::vector<Point> truncated;       // plain truncation n_max
  std::vector<Point> half_truncated;  // plain truncation n_max / 2
  double max_change = 0.0;            // extrapolated, n_max/2 vs n_max
  double max_truncation_change = 0.0; // plain, n_max/2 vs n_max
};

/// Throws InvalidInputError when the source mean exceeds kMeanTolerance and
/// NumericalError when the extrapolated values differ by more than the tolerance.
std::vector<Point> lattice_biot_savart(const VorticitySource& source, std::span<const Point> points,
                                       const LatticeOptions& options = {});
/// Same quadrature without the stability check.
LatticeReport lattice_biot_savart_report(const VorticitySource& source,
                                         std::span<const Point> points,
                                         const LatticeOptions& options = {});

/// Mean of the source over the torus (panel quadrature on the same mesh family).
double source_mean(const VorticitySource& source);

/// Tensor panel mesh on [lo, hi]: intervals split at every break and target,
/// and graded geometrically toward every target. Exposed for the quadrature tests.
std::vector<double> graded_mesh(double lo, double hi, std::vector<double> breaks,
                                const std::vector<double>& targets, double ratio,
                                double min_panel);

}  // namespace critflow
