#pragma once

#include <span>
#include <vector>

#include "critflow/analysis/regression.hpp"
#include "critflow/fields/field_types.hpp"

namespace critflow {

/// Near the origin the Bahouri-Chemin velocity behaves like
///   u1 = -c x1 (ln 1/x2 + r1),  u2 = c x2 (ln 1/x2 + r2),  0 < x1 < x2,
/// with smooth bounded r1, r2. The slope of -u1/x1 against ln(1/x2)
/// estimates c.
struct BcFitOptions {
  double x2_min = 0.01;
  double x2_max = 0.05;
  int x2_count = 16;
  std::vector<double> aspects{0.2, 0.4, 0.6, 0.8};  // x1 / x2
  double confidence = 0.95;
};

struct BcFit {
  int grid_size = 0;
  LinearFit fit;
  double half_width = 0.0;  // confidence half-width of the slope
};

struct BcFitReport {
  std::vector<BcFit> fits;  // one per grid size, in the order given
  /// |c(last) - c(previous)| / |c(last)|; zero with a single grid.
  double relative_change = 0.0;
};

/// Regression on a given velocity field.
BcFit fit_bc_constant(const VelocityField& velocity, const BcFitOptions& options = {});
/// Builds Bahouri-Chemin data on each grid and fits its spectral velocity.
BcFitReport fit_bc_constant(std::span<const int> grid_sizes, const BcFitOptions& options = {});

}  // namespace critflow
