#pragma once

#include <cstddef>
#include <span>

namespace critflow {

/// Ordinary least squares y = slope x + intercept.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double r_squared = 0.0;
  double max_abs_residual = 0.0;
  std::size_t samples = 0;
  /// Two-sided Student-t confidence half-width for the slope.
  double slope_half_width(double confidence = 0.95) const;
};

/// Throws InvalidInputError with fewer than three samples or degenerate x.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace critflow
