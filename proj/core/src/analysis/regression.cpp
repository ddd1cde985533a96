#include "critflow/analysis/regression.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>

#include "critflow/errors.hpp"

namespace critflow {

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ConfigError("regression: x and y sizes differ");
  const std::size_t n = x.size();
  if (n < 3) throw InvalidInputError("regression needs at least three samples");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw InvalidInputError("regression: all x values coincide");
  LinearFit f;
  f.samples = n;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.slope * x[i] + f.intercept);
    ss_res += r * r;
    f.max_abs_residual = std::max(f.max_abs_residual, std::abs(r));
  }
  f.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  f.slope_stderr = std::sqrt(ss_res / static_cast<double>(n - 2) / sxx);
  return f;
}

double LinearFit::slope_half_width(double confidence) const {
  if (samples < 3) return 0.0;
  const boost::math::students_t dist(static_cast<double>(samples - 2));
  return boost::math::quantile(dist, 0.5 + 0.5 * confidence) * slope_stderr;
}

}  // namespace critflow
