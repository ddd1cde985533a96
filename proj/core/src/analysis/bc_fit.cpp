#include "critflow/analysis/bc_fit.hpp"

#include <cmath>

#include "critflow/errors.hpp"
#include "critflow/fields/sampling.hpp"
#include "critflow/initial/initial_data.hpp"
#include "critflow/spectral/operators.hpp"

namespace critflow {

BcFit fit_bc_constant(const VelocityField& velocity, const BcFitOptions& o) {
  if (!(o.x2_min > 0.0 && o.x2_max > o.x2_min)) throw ConfigError("bc-fit: need 0 < x2_min < x2_max");
  std::vector<double> x, y;
  for (double x2 : log_spaced(o.x2_min, o.x2_max, o.x2_count)) {
    for (double a : o.aspects) {
      if (!(a > 0.0 && a < 1.0)) throw ConfigError("bc-fit: aspects must lie in (0, 1)");
      const Point p{a * x2, x2};
      x.push_back(std::log(1.0 / x2));
      y.push_back(-sample_at(velocity, p).x1 / p.x1);
    }
  }
  BcFit f;
  f.grid_size = velocity.grid.size();
  f.fit = fit_line(x, y);
  f.half_width = f.fit.slope_half_width(o.confidence);
  return f;
}

BcFitReport fit_bc_constant(std::span<const int> grid_sizes, const BcFitOptions& o) {
  BcFitReport r;
  for (int m : grid_sizes) {
    const Grid g(m);
    r.fits.push_back(fit_bc_constant(velocity_from_vorticity(make_bahouri_chemin(g)), o));
  }
  if (r.fits.size() >= 2) {
    const double a = r.fits[r.fits.size() - 2].fit.slope, b = r.fits.back().fit.slope;
    r.relative_change = std::abs(b - a) / std::abs(b);
  }
  return r;
}

}  // namespace critflow
