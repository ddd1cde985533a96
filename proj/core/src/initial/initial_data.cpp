#include "critflow/initial/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "critflow/errors.hpp"
#include "critflow/spectral/operators.hpp"
#include "critflow/spectral/transform.hpp"

namespace critflow {
namespace {

constexpr double kPi = std::numbers::pi;

template <class F>
VorticityField sample_grid(const Grid& grid, F&& f) {
  VorticityField field(grid, Symmetry::kOddOdd, 0.0);
  const int m = grid.size();
  for (int i1 = 0; i1 < m; ++i1) {
    for (int i2 = 0; i2 < m; ++i2) field(i1, i2) = f(Point{grid.coordinate(i1), grid.coordinate(i2)});
  }
  return field;
}

}  // namespace

double smoothstep(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double smooth_plateau(double x, double a, double b, double c, double d) {
  if (x <= a || x >= d) return 0.0;
  if (x < b) return smoothstep((x - a) / (b - a));
  if (x <= c) return 1.0;
  return smoothstep((d - x) / (d - c));
}

double angular_bump(double theta) {
  return smooth_plateau(theta, kPi / 6, kPi / 4, kPi / 3, 5 * kPi / 12);
}

double odd_odd_extension(Point p, const std::function<double(double, double)>& quadrant) {
  p = wrap_point(p);
  if (p.x1 == 0.0 || p.x2 == 0.0 || p.x1 == -1.0 || p.x2 == -1.0) return 0.0;
  const double sign = ((p.x1 < 0) != (p.x2 < 0)) ? -1.0 : 1.0;
  return sign * quadrant(std::abs(p.x1), std::abs(p.x2));
}

double BumpDataParams::inner_plateau() const { return 1.0 / N; }
double BumpDataParams::outer_plateau() const { return 1.0 / std::sqrt(static_cast<double>(N)); }
double BumpDataParams::inner_support() const { return 0.5 / N; }
double BumpDataParams::outer_support() const { return 2.0 / std::sqrt(static_cast<double>(N)); }

int BumpDataParams::required_grid_size() const {
  // N^{-1}/2 >= 4h  <=>  h <= 1/(8N).
  return Grid::finest_needed(1.0 / (8.0 * N)).size();
}

void BumpDataParams::validate() const {
  if (N < 8) throw ConfigError("bump data needs N >= 8, got " + std::to_string(N));
}

double bump_radial(const BumpDataParams& p, double r) {
  return smooth_plateau(r, p.inner_support(), p.inner_plateau(), p.outer_plateau(),
                        p.outer_support());
}

double bump_value(const BumpDataParams& p, Point x) {
  return odd_odd_extension(x, [&](double a, double b) {
    const double r = std::hypot(a, b);
    const double chi = bump_radial(p, r);
    return chi == 0.0 ? 0.0 : chi * angular_bump(std::atan2(b, a));
  });
}

VorticityField make_bump_data(const BumpDataParams& params, const Grid& grid) {
  params.validate();
  if (params.inner_support() < 4.0 * grid.spacing()) {
    throw ConfigError("grid M=" + std::to_string(grid.size()) + " too coarse for N=" +
                      std::to_string(params.N) + "; need M >= " +
                      std::to_string(params.required_grid_size()));
  }
  return sample_grid(grid, [&](Point x) { return bump_value(params, x); });
}

double ContinuumDataParams::effective_r_min(const Grid& grid) const {
  return r_min > 0.0 ? r_min : 2.0 * grid.spacing();
}

void ContinuumDataParams::validate(const Grid& grid) const {
  if (!(alpha > 0.5 && alpha < 0.6)) {
    throw ConfigError("continuum data needs alpha in (1/2, 3/5), got " + std::to_string(alpha));
  }
  if (!(epsilon > 0.0 && epsilon <= 0.5)) {
    throw ConfigError("continuum data needs epsilon in (0, 1/2], got " + std::to_string(epsilon));
  }
  const double rm = effective_r_min(grid);
  if (rm < 2.0 * grid.spacing() * (1.0 - 1e-12)) {
    throw ConfigError("continuum regularization radius " + std::to_string(rm) +
                      " is below 2h = " + std::to_string(2.0 * grid.spacing()));
  }
  if (rm >= epsilon / 2) throw ConfigError("continuum regularization radius must lie below epsilon/2");
}

double continuum_value(const ContinuumDataParams& p, const Grid& grid, Point x) {
  const double rm = p.effective_r_min(grid);
  return odd_odd_extension(x, [&](double a, double b) {
    const double r = std::hypot(a, b);
    const double xi = smooth_plateau(r, -1.0, 0.0, p.epsilon / 2, 2 * p.epsilon / 3);
    if (xi == 0.0) return 0.0;
    const double rr = std::max(r, rm);
    return std::pow(std::log(1.0 / rr), -p.alpha) * angular_bump(std::atan2(b, a)) * xi;
  });
}

VorticityField make_continuum_data(const ContinuumDataParams& params, const Grid& grid) {
  params.validate(grid);
  return sample_grid(grid, [&](Point x) { return continuum_value(params, grid, x); });
}

ContinuumNormalization normalize_continuum_data(const ContinuumDataParams& params,
                                                const Grid& grid) {
  params.validate(grid);
  ContinuumNormalization out{params};
  const double rm = params.effective_r_min(grid);
  out.params.r_min = rm;
  for (;;) {
    const VorticityField w = make_continuum_data(out.params, grid);
    const SpectralField c = forward_transform(grid, w.samples());
    out.sup_norm = w.max_abs();
    out.gradient_norm = std::sqrt(
        4.0 * c.weighted_power([](int k1, int k2) { return kPi * kPi * (k1 * k1 + k2 * k2); }));
    if (out.sup_norm <= 1.0 && out.gradient_norm <= 1.0) return out;
    const double next = 0.9 * out.params.epsilon;
    if (next / 2 < 2.0 * rm) {
      throw ConfigError("cannot normalize continuum data on M=" + std::to_string(grid.size()) +
                        ": |grad w|_2 = " + std::to_string(out.gradient_norm) +
                        " with epsilon already at " + std::to_string(out.params.epsilon));
    }
    out.params.epsilon = next;
    ++out.shrink_steps;
  }
}

double bahouri_chemin_value(Point x) {
  return odd_odd_extension(x, [](double, double) { return 1.0; });
}

VorticityField make_bahouri_chemin(const Grid& grid) {
  return sample_grid(grid, [](Point x) { return bahouri_chemin_value(x); });
}

ScalingParam::ScalingParam(double lambda) : lambda_(lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ConfigError("scaling parameter must be positive, got " + std::to_string(lambda));
  }
}

VorticityField rescale_solution(const VorticityField& omega, ScalingParam lambda) {
  VorticityField out = omega;
  for (double& w : out.samples()) w *= lambda.value();
  out.set_time(omega.time() / lambda.value());
  return out;
}

}  // namespace critflow
