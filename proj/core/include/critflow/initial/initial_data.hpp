#pragma once

#include <functional>

#include "critflow/fields/field_types.hpp"
#include "critflow/point.hpp"

namespace critflow {

/// Quintic smoothstep 10t^3 - 15t^4 + 6t^5, clamped to [0, 1]; C2 at both ends.
double smoothstep(double t);

/// Rises from 0 at a to 1 at b, falls from 1 at c to 0 at d.
double smooth_plateau(double x, double a, double b, double c, double d);

/// Angular profile: 1 on [pi/4, pi/3], 0 outside [pi/6, 5pi/12].
double angular_bump(double theta);

/// Extends a first-quadrant profile f(|x1|, |x2|) to an odd-odd function of
/// the torus; nodes on the axes and on the seam x = -1 map to zero.
double odd_odd_extension(Point p, const std::function<double(double, double)>& quadrant);

/// Two-scale data omega_0 = chi(r) psi(theta).
struct BumpDataParams {
  int N = 16;

  double inner_plateau() const;   // 1/N
  double outer_plateau() const;   // N^{-1/2}
  double inner_support() const;   // 1/(2N)
  double outer_support() const;   // 2 N^{-1/2}
  /// Smallest grid with N^{-1}/2 >= 4h.
  int required_grid_size() const;
  void validate() const;
};

double bump_radial(const BumpDataParams& p, double r);
/// omega_0 at a point of the torus (odd-odd extension).
double bump_value(const BumpDataParams& p, Point x);

/// Throws ConfigError naming the required grid size when the grid cannot
/// resolve the inner scale.
VorticityField make_bump_data(const BumpDataParams& params, const Grid& grid);

/// omega_0 = (ln 1/r)^{-alpha} psi(theta) xi(r), radial factor frozen below r_min.
struct ContinuumDataParams {
  double alpha = 0.55;
  double epsilon = 0.5;
  double r_min = 0.0;  // 0 selects 2h on the target grid

  void validate(const Grid& grid) const;
  double effective_r_min(const Grid& grid) const;
};

double continuum_value(const ContinuumDataParams& p, const Grid& grid, Point x);
VorticityField make_continuum_data(const ContinuumDataParams& params, const Grid& grid);

/// Result of shrinking epsilon until |omega_0|_inf <= 1 and |grad omega_0|_2 <= 1.
struct ContinuumNormalization {
  ContinuumDataParams params;
  double sup_norm = 0.0;
  double gradient_norm = 0.0;
  int shrink_steps = 0;
};
/// Shrinks epsilon geometrically (factor 0.9). Throws ConfigError when the
/// cutoff would have to drop into the regularization core (ε/2 < 2 r_min).
ContinuumNormalization normalize_continuum_data(const ContinuumDataParams& params, const Grid& grid);

/// Odd-odd extension of the indicator of [0,1]^2.
double bahouri_chemin_value(Point x);
VorticityField make_bahouri_chemin(const Grid& grid);

/// Strictly positive scaling factor.
class ScalingParam {
 public:
  explicit ScalingParam(double lambda);
  double value() const { return lambda_; }

 private:
  double lambda_;
};

/// omega^lambda(t, x) = lambda omega(lambda t, x): a snapshot of omega at time
/// t becomes a snapshot of omega^lambda at time t / lambda.
VorticityField rescale_solution(const VorticityField& omega, ScalingParam lambda);

}  // namespace critflow
