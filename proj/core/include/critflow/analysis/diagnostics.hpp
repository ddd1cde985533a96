#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "critflow/evolution/evolve.hpp"
#include "critflow/fields/field_types.hpp"
#include "critflow/flow/flow_state.hpp"
#include "critflow/initial/initial_data.hpp"

namespace critflow {

/// Cartesian gradient of a field, evaluated spectrally on the grid.
struct GradientField {
  std::vector<double> d1;
  std::vector<double> d2;
};
GradientField gradient(const VorticityField& w);

/// |grad w|_2 by Parseval.
double gradient_l2(const VorticityField& w);
/// (int |grad w|^q)^{1/q} by grid quadrature, q > 0.
double gradient_lq(const VorticityField& w, double q);

struct SobolevPair {
  double s = 1.0;
  double p = 2.0;
};

/// (int | |nabla|^s w |^p)^{1/p} by grid quadrature of the spectral multiplier.
double sobolev_norm(const VorticityField& w, SobolevPair sp);

struct NormOptions {
  std::vector<SobolevPair> sobolev;
  std::vector<double> deltas;
  int polar_radii = 800;
  int polar_angles = 1024;
  double polar_r_min = 0.0;  // 0 selects one grid spacing
  bool polar = true;
};

/// All squared quantities are integrals over the torus with Lebesgue measure.
struct NormReport {
  double time = 0.0;
  double sup_norm = 0.0;
  double l2_squared = 0.0;
  double h1_squared = 0.0;  // |grad w|_2^2 (Parseval)
  std::vector<double> deltas;
  std::vector<double> h1_outside_squared;  // int_{|y| > delta} |grad w|^2
  std::vector<SobolevPair> sobolev;
  std::vector<double> sobolev_norms;
  /// int int r |d_r w|^2 dr dth and int int r^-1 |d_th w|^2 dr dth over the
  /// disc r <= 1, from polar resampling (four quadrants).
  double polar_radial = 0.0;
  double polar_angular = 0.0;
  std::vector<std::string> warnings;
};
NormReport norm_report(const VorticityField& w, const NormOptions& options = {});

/// int_{|y| > delta} |grad w|^2 by masked grid quadrature.
double h1_outside_squared(const VorticityField& w, double delta);

/// Threshold set A(t) = { r in [N^{-1/4}, a0/2] : |I(t,r)| >= M^{-1} (ln 1/r)^{-alpha/3} }.
struct OccupancySetParams {
  double N = 0.0;
  double growth_target = 1.0;  // M
  double alpha = 0.55;
  double a0 = 1.0;
};

struct AngularOccupancy {
  double time = 0.0;
  double level = 0.5;
  std::vector<double> radii;
  std::vector<double> measure;  // |I(t, r)| in [0, pi/2]
  std::vector<bool> in_set;     // A(t) membership, when requested
  /// Haar-weighted (dr/r) mean of |I| over radii in [r_lo, r_hi].
  double haar_average(double r_lo, double r_hi) const;
  /// Haar-weighted fraction of radii in [r_lo, r_hi] with |I| <= threshold.
  double haar_fraction_at_most(double threshold, double r_lo, double r_hi) const;
};

/// |I(t,r)| = measure of { th in [0, pi/2] : w(r, th) >= level } on `angles`
/// equal angle cells (cell midpoints).
AngularOccupancy angular_occupancy(const VorticityField& w, std::span<const double> radii,
                                   double level = 0.5, int angles = 4096,
                                   const std::optional<OccupancySetParams>& set = std::nullopt);

/// Geometry of the traced segment image. For w >= 0 on the first quadrant the
/// flow compresses along x1 and stretches along x2, so the image tilts toward
/// the x2 axis.
struct WedgeReport {
  double min_ratio = 0.0;  // min over nodes of Phi2 / Phi1
  std::vector<double> radii;
  /// pi/2 - theta*(r), theta* the smallest angle among the crossings of
  /// circle r; NaN if the image misses the circle.
  std::vector<double> gap;
};
WedgeReport case_II_wedge_diagnostic(const FlowState& image, std::span<const double> radii);

/// q(t) = 2 / (1 + 2 C W t), the solution of q' = -C W q^2, q(0) = 2.
struct LosingExponent {
  double C = 0.0;
  double sup_norm = 0.0;
  std::vector<double> times;
  std::vector<double> closed_form;
  std::vector<double> numeric;
  double max_discrepancy = 0.0;
};
/// Throws ConfigError unless C > 0 and the times are nondecreasing and >= 0.
LosingExponent losing_exponent_curve(double C, double sup_norm, std::span<const double> times);

/// |grad w(t)|_2 / |grad w_0|_2 per frame.
struct GrowthSeries {
  std::vector<double> times;
  std::vector<double> ratio;
  double max_ratio = 0.0;
  double time_of_max = 0.0;
};
GrowthSeries growth_ratio(const Trajectory& trajectory);
GrowthSeries growth_ratio(std::span<const double> times, std::span<const double> h1);

/// Refinement test for W^{s,p} membership of continuum data. F(M) = |w|_{s,p}^p
/// grows as the regularization radius r_min = 2h shrinks; with L = ln(1/r_min)
/// the increments behave like dF/dL ~ L^{-gamma}, and F stays bounded iff
/// gamma > 1. For sp = 2 one expects gamma = alpha p.
struct MembershipIndicator {
  SobolevPair sobolev;
  double alpha = 0.0;
  std::vector<int> grid_sizes;
  std::vector<double> log_scales;  // L per grid
  std::vector<double> values;      // F per grid
  double decay_exponent = 0.0;     // fitted gamma
  double fit_r_squared = 0.0;

  bool member() const { return decay_exponent > 1.0; }
};
/// Throws ConfigError unless at least four increasing grid sizes are given.
std::vector<MembershipIndicator> sobolev_membership(const ContinuumDataParams& params,
                                                    std::span<const SobolevPair> pairs,
                                                    std::span<const int> grid_sizes);

}  // namespace critflow
