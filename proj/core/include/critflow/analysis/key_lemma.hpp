#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "critflow/analysis/biot_savart.hpp"
#include "critflow/analysis/vorticity_source.hpp"
#include "critflow/fields/field_types.hpp"

namespace critflow {

/// Quadrant integral Q(x) = int_{[2x1,1) x [2x2,1)} y1 y2 |y|^-4 w(y) dy,
/// computed in polar form int int sin(th) cos(th) w dth d(ln r) by nested
/// adaptive Gauss-Kronrod quadrature.
double quadrant_integral(const VorticitySource& source, Point x, double tolerance = 1e-10);
/// Same integral of the cubic interpolant of a grid field, by tensor Gauss
/// rules on the grid cells (exact for the interpolant up to kernel smoothness).
double quadrant_integral(const VorticityField& field, Point x);

/// With the velocity orientation of velocity_from_vorticity the decomposition
/// reads
///   u1/x1 = -(4/pi) Q + B1,   u2/x2 = +(4/pi) Q + B2,
/// with |B_i| <= C |w|_inf (1 + ln(1 + x_{3-i}/x_i)).
struct KeyLemmaComponent {
  double ratio = 0.0;      // u^i / x_i
  double remainder = 0.0;  // B_i
  double bound = 0.0;      // |w|_inf (1 + ln(1 + x_{3-i}/x_i))
  double bound_ratio = 0.0;
};

struct KeyLemmaReport {
  Point x;
  Point velocity;
  double sup_norm = 0.0;
  double integral = 0.0;  // Q, shared by both components
  std::array<KeyLemmaComponent, 2> component;
  double max_bound_ratio() const;
};

/// Sign of the (4/pi) Q term for component i (0 or 1).
inline constexpr double key_lemma_sign(int i) { return i == 0 ? -1.0 : 1.0; }

struct KeyLemmaOptions {
  LatticeOptions lattice;
  double tolerance = 1e-10;
};

/// Velocity from the lattice oracle. Throws DomainError unless x lies in
/// (0, 1/2)^2 at least two source cells away from both axes.
std::vector<KeyLemmaReport> key_lemma_decompose(const VorticitySource& source,
                                                std::span<const Point> points,
                                                const KeyLemmaOptions& options = {});
/// Velocity supplied by the caller (e.g. spectral, for grid sources).
KeyLemmaReport key_lemma_decompose(const VorticitySource& source, Point x, Point velocity,
                                   double tolerance = 1e-10);

/// Grid field with its spectral velocity; Q from the cellwise rule.
KeyLemmaReport key_lemma_decompose(const VorticityField& field, const VelocityField& velocity,
                                   Point x);

/// min over intervals I in [0, pi/2] of length 1/(2M) of int_I sin cos,
/// closed form sin^2(1/(2M)) / 2.
double angular_mass_floor(double M);
/// Same quantity by numerical minimization over the interval placement.
double angular_mass_floor_numeric(double M);

}  // namespace critflow
