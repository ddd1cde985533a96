#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "critflow/fields/field_types.hpp"
#include "critflow/initial/initial_data.hpp"
#include "critflow/point.hpp"

namespace critflow {

/// Vorticity as a function on the torus, with the geometry quadrature needs:
/// axis-aligned lines across which it may jump, and points around which its
/// structure concentrates.
struct VorticitySource {
  std::function<double(Point)> value;
  double sup_norm = 0.0;
  std::vector<double> x1_breaks;  // lines y1 = const
  std::vector<double> x2_breaks;  // lines y2 = const
  std::vector<Point> focus_points;
  /// Grid spacing for sampled sources, 0 for closed-form ones.
  double resolution = 0.0;
  std::string name;
};

VorticitySource zero_source();
VorticitySource bahouri_chemin_source();
VorticitySource bump_source(const BumpDataParams& params);
/// Bicubic interpolant of grid samples. The field is copied.
VorticitySource field_source(const VorticityField& field);
/// Smooth odd-odd field x1 x2 exp(-|x|^2 / width^2), negligible at the seam
/// for width <= 0.2.
VorticitySource gaussian_quadrupole_source(double width = 0.2);
/// Pointwise product with a factor, keeping the geometry.
VorticitySource scaled_source(VorticitySource src, double factor);

}  // namespace critflow
