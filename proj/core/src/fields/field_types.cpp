#include "critflow/fields/field_types.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "critflow/errors.hpp"

namespace critflow {

VorticityField::VorticityField(Grid grid, std::vector<double> samples, Symmetry symmetry,
                               double time)
    : grid_(grid), samples_(std::move(samples)), symmetry_(symmetry), time_(time) {
  if (samples_.size() != grid_.point_count()) {
    throw ConfigError("vorticity samples: expected " + std::to_string(grid_.point_count()) +
                      " values, got " + std::to_string(samples_.size()));
  }
}

VorticityField::VorticityField(Grid grid, Symmetry symmetry, double time)
    : grid_(grid), samples_(grid.point_count(), 0.0), symmetry_(symmetry), time_(time) {}

double VorticityField::antisymmetry_residual() const {
  const int m = grid_.size();
  double worst = 0.0;
  for (int i1 = 0; i1 < m; ++i1) {
    const int n1 = grid_.mirror(i1);
    for (int i2 = 0; i2 < m; ++i2) {
      const int n2 = grid_.mirror(i2);
      const double w = (*this)(i1, i2);
      worst = std::max({worst, std::abs(w + (*this)(n1, i2)), std::abs(w + (*this)(i1, n2))});
    }
  }
  return worst;
}

double VorticityField::mean() const {
  double sum = 0.0;
  for (double w : samples_) sum += w;
  return sum / static_cast<double>(samples_.size());
}

double VorticityField::max_abs() const {
  double worst = 0.0;
  for (double w : samples_) worst = std::max(worst, std::abs(w));
  return worst;
}

void VorticityField::check_symmetry() const {
  if (symmetry_ != Symmetry::kOddOdd) return;
  const double residual = antisymmetry_residual();
  if (residual > 1e-10) {
    throw InvalidInputError("field flagged odd-odd has antisymmetry residual " +
                            std::to_string(residual));
  }
  if (std::abs(mean()) > 1e-12) {
    throw InvalidInputError("field flagged odd-odd has nonzero mean " + std::to_string(mean()));
  }
}

VelocityField::VelocityField(Grid g, std::vector<double> a, std::vector<double> b, double t)
    : grid(g), u1(std::move(a)), u2(std::move(b)), time(t) {
  if (u1.size() != grid.point_count() || u2.size() != grid.point_count()) {
    throw ConfigError("velocity components do not match the grid");
  }
}

double VelocityField::max_speed() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < u1.size(); ++i) worst = std::max(worst, std::hypot(u1[i], u2[i]));
  return worst;
}

}  // namespace critflow
