#pragma once

#include <span>
#include <vector>

#include "critflow/spectral/grid.hpp"

namespace critflow {

enum class Symmetry { kNone, kOddOdd };

/// Scalar vorticity samples on a torus grid, row-major with x1 as the row
/// index: samples[i1 * M + i2] = omega(x1_{i1}, x2_{i2}).
class VorticityField {
 public:
  VorticityField(Grid grid, std::vector<double> samples, Symmetry symmetry = Symmetry::kNone,
                 double time = 0.0);
  /// Zero field.
  explicit VorticityField(Grid grid, Symmetry symmetry = Symmetry::kOddOdd, double time = 0.0);

  const Grid& grid() const { return grid_; }
  std::span<const double> samples() const { return samples_; }
  std::span<double> samples() { return samples_; }
  double operator()(int i1, int i2) const { return samples_[grid_.index(i1, i2)]; }
  double& operator()(int i1, int i2) { return samples_[grid_.index(i1, i2)]; }

  Symmetry symmetry() const { return symmetry_; }
  void set_symmetry(Symmetry s) { symmetry_ = s; }
  double time() const { return time_; }
  void set_time(double t) { time_ = t; }

  /// max |w(x) + w(-x1, x2)| and max |w(x) + w(x1, -x2)| over the grid.
  double antisymmetry_residual() const;
  /// Grid average of the samples.
  double mean() const;
  double max_abs() const;

  /// Throws InvalidInputError if the odd-odd flag is set but the samples
  /// violate it (residual 1e-10, mean 1e-12).
  void check_symmetry() const;

 private:
  Grid grid_;
  std::vector<double> samples_;
  Symmetry symmetry_;
  double time_;
};

struct VelocityField {
  VelocityField(Grid grid, std::vector<double> u1, std::vector<double> u2, double time = 0.0);

  Grid grid;
  std::vector<double> u1;
  std::vector<double> u2;
  double time = 0.0;

  double max_speed() const;
};

}  // namespace critflow
