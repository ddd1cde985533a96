#include "critflow/spectral/operators.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "critflow/errors.hpp"
#include "critflow/spectral/transform.hpp"

namespace critflow {
namespace {

constexpr double kPi = std::numbers::pi;

template <class F>
SpectralField map_coefficients(const SpectralField& f, F&& mult) {
  SpectralField out = f;
  out.for_each([&](int k1, int k2, Complex& c) { c *= mult(k1, k2); });
  return out;
}

}  // namespace

SpectralField derivative(const SpectralField& f, Axis axis) {
  const int nyquist = f.grid().size() / 2;
  return map_coefficients(f, [&](int k1, int k2) -> Complex {
    const int k = axis == Axis::kX1 ? k1 : k2;
    if (k == nyquist || k == -nyquist) return 0.0;
    return Complex(0.0, kPi * k);
  });
}

SpectralField laplacian(const SpectralField& f) {
  return map_coefficients(f, [](int k1, int k2) -> Complex {
    return -kPi * kPi * static_cast<double>(k1 * k1 + k2 * k2);
  });
}

SpectralField invert_laplacian(const SpectralField& omega) {
  const double mean = std::abs(omega.at(0, 0));
  if (mean > kMeanTolerance) {
    throw InvalidInputError("Biot-Savart inversion needs a mean-zero vorticity; mean mode is " +
                            std::to_string(mean));
  }
  return map_coefficients(omega, [](int k1, int k2) -> Complex {
    const int k2sum = k1 * k1 + k2 * k2;
    if (k2sum == 0) return 0.0;
    return -1.0 / (kPi * kPi * k2sum);
  });
}

SpectralField fractional_derivative(const SpectralField& f, double s) {
  if (!(s > 0.0 && s <= 2.0)) {
    throw ConfigError("fractional derivative order must lie in (0, 2], got " + std::to_string(s));
  }
  return map_coefficients(f, [s](int k1, int k2) -> Complex {
    const double k = std::hypot(static_cast<double>(k1), static_cast<double>(k2));
    return k == 0.0 ? 0.0 : std::pow(kPi * k, s);
  });
}

void dealias_in_place(SpectralField& f) {
  const int m = f.grid().size();
  f.for_each([m](int k1, int k2, Complex& c) {
    if (3 * std::max(std::abs(k1), std::abs(k2)) > m) c = 0.0;
  });
}

SpectralField dealias(const SpectralField& f) {
  SpectralField out = f;
  dealias_in_place(out);
  return out;
}

std::vector<double> project_odd_odd(const Grid& grid, std::span<const double> f) {
  if (f.size() != grid.point_count()) throw ConfigError("projection: sample count mismatch");
  const int m = grid.size();
  std::vector<double> g(f.size());
  for (int i1 = 0; i1 < m; ++i1) {
    const int n1 = grid.mirror(i1);
    for (int i2 = 0; i2 < m; ++i2) {
      const int n2 = grid.mirror(i2);
      // Grouped so that exactly odd-odd input is reproduced bit for bit.
      g[grid.index(i1, i2)] = 0.25 * ((f[grid.index(i1, i2)] - f[grid.index(n1, i2)]) +
                                      (f[grid.index(n1, n2)] - f[grid.index(i1, n2)]));
    }
  }
  return g;
}

VorticityField project_odd_odd(const VorticityField& field) {
  return VorticityField(field.grid(), project_odd_odd(field.grid(), field.samples()),
                        Symmetry::kOddOdd, field.time());
}

void project_odd_odd_in_place(SpectralField& f) {
  const int m = f.grid().size();
  const int cols = f.columns();
  const SpectralField src = f;
  for (int row = 0; row < m; ++row) {
    const int mirror_row = (m - row) & (m - 1);
    for (int col = 0; col < cols; ++col) {
      if (col == 0 || col == m / 2 || row == mirror_row) {
        f.at(row, col) = 0.0;
        continue;
      }
      f.at(row, col) = 0.5 * (src.at(row, col).real() - src.at(mirror_row, col).real());
    }
  }
}

SpectralVelocity velocity_spectrum(const SpectralField& omega) {
  const SpectralField psi = invert_laplacian(omega);
  SpectralField u2 = derivative(psi, Axis::kX1);
  u2 *= -1.0;
  return {derivative(psi, Axis::kX2), std::move(u2)};
}

VelocityField velocity_from_vorticity(const VorticityField& omega) {
  const SpectralVelocity v = velocity_spectrum(forward_transform(omega.grid(), omega.samples()));
  return VelocityField(omega.grid(), inverse_transform(v.u1), inverse_transform(v.u2),
                       omega.time());
}

std::vector<double> divergence(const VelocityField& u) {
  SpectralField d = derivative(forward_transform(u.grid, u.u1), Axis::kX1);
  d += derivative(forward_transform(u.grid, u.u2), Axis::kX2);
  return inverse_transform(d);
}

std::vector<double> vorticity_from_velocity(const VelocityField& u) {
  SpectralField c = derivative(forward_transform(u.grid, u.u1), Axis::kX2);
  SpectralField d = derivative(forward_transform(u.grid, u.u2), Axis::kX1);
  d *= -1.0;
  c += d;
  return inverse_transform(c);
}

}  // namespace critflow
