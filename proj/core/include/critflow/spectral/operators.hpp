#pragma once

#include <span>
#include <vector>

#include "critflow/fields/field_types.hpp"
#include "critflow/spectral/spectral_field.hpp"

namespace critflow {

/// Mean modes below this magnitude are treated as roundoff and zeroed; above
/// it the Biot-Savart law is undefined on the torus.
inline constexpr double kMeanTolerance = 1e-12;

enum class Axis { kX1, kX2 };

/// Multiplier i*pi*k_axis. Nyquist modes of the differentiated axis are zeroed.
SpectralField derivative(const SpectralField& f, Axis axis);

/// Multiplier -pi^2 |k|^2.
SpectralField laplacian(const SpectralField& f);

/// Streamfunction psi with laplacian(psi) = omega and zero mean.
/// Throws InvalidInputError if |c_0| > kMeanTolerance.
SpectralField invert_laplacian(const SpectralField& omega);

/// Multiplier (pi |k|)^s, s in (0, 2]; throws ConfigError otherwise.
SpectralField fractional_derivative(const SpectralField& f, double s);

/// 2/3 rule: zeroes every mode with max(|k1|, |k2|) > M/3.
SpectralField dealias(const SpectralField& f);
void dealias_in_place(SpectralField& f);

/// Odd-odd antisymmetrization g = (f(x1,x2) - f(-x1,x2) - f(x1,-x2) + f(-x1,-x2)) / 4.
std::vector<double> project_odd_odd(const Grid& grid, std::span<const double> samples);
VorticityField project_odd_odd(const VorticityField& field);
/// Same projection applied to coefficients (odd-odd fields have real c_k).
void project_odd_odd_in_place(SpectralField& f);

/// Spectral velocity u = (d2 psi, -d1 psi), Delta psi = w: positive w turns
/// clockwise, so odd-odd w >= 0 on the first quadrant compresses along x1 and
/// stretches along x2 near the origin.
struct SpectralVelocity {
  SpectralField u1;
  SpectralField u2;
};
SpectralVelocity velocity_spectrum(const SpectralField& omega);
VelocityField velocity_from_vorticity(const VorticityField& omega);

/// d1 u1 + d2 u2 and d2 u1 - d1 u2 (the inverse of velocity_from_vorticity),
/// both evaluated spectrally.
std::vector<double> divergence(const VelocityField& u);
std::vector<double> vorticity_from_velocity(const VelocityField& u);

}  // namespace critflow
