#pragma once

#include <span>
#include <vector>

#include "critflow/spectral/spectral_field.hpp"

namespace critflow {

/// Real grid samples -> coefficients c_k. Throws ConfigError on size mismatch.
SpectralField forward_transform(const Grid& grid, std::span<const double> samples);

/// Coefficients -> real grid samples. The input is not modified.
std::vector<double> inverse_transform(const SpectralField& field);

/// Writes the inverse transform into out (size M*M) without allocating a
/// result vector; scratch must hold grid.spectral_count() values.
void inverse_transform_into(const SpectralField& field, std::span<Complex> scratch,
                            std::span<double> out);

}  // namespace critflow
