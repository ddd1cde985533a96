#include "critflow/spectral/spectral_field.hpp"

#include <string>

#include "critflow/errors.hpp"

namespace critflow {

SpectralField::SpectralField(Grid grid) : grid_(grid), coeffs_(grid.spectral_count()) {}

SpectralField::SpectralField(Grid grid, std::vector<Complex> half_spectrum)
    : grid_(grid), coeffs_(std::move(half_spectrum)) {
  if (coeffs_.size() != grid_.spectral_count()) {
    throw ConfigError("spectral field: expected " + std::to_string(grid_.spectral_count()) +
                      " coefficients, got " + std::to_string(coeffs_.size()));
  }
}

namespace {

int storage_row(int k1, int m) { return k1 >= 0 ? k1 : k1 + m; }

void check_range(int k1, int k2, int m) {
  if (k1 < -m / 2 || k1 >= m / 2 || k2 < -m / 2 || k2 >= m / 2) {
    throw DomainError("wavevector (" + std::to_string(k1) + "," + std::to_string(k2) +
                      ") outside the grid's band");
  }
}

}  // namespace

Complex SpectralField::coefficient(int k1, int k2) const {
  const int m = grid_.size();
  check_range(k1, k2, m);
  if (k2 >= 0) return at(storage_row(k1, m), k2);
  if (k2 == -m / 2) return at(storage_row(k1, m), m / 2);
  // c_{k} = conj(c_{-k}); -k1 wraps M/2 onto itself.
  const int neg_k1 = (k1 == -m / 2) ? k1 : -k1;
  return std::conj(at(storage_row(neg_k1, m), -k2));
}

void SpectralField::set_coefficient(int k1, int k2, Complex value) {
  const int m = grid_.size();
  check_range(k1, k2, m);
  if (k2 >= 0) {
    at(storage_row(k1, m), k2) = value;
  } else if (k2 == -m / 2) {
    at(storage_row(k1, m), m / 2) = value;
  } else {
    const int neg_k1 = (k1 == -m / 2) ? k1 : -k1;
    at(storage_row(neg_k1, m), -k2) = std::conj(value);
  }
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  if (!(other.grid_ == grid_)) throw ConfigError("adding spectral fields on different grids");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

}  // namespace critflow
