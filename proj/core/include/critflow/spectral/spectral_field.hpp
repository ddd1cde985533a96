#pragma once

#include <complex>
#include <span>
#include <vector>

#include "critflow/spectral/grid.hpp"

namespace critflow {

using Complex = std::complex<double>;

/// Fourier coefficients of a real field on the torus, normalized so that
///   f(x) = sum_k c_k exp(i pi k.x),   k in {-M/2, ..., M/2-1}^2.
///
/// Only the half spectrum k2 in [0, M/2] is stored (row a <-> k1, column b <->
/// k2); coefficients with k2 < 0 follow from Hermitian symmetry. Row M/2 and
/// column M/2 hold the Nyquist modes.
class SpectralField {
 public:
  explicit SpectralField(Grid grid);
  SpectralField(Grid grid, std::vector<Complex> half_spectrum);

  const Grid& grid() const { return grid_; }
  int columns() const { return grid_.size() / 2 + 1; }

  std::span<const Complex> data() const { return coeffs_; }
  std::span<Complex> data() { return coeffs_; }

  Complex& at(int row, int col) { return coeffs_[static_cast<std::size_t>(row) * columns() + col]; }
  Complex at(int row, int col) const {
    return coeffs_[static_cast<std::size_t>(row) * columns() + col];
  }

  /// Signed wavenumber of a storage row.
  int wavenumber_of_row(int row) const { return row < grid_.size() / 2 ? row : row - grid_.size(); }

  /// Coefficient c_k for any k in {-M/2, ..., M/2-1}^2.
  Complex coefficient(int k1, int k2) const;
  /// Sets c_k and, through the storage layout, its Hermitian partner c_{-k}.
  void set_coefficient(int k1, int k2, Complex value);

  /// Calls f(k1, k2, c) for every stored coefficient.
  template <class F>
  void for_each(F&& f) {
    const int m = grid_.size();
    const int cols = columns();
    for (int row = 0; row < m; ++row) {
      const int k1 = wavenumber_of_row(row);
      for (int col = 0; col < cols; ++col) f(k1, col, coeffs_[static_cast<std::size_t>(row) * cols + col]);
    }
  }
  template <class F>
  void for_each(F&& f) const {
    const int m = grid_.size();
    const int cols = columns();
    for (int row = 0; row < m; ++row) {
      const int k1 = wavenumber_of_row(row);
      for (int col = 0; col < cols; ++col) f(k1, col, coeffs_[static_cast<std::size_t>(row) * cols + col]);
    }
  }

  /// sum over all k (both halves) of |c_k|^2 * weight(k1, k2); the weight must
  /// be even in k.
  template <class W>
  double weighted_power(W&& weight) const {
    const int half = grid_.size() / 2;
    double total = 0.0;
    for_each([&](int k1, int k2, Complex c) {
      // Columns 0 and M/2 are their own mirror images; the rest stand for two.
      const double mult = (k2 == 0 || k2 == half) ? 1.0 : 2.0;
      total += mult * std::norm(c) * weight(k1, k2);
    });
    return total;
  }

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator*=(double s);

 private:
  Grid grid_;
  std::vector<Complex> coeffs_;
};

}  // namespace critflow
