#pragma once

#include <cstddef>

namespace critflow {

/// Uniform M x M sampling of the torus [-1,1)^2. Node j sits at -1 + j*h with
/// h = 2/M, so the origin is node M/2.
class Grid {
 public:
  static constexpr int kMinSize = 64;

  /// Throws ConfigError unless size is a power of two >= kMinSize.
  explicit Grid(int size);

  int size() const { return size_; }
  double spacing() const { return spacing_; }
  std::size_t point_count() const { return static_cast<std::size_t>(size_) * size_; }
  double coordinate(int j) const { return -1.0 + j * spacing_; }
  std::size_t index(int i1, int i2) const { return static_cast<std::size_t>(i1) * size_ + i2; }

  /// Index of the node at -x_j (mod the period).
  int mirror(int j) const { return (size_ - j) & (size_ - 1); }

  /// Number of stored complex coefficients in the half spectrum.
  std::size_t spectral_count() const { return static_cast<std::size_t>(size_) * (size_ / 2 + 1); }

  friend bool operator==(const Grid&, const Grid&) = default;

  /// Smallest admissible grid with spacing <= max_spacing.
  static Grid finest_needed(double max_spacing);

 private:
  int size_;
  double spacing_;
};

}  // namespace critflow
