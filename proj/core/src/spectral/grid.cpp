#include "critflow/spectral/grid.hpp"

#include <bit>
#include <string>

#include "critflow/errors.hpp"

namespace critflow {

Grid::Grid(int size) : size_(size), spacing_(2.0 / size) {
  if (size < kMinSize || !std::has_single_bit(static_cast<unsigned>(size))) {
    throw ConfigError("grid size must be a power of two >= " + std::to_string(kMinSize) +
                      ", got " + std::to_string(size));
  }
}

Grid Grid::finest_needed(double max_spacing) {
  if (!(max_spacing > 0.0)) throw ConfigError("grid spacing bound must be positive");
  int m = kMinSize;
  while (2.0 / m > max_spacing) {
    if (m > (1 << 20)) throw ConfigError("requested spacing needs an unreasonably large grid");
    m *= 2;
  }
  return Grid(m);
}

}  // namespace critflow
