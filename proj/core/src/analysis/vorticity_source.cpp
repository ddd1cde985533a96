#include "critflow/analysis/vorticity_source.hpp"

#include <cmath>

#include "critflow/fields/sampling.hpp"

namespace critflow {

VorticitySource zero_source() {
  return {[](Point) { return 0.0; }, 0.0, {}, {}, {}, 0.0, "zero"};
}

VorticitySource bahouri_chemin_source() {
  return {bahouri_chemin_value, 1.0, {-1.0, 0.0}, {-1.0, 0.0}, {{0.0, 0.0}}, 0.0, "bahouri-chemin"};
}

VorticitySource bump_source(const BumpDataParams& params) {
  params.validate();
  return {[params](Point x) { return bump_value(params, x); },
          1.0,
          {},
          {},
          {{0.0, 0.0}},
          0.0,
          "bump N=" + std::to_string(params.N)};
}

VorticitySource field_source(const VorticityField& field) {
  auto held = std::make_shared<const VorticityField>(field);
  return {[held](Point x) { return sample_at(*held, x); },
          field.max_abs(),
          {},
          {},
          {{0.0, 0.0}},
          field.grid().spacing(),
          "grid M=" + std::to_string(field.grid().size())};
}

VorticitySource gaussian_quadrupole_source(double width) {
  const double inv = 1.0 / (width * width);
  // max of x1 x2 exp(-|x|^2/w^2) is at x1 = x2 = w/sqrt(2).
  return {[inv](Point x) { return x.x1 * x.x2 * std::exp(-(x.x1 * x.x1 + x.x2 * x.x2) * inv); },
          0.5 * width * width * std::exp(-1.0),
          {},
          {},
          {{0.0, 0.0}},
          0.0,
          "gaussian quadrupole"};
}

VorticitySource scaled_source(VorticitySource src, double factor) {
  auto inner = src.value;
  src.value = [inner, factor](Point x) { return factor * inner(x); };
  src.sup_norm *= std::abs(factor);
  return src;
}

}  // namespace critflow
