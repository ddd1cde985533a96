#include "critflow/analysis/key_lemma.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <numbers>

#include "critflow/errors.hpp"
#include "critflow/fields/sampling.hpp"

namespace critflow {
namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
constexpr unsigned kMaxDepth = 18;

void check_point(const VorticitySource& source, Point x) {
  const double margin = std::max(2.0 * source.resolution, 0.0);
  if (!(x.x1 > margin && x.x2 > margin)) {
    throw DomainError("Key Lemma point too close to an axis (need x_i > " + std::to_string(margin) + ")");
  }
  if (x.x1 >= 0.5 || x.x2 >= 0.5) throw DomainError("Key Lemma point must lie in (0, 1/2)^2");
}

KeyLemmaReport assemble(const VorticitySource& source, Point x, Point u, double q) {
  KeyLemmaReport r;
  r.x = x;
  r.velocity = u;
  r.sup_norm = source.sup_norm;
  r.integral = q;
  const double xs[2] = {x.x1, x.x2};
  const double us[2] = {u.x1, u.x2};
  for (int i = 0; i < 2; ++i) {
    auto& c = r.component[i];
    c.ratio = us[i] / xs[i];
    c.remainder = c.ratio - key_lemma_sign(i) * (4.0 / std::numbers::pi) * q;
    c.bound = source.sup_norm * (1.0 + std::log1p(xs[1 - i] / xs[i]));
    c.bound_ratio = c.bound > 0.0 ? std::abs(c.remainder) / c.bound : 0.0;
  }
  return r;
}

// Breaks of [lo, 1]: lo followed by every grid node strictly inside.
std::vector<double> cell_breaks(const Grid& grid, double lo) {
  const double h = grid.spacing();
  std::vector<double> b{lo};
  for (double y = -1.0 + (std::floor((lo + 1.0) / h) + 1.0) * h; y < 1.0 - 0.5 * h; y += h) {
    if (y > lo + 1e-12 * h) b.push_back(y);
  }
  b.push_back(1.0);
  return b;
}

}  // namespace

double KeyLemmaReport::max_bound_ratio() const {
  return std::max(component[0].bound_ratio, component[1].bound_ratio);
}

double quadrant_integral(const VorticitySource& source, Point x, double tolerance) {
  const double a = 2.0 * x.x1, b = 2.0 * x.x2;
  if (!(a > 0.0 && b > 0.0 && a < 1.0 && b < 1.0)) throw DomainError("quadrant corner outside (0, 1)^2");
  auto inner = [&](double th) {
    const double c = std::cos(th), s = std::sin(th);
    const double r_lo = std::max(a / c, b / s), r_hi = std::min(1.0 / c, 1.0 / s);
    if (!(r_hi > r_lo)) return 0.0;
    const double v = Kronrod::integrate(
        [&](double lr) { return source.value(Point::polar(std::exp(lr), th)); }, std::log(r_lo),
        std::log(r_hi), kMaxDepth, tolerance);
    return s * c * v;
  };
  const double th_lo = std::atan2(b, 1.0), th_hi = std::atan2(1.0, a);
  std::vector<double> cuts{th_lo, std::atan2(b, a), std::numbers::pi / 4, th_hi};
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = std::max(cuts[i], th_lo), hi = std::min(cuts[i + 1], th_hi);
    if (hi > lo) total += Kronrod::integrate(inner, lo, hi, kMaxDepth, tolerance);
  }
  return total;
}

double quadrant_integral(const VorticityField& field, Point x) {
  const double a = 2.0 * x.x1, b = 2.0 * x.x2;
  if (!(a > 0.0 && b > 0.0 && a < 1.0 && b < 1.0)) throw DomainError("quadrant corner outside (0, 1)^2");
  using Gauss = boost::math::quadrature::gauss<double, 4>;
  // Nodes and weights on [-1, 1], symmetric pairs expanded.
  std::vector<double> gx, gw;
  const auto& ab = Gauss::abscissa();
  const auto& wt = Gauss::weights();
  for (std::size_t i = 0; i < ab.size(); ++i) {
    gx.push_back(ab[i]);
    gw.push_back(wt[i]);
    if (ab[i] != 0.0) {
      gx.push_back(-ab[i]);
      gw.push_back(wt[i]);
    }
  }
  auto nodes = [&](const std::vector<double>& br) {
    std::vector<std::pair<double, double>> out;
    for (std::size_t c = 0; c + 1 < br.size(); ++c) {
      const double mid = 0.5 * (br[c] + br[c + 1]), half = 0.5 * (br[c + 1] - br[c]);
      for (std::size_t g = 0; g < gx.size(); ++g) out.emplace_back(mid + half * gx[g], half * gw[g]);
    }
    return out;
  };
  const auto n1 = nodes(cell_breaks(field.grid(), a));
  const auto n2 = nodes(cell_breaks(field.grid(), b));
  double total = 0.0;
  for (const auto& [y1, w1] : n1) {
    double row = 0.0;
    for (const auto& [y2, w2] : n2) {
      const double r2 = y1 * y1 + y2 * y2;
      row += w2 * y2 / (r2 * r2) * sample_at(field, Point{y1, y2});
    }
    total += w1 * y1 * row;
  }
  return total;
}

KeyLemmaReport key_lemma_decompose(const VorticityField& field, const VelocityField& velocity,
                                   Point x) {
  check_point(field_source(field), x);
  return assemble(field_source(field), x, sample_at(velocity, x), quadrant_integral(field, x));
}

std::vector<KeyLemmaReport> key_lemma_decompose(const VorticitySource& source,
                                                std::span<const Point> points,
                                                const KeyLemmaOptions& options) {
  for (Point x : points) check_point(source, x);
  std::vector<KeyLemmaReport> out;
  if (points.empty()) return out;
  const std::vector<Point> u = source.sup_norm == 0.0
                                   ? std::vector<Point>(points.size())
                                   : lattice_biot_savart(source, points, options.lattice);
  for (std::size_t i = 0; i < points.size(); ++i) {
    out.push_back(assemble(source, points[i], u[i], quadrant_integral(source, points[i], options.tolerance)));
  }
  return out;
}

KeyLemmaReport key_lemma_decompose(const VorticitySource& source, Point x, Point velocity,
                                   double tolerance) {
  check_point(source, x);
  return assemble(source, x, velocity, quadrant_integral(source, x, tolerance));
}

double angular_mass_floor(double M) {
  const double s = std::sin(0.5 / M);
  return 0.5 * s * s;
}

double angular_mass_floor_numeric(double M) {
  const double len = 0.5 / M;
  auto mass = [len](double start) {
    const double a = std::sin(start + len), b = std::sin(start);
    return 0.5 * (a * a - b * b);
  };
  const double hi = std::numbers::pi / 2 - len;
  const auto [arg, val] = boost::math::tools::brent_find_minima(mass, 0.0, hi, 50);
  (void)arg;
  return std::min({val, mass(0.0), mass(hi)});
}

}  // namespace critflow
