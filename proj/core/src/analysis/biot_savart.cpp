#include "critflow/analysis/biot_savart.hpp"

#include <algorithm>
#include <array>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "critflow/errors.hpp"
#include "critflow/spectral/operators.hpp"

namespace critflow {
namespace {

constexpr int kGaussOrder = 12;
constexpr double kInvTwoPi = 0.5 / std::numbers::pi;

struct GaussRule {
  std::array<double, kGaussOrder> x{};
  std::array<double, kGaussOrder> w{};
};

const GaussRule& gauss_rule() {
  static const GaussRule rule = [] {
    using G = boost::math::quadrature::gauss<double, kGaussOrder>;
    GaussRule r;
    const auto& a = G::abscissa();
    const auto& wt = G::weights();
    int k = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      r.x[k] = -a[i];
      r.w[k++] = wt[i];
      if (a[i] != 0.0) {
        r.x[k] = a[i];
        r.w[k++] = wt[i];
      }
    }
    return r;
  }();
  return rule;
}

Point kernel(Point z) {
  const double r2 = z.x1 * z.x1 + z.x2 * z.x2;
  return Point{z.x2, -z.x1} * (kInvTwoPi / r2);
}

/// Sums over images n != 0 with |n_i| <= L of the kernel at z - 2n, tabulated
/// with one ghost node beyond [-1, 1] on each side plus one more on the right
/// for the four-point stencil.
class ImageTable {
 public:
  ImageTable(int cells, std::vector<Point> values) : cells_(cells), h_(2.0 / cells), v_(std::move(values)) {}

  Point operator()(Point z) const {
    const auto st1 = stencil(z.x1), st2 = stencil(z.x2);
    Point out;
    const int stride = cells_ + 4;
    for (int i = 0; i < 4; ++i) {
      Point row;
      const Point* base = &v_[static_cast<std::size_t>(st1.base + i) * stride + st2.base];
      for (int j = 0; j < 4; ++j) row = row + st2.w[j] * base[j];
      out = out + st1.w[i] * row;
    }
    return out;
  }

  /// Tables for the truncations L/4, L/2 and L.
  static std::array<ImageTable, 3> build(int L, int cells) {
    const int nodes = cells + 4;  // ghost nodes at j = -1 and j = cells + 1, cells + 2
    const double h = 2.0 / cells;
    std::array<std::vector<Point>, 3> v;
    for (auto& t : v) t.resize(static_cast<std::size_t>(nodes) * nodes);
    for (int a = 0; a < nodes; ++a) {
      const double z1 = -1.0 + (a - 1) * h;
      for (int b = 0; b < nodes; ++b) {
        const double z2 = -1.0 + (b - 1) * h;
        std::array<Point, 3> shell{};
        for (int n1 = -L; n1 <= L; ++n1) {
          for (int n2 = -L; n2 <= L; ++n2) {
            const int level = std::max(std::abs(n1), std::abs(n2));
            if (level == 0) continue;
            const Point k = kernel({z1 - 2.0 * n1, z2 - 2.0 * n2});
            shell[level <= L / 4 ? 0 : level <= L / 2 ? 1 : 2] += k;
          }
        }
        const std::size_t idx = static_cast<std::size_t>(a) * nodes + b;
        v[0][idx] = shell[0];
        v[1][idx] = shell[0] + shell[1];
        v[2][idx] = v[1][idx] + shell[2];
      }
    }
    return {ImageTable(cells, std::move(v[0])), ImageTable(cells, std::move(v[1])),
            ImageTable(cells, std::move(v[2]))};
  }

 private:
  struct Stencil {
    int base;
    std::array<double, 4> w;
  };
  Stencil stencil(double x) const {
    const double s = (x + 1.0) / h_;
    const double fl = std::clamp(std::floor(s), 0.0, static_cast<double>(cells_ - 1));
    const double f = s - fl;
    // Node j of the table sits at storage index j + 1.
    return {static_cast<int>(fl),
            {-f * (f - 1.0) * (f - 2.0) / 6.0, (f + 1.0) * (f - 1.0) * (f - 2.0) / 2.0,
             -(f + 1.0) * f * (f - 2.0) / 2.0, (f + 1.0) * f * (f - 1.0) / 6.0}};
  }

  int cells_;
  double h_;
  std::vector<Point> v_;
};

const std::array<ImageTable, 3>& image_tables(int L, int cells) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<std::array<ImageTable, 3>>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{L, cells}];
  if (!slot) slot = std::make_unique<std::array<ImageTable, 3>>(ImageTable::build(L, cells));
  return *slot;
}

/// The truncation error of the square image sum behaves like a / (L + 1/2)^2;
/// eliminates it from truncations L/2 and L.
Point extrapolate(Point half, Point full, int L) {
  const double a = (0.5 * L + 0.5) * (0.5 * L + 0.5), b = (L + 0.5) * (L + 0.5);
  return full + (full - half) * (a / (b - a));
}

/// Wraps into (-1, 1].
double wrap_upper(double v) {
  const double w = wrap_coordinate(v);
  return w == -1.0 ? 1.0 : w;
}

std::vector<double> axis_mesh(double x, const std::vector<double>& breaks,
                              const std::vector<double>& focus, const LatticeOptions& o) {
  std::vector<double> br{0.0};
  for (double a : breaks) br.push_back(wrap_upper(x - a));
  std::vector<double> targets{0.0};
  for (double p : focus) {
    targets.push_back(wrap_upper(x - p));
    br.push_back(targets.back());
  }
  return graded_mesh(-1.0, 1.0, br, targets, o.grading_ratio, o.min_panel);
}

template <class Fn>
void for_each_node(const std::vector<double>& m1, const std::vector<double>& m2, double skip_size,
                   Fn&& fn) {
  const GaussRule& g = gauss_rule();
  for (std::size_t i = 0; i + 1 < m1.size(); ++i) {
    const double a1 = m1[i], b1 = m1[i + 1];
    const double c1 = 0.5 * (a1 + b1), r1 = 0.5 * (b1 - a1);
    for (std::size_t j = 0; j + 1 < m2.size(); ++j) {
      const double a2 = m2[j], b2 = m2[j + 1];
      // The four innermost panels around the kernel singularity are dropped;
      // their contribution is O(skip_size |w|_inf).
      const bool at_origin = (a1 == 0.0 || b1 == 0.0) && (a2 == 0.0 || b2 == 0.0);
      if (at_origin && r1 <= skip_size && 0.5 * (b2 - a2) <= skip_size) continue;
      const double c2 = 0.5 * (a2 + b2), r2 = 0.5 * (b2 - a2);
      for (int p = 0; p < kGaussOrder; ++p) {
        const double z1 = c1 + r1 * g.x[p];
        for (int q = 0; q < kGaussOrder; ++q) {
          fn(Point{z1, c2 + r2 * g.x[q]}, g.w[p] * g.w[q] * r1 * r2);
        }
      }
    }
  }
}

}  // namespace

std::vector<double> graded_mesh(double lo, double hi, std::vector<double> breaks,
                                const std::vector<double>& targets, double ratio,
                                double min_panel) {
  breaks.push_back(lo);
  breaks.push_back(hi);
  breaks.insert(breaks.end(), targets.begin(), targets.end());
  std::sort(breaks.begin(), breaks.end());
  std::vector<double> pts;
  for (double b : breaks) {
    if (b >= lo && b <= hi && (pts.empty() || b - pts.back() > 1e-15)) pts.push_back(b);
  }
  auto is_target = [&](double v) {
    return std::any_of(targets.begin(), targets.end(), [v](double t) { return std::abs(t - v) <= 1e-15; });
  };
  std::vector<double> out{pts.front()};
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double a = pts[i], b = pts[i + 1];
    const bool ta = is_target(a), tb = is_target(b);
    std::vector<double> inner;
    const double mid = (ta && tb) ? 0.5 * (a + b) : (ta ? b : a);
    if (ta && tb) inner.push_back(mid);
    if (ta) {
      for (double len = (mid - a) * ratio; len > min_panel; len *= ratio) inner.push_back(a + len);
      inner.push_back(a + std::min(min_panel, 0.5 * (mid - a)));
    }
    if (tb) {
      for (double len = (b - mid) * ratio; len > min_panel; len *= ratio) inner.push_back(b - len);
      inner.push_back(b - std::min(min_panel, 0.5 * (b - mid)));
    }
    std::sort(inner.begin(), inner.end());
    for (double v : inner) {
      if (v > out.back() && v < b) out.push_back(v);
    }
    out.push_back(b);
  }
  return out;
}

double source_mean(const VorticitySource& source) {
  LatticeOptions o;
  std::vector<double> focus1, focus2;
  for (Point p : source.focus_points) {
    focus1.push_back(p.x1);
    focus2.push_back(p.x2);
  }
  // Integrate over z in (-1, 1]^2 with y = -z.
  const auto m1 = axis_mesh(0.0, source.x1_breaks, focus1, o);
  const auto m2 = axis_mesh(0.0, source.x2_breaks, focus2, o);
  double total = 0.0;
  for_each_node(m1, m2, 0.0, [&](Point z, double w) { total += w * source.value(wrap_point(Point{} - z)); });
  return total / 4.0;
}

LatticeReport lattice_biot_savart_report(const VorticitySource& source,
                                         std::span<const Point> points,
                                         const LatticeOptions& options) {
  if (options.n_max < 4 || options.n_max % 4 != 0) throw ConfigError("n_max must be a positive multiple of 4");
  if (options.table_size < 16) throw ConfigError("image table too coarse");
  LatticeReport rep;
  const auto& tables = image_tables(options.n_max, options.table_size);
  std::vector<double> focus1, focus2;
  for (Point p : source.focus_points) {
    focus1.push_back(p.x1);
    focus2.push_back(p.x2);
  }
  const int L = options.n_max;
  for (Point x : points) {
    const auto m1 = axis_mesh(x.x1, source.x1_breaks, focus1, options);
    const auto m2 = axis_mesh(x.x2, source.x2_breaks, focus2, options);
    Point direct;
    std::array<Point, 3> images{};
    for_each_node(m1, m2, options.min_panel, [&](Point z, double w) {
      const double v = source.value(wrap_point(x - z));
      if (v == 0.0) return;
      const double wv = w * v;
      direct += wv * kernel(z);
      for (int k = 0; k < 3; ++k) images[k] += wv * tables[k](z);
    });
    const Point quarter = direct + images[0], half = direct + images[1], full = direct + images[2];
    const Point coarse = extrapolate(quarter, half, L / 2);
    const Point fine = extrapolate(half, full, L);
    rep.truncated.push_back(full);
    rep.half_truncated.push_back(half);
    rep.velocity.push_back(fine);
    rep.max_truncation_change =
        std::max({rep.max_truncation_change, std::abs(full.x1 - half.x1), std::abs(full.x2 - half.x2)});
    rep.max_change = std::max({rep.max_change, std::abs(fine.x1 - coarse.x1), std::abs(fine.x2 - coarse.x2)});
  }
  return rep;
}

std::vector<Point> lattice_biot_savart(const VorticitySource& source, std::span<const Point> points,
                                       const LatticeOptions& options) {
  const double mean = source_mean(source);
  if (std::abs(mean) > kMeanTolerance * std::max(1.0, source.sup_norm) * 100) {
    throw InvalidInputError("lattice Biot-Savart needs mean-zero vorticity (mean " +
                            std::to_string(mean) + ")");
  }
  LatticeReport rep = lattice_biot_savart_report(source, points, options);
  if (rep.max_change > options.stability_tolerance) {
    throw NumericalError("lattice sum not converged: truncations " + std::to_string(options.n_max / 2) +
                         " and " + std::to_string(options.n_max) + " differ by " +
                         std::to_string(rep.max_change));
  }
  return std::move(rep.velocity);
}

}  // namespace critflow
