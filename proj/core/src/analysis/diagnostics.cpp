#include "critflow/analysis/diagnostics.hpp"

#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "critflow/analysis/regression.hpp"
#include "critflow/errors.hpp"
#include "critflow/fields/sampling.hpp"
#include "critflow/flow/flow_diagnostics.hpp"
#include "critflow/parallel.hpp"
#include "critflow/spectral/operators.hpp"
#include "critflow/spectral/transform.hpp"

namespace critflow {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = 0.5 * std::numbers::pi;

double grid_lp(std::span<const double> f, double p, double area) {
  double s = 0.0;
  for (double v : f) s += std::pow(std::abs(v), p);
  return std::pow(s * area, 1.0 / p);
}

}  // namespace

GradientField gradient(const VorticityField& w) {
  const SpectralField c = forward_transform(w.grid(), w.samples());
  return {inverse_transform(derivative(c, Axis::kX1)), inverse_transform(derivative(c, Axis::kX2))};
}

static double masked_gradient_sum(const Grid& grid, const GradientField& g, double delta) {
  const int m = grid.size();
  double s = 0.0;
  for (int i1 = 0; i1 < m; ++i1) {
    const double x1 = grid.coordinate(i1);
    for (int i2 = 0; i2 < m; ++i2) {
      if (std::hypot(x1, grid.coordinate(i2)) <= delta) continue;
      const std::size_t k = grid.index(i1, i2);
      s += g.d1[k] * g.d1[k] + g.d2[k] * g.d2[k];
    }
  }
  return s * grid.spacing() * grid.spacing();
}

double gradient_l2(const VorticityField& w) {
  const SpectralField c = forward_transform(w.grid(), w.samples());
  const int nyq = w.grid().size() / 2;
  // Nyquist modes are dropped by the derivative, so Parseval matches grid quadrature.
  return std::sqrt(4.0 * c.weighted_power([nyq](int k1, int k2) {
    const double a = k1 == -nyq ? 0.0 : k1;
    const double b = k2 == nyq ? 0.0 : k2;
    return kPi * kPi * (a * a + b * b);
  }));
}

double gradient_lq(const VorticityField& w, double q) {
  if (!(q > 0.0)) throw ConfigError("gradient norm exponent must be positive");
  const GradientField g = gradient(w);
  const double area = w.grid().spacing() * w.grid().spacing();
  double s = 0.0;
  for (std::size_t i = 0; i < g.d1.size(); ++i) s += std::pow(std::hypot(g.d1[i], g.d2[i]), q);
  return std::pow(s * area, 1.0 / q);
}

double sobolev_norm(const VorticityField& w, SobolevPair sp) {
  if (!(sp.p > 0.0)) throw ConfigError("Sobolev exponent p must be positive");
  const SpectralField c = forward_transform(w.grid(), w.samples());
  const double area = w.grid().spacing() * w.grid().spacing();
  return grid_lp(inverse_transform(fractional_derivative(c, sp.s)), sp.p, area);
}

double h1_outside_squared(const VorticityField& w, double delta) {
  return masked_gradient_sum(w.grid(), gradient(w), delta);
}

NormReport norm_report(const VorticityField& w, const NormOptions& options) {
  if (options.polar && (options.polar_radii < 2 || options.polar_angles < 4))
    throw ConfigError("polar quadrature needs at least 2 radii and 4 angles");
  const Grid& grid = w.grid();
  const double area = grid.spacing() * grid.spacing();
  NormReport r;
  r.time = w.time();
  r.sup_norm = w.max_abs();
  for (double v : w.samples()) r.l2_squared += v * v * area;
  const double h1 = gradient_l2(w);
  r.h1_squared = h1 * h1;

  const GradientField g = gradient(w);
  r.deltas = options.deltas;
  for (double delta : options.deltas) {
    if (!(delta > 0.0)) throw ConfigError("annulus radius must be positive");
    r.h1_outside_squared.push_back(masked_gradient_sum(grid, g, delta));
  }

  r.sobolev = options.sobolev;
  for (const SobolevPair& sp : options.sobolev) {
    if (std::abs(sp.s * sp.p - 2.0) > 1e-12) {
      std::ostringstream msg;
      msg << "W^{" << sp.s << "," << sp.p << "} is not scale critical (sp = " << sp.s * sp.p
          << ")";
      r.warnings.push_back(msg.str());
    }
    r.sobolev_norms.push_back(sobolev_norm(w, sp));
  }

  if (!options.polar) return r;

  // Midpoint rule in (ln r, theta) over the disc r <= 1; the integrands
  // r^2 (e_r.grad w)^2 and r^2 (e_th.grad w)^2 carry the Jacobian r dr = r^2 dln r.
  const double r_min = options.polar_r_min > 0.0 ? options.polar_r_min : grid.spacing();
  const int nr = options.polar_radii;
  const int na = options.polar_angles;
  const double dl = -std::log(r_min) / nr;
  const double da = 2.0 * kPi / na;
  std::vector<double> radial(nr), angular(nr);
  parallel_for(static_cast<std::size_t>(nr), [&](std::size_t ir) {
    const double rad = r_min * std::exp((ir + 0.5) * dl);
    double sr = 0.0, sa = 0.0;
    for (int ia = 0; ia < na; ++ia) {
      const double th = (ia + 0.5) * da;
      const double c = std::cos(th), s = std::sin(th);
      const Point p{rad * c, rad * s};
      const double g1 = sample_at(grid, g.d1, p);
      const double g2 = sample_at(grid, g.d2, p);
      const double er = c * g1 + s * g2;
      const double et = -s * g1 + c * g2;
      sr += er * er;
      sa += et * et;
    }
    radial[ir] = sr * rad * rad;
    angular[ir] = sa * rad * rad;
  });
  for (int ir = 0; ir < nr; ++ir) {
    r.polar_radial += radial[ir] * dl * da;
    r.polar_angular += angular[ir] * dl * da;
  }
  return r;
}

double AngularOccupancy::haar_average(double r_lo, double r_hi) const {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < radii.size(); ++i)
    if (radii[i] >= r_lo && radii[i] <= r_hi) idx.push_back(i);
  if (idx.empty()) return std::numeric_limits<double>::quiet_NaN();
  if (idx.size() == 1) return measure[idx.front()];
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j + 1 < idx.size(); ++j) {
    const double w = std::log(radii[idx[j + 1]] / radii[idx[j]]);
    num += 0.5 * w * (measure[idx[j]] + measure[idx[j + 1]]);
    den += w;
  }
  return num / den;
}

double AngularOccupancy::haar_fraction_at_most(double threshold, double r_lo, double r_hi) const {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < radii.size(); ++i)
    if (radii[i] >= r_lo && radii[i] <= r_hi) idx.push_back(i);
  if (idx.empty()) return std::numeric_limits<double>::quiet_NaN();
  if (idx.size() == 1) return measure[idx.front()] <= threshold ? 1.0 : 0.0;
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j + 1 < idx.size(); ++j) {
    const double w = std::log(radii[idx[j + 1]] / radii[idx[j]]);
    const double hits =
        (measure[idx[j]] <= threshold ? 0.5 : 0.0) + (measure[idx[j + 1]] <= threshold ? 0.5 : 0.0);
    num += w * hits;
    den += w;
  }
  return num / den;
}

AngularOccupancy angular_occupancy(const VorticityField& w, std::span<const double> radii,
                                   double level, int angles,
                                   const std::optional<OccupancySetParams>& set) {
  if (angles < 1) throw ConfigError("occupancy needs at least one angle cell");
  for (double r : radii)
    if (!(r > 0.0 && r < 1.0)) throw DomainError("occupancy radii must lie in (0, 1)");
  AngularOccupancy occ;
  occ.time = w.time();
  occ.level = level;
  occ.radii.assign(radii.begin(), radii.end());
  occ.measure.assign(radii.size(), 0.0);
  const double cell = kHalfPi / angles;
  parallel_for(radii.size(), [&](std::size_t ir) {
    int count = 0;
    for (int j = 0; j < angles; ++j) {
      if (sample_at(w, Point::polar(radii[ir], (j + 0.5) * cell)) >= level) ++count;
    }
    occ.measure[ir] = count * cell;
  });
  if (set) {
    if (!(set->N > 1.0 && set->growth_target > 0.0 && set->a0 > 0.0))
      throw ConfigError("occupancy set needs N > 1, M > 0, a0 > 0");
    const double r_lo = std::pow(set->N, -0.25);
    const double r_hi = 0.5 * set->a0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
      const double r = radii[i];
      const bool in_band = r >= r_lo && r <= r_hi;
      const double floor =
          std::pow(std::log(1.0 / r), -set->alpha / 3.0) / set->growth_target;
      occ.in_set.push_back(in_band && occ.measure[i] >= floor);
    }
  }
  return occ;
}

WedgeReport case_II_wedge_diagnostic(const FlowState& image, std::span<const double> radii) {
  image.validate();
  WedgeReport rep;
  rep.min_ratio = std::numeric_limits<double>::infinity();
  for (const Point& p : image.position) rep.min_ratio = std::min(rep.min_ratio, p.x2 / p.x1);
  rep.radii.assign(radii.begin(), radii.end());
  for (double r : radii) {
    double gap = std::numeric_limits<double>::quiet_NaN();
    for (const Point& c : circle_crossings(image.position, r)) {
      const double to_vertical = std::numbers::pi / 2 - std::atan2(c.x2, c.x1);
      gap = std::isnan(gap) ? to_vertical : std::max(gap, to_vertical);
    }
    rep.gap.push_back(gap);
  }
  return rep;
}

LosingExponent losing_exponent_curve(double C, double sup_norm, std::span<const double> times) {
  if (!(C > 0.0)) throw ConfigError("losing constant C must be positive");
  if (!(sup_norm >= 0.0)) throw ConfigError("sup norm must be nonnegative");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0) || (i > 0 && times[i] < times[i - 1]))
      throw ConfigError("losing curve times must be nonnegative and nondecreasing");
  }
  LosingExponent out;
  out.C = C;
  out.sup_norm = sup_norm;
  out.times.assign(times.begin(), times.end());
  const double rate = C * sup_norm;
  for (double t : times) out.closed_form.push_back(2.0 / (1.0 + 2.0 * rate * t));

  namespace odeint = boost::numeric::odeint;
  using State = std::vector<double>;
  State q{2.0};
  double now = 0.0;
  const auto rhs = [rate](const State& y, State& dy, double) { dy[0] = -rate * y[0] * y[0]; };
  for (double t : times) {
    if (t > now) {
      odeint::integrate_adaptive(
          odeint::make_controlled(1e-14, 1e-14, odeint::runge_kutta_dopri5<State>()), rhs, q, now,
          t, 1e-3 * (t - now));
      now = t;
    }
    out.numeric.push_back(q[0]);
  }
  for (std::size_t i = 0; i < times.size(); ++i)
    out.max_discrepancy = std::max(out.max_discrepancy, std::abs(out.numeric[i] - out.closed_form[i]));
  return out;
}

GrowthSeries growth_ratio(std::span<const double> times, std::span<const double> h1) {
  if (times.size() != h1.size() || times.empty())
    throw ConfigError("growth ratio needs matching, nonempty time and norm series");
  if (!(h1.front() > 0.0)) throw InvalidInputError("initial gradient norm must be positive");
  GrowthSeries g;
  g.times.assign(times.begin(), times.end());
  for (std::size_t i = 0; i < h1.size(); ++i) {
    g.ratio.push_back(h1[i] / h1.front());
    if (g.ratio.back() > g.max_ratio) {
      g.max_ratio = g.ratio.back();
      g.time_of_max = times[i];
    }
  }
  return g;
}

GrowthSeries growth_ratio(const Trajectory& trajectory) {
  std::vector<double> times, h1;
  for (const auto& f : trajectory) {
    times.push_back(f.time());
    h1.push_back(gradient_l2(f));
  }
  return growth_ratio(times, h1);
}

std::vector<MembershipIndicator> sobolev_membership(const ContinuumDataParams& params,
                                                    std::span<const SobolevPair> pairs,
                                                    std::span<const int> grid_sizes) {
  if (grid_sizes.size() < 4) throw ConfigError("membership test needs at least four grid sizes");
  for (std::size_t i = 1; i < grid_sizes.size(); ++i)
    if (grid_sizes[i] <= grid_sizes[i - 1]) throw ConfigError("grid sizes must increase");
  std::vector<MembershipIndicator> out(pairs.size());
  for (std::size_t j = 0; j < pairs.size(); ++j) {
    out[j].sobolev = pairs[j];
    out[j].alpha = params.alpha;
    out[j].grid_sizes.assign(grid_sizes.begin(), grid_sizes.end());
  }
  for (int m : grid_sizes) {
    const Grid grid(m);
    const VorticityField w = make_continuum_data(params, grid);
    const double scale = std::log(1.0 / params.effective_r_min(grid));
    for (std::size_t j = 0; j < pairs.size(); ++j) {
      out[j].log_scales.push_back(scale);
      out[j].values.push_back(std::pow(sobolev_norm(w, pairs[j]), pairs[j].p));
    }
  }
  for (auto& ind : out) {
    std::vector<double> x, y;
    for (std::size_t i = 0; i + 1 < ind.values.size(); ++i) {
      const double dl = ind.log_scales[i + 1] - ind.log_scales[i];
      const double df = ind.values[i + 1] - ind.values[i];
      if (!(df > 0.0)) throw NumericalError("W^{s,p} quadrature did not grow under refinement");
      x.push_back(std::log(0.5 * (ind.log_scales[i] + ind.log_scales[i + 1])));
      y.push_back(std::log(df / dl));
    }
    const LinearFit fit = fit_line(x, y);
    ind.decay_exponent = -fit.slope;
    ind.fit_r_squared = fit.r_squared;
  }
  return out;
}

}  // namespace critflow
