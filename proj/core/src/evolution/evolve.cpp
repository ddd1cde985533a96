#include "critflow/evolution/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "critflow/errors.hpp"
#include "critflow/fields/snapshot_io.hpp"
#include "critflow/spectral/operators.hpp"
#include "critflow/spectral/transform.hpp"

namespace critflow {
namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

void EvolveConfig::validate() const {
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
  if (!(final_time >= 0.0)) throw ConfigError("final time must be nonnegative");
  if (!(viscosity >= 0.0)) throw ConfigError("viscosity must be nonnegative");
  if (!(cfl_max > 0.0)) throw ConfigError("cfl_max must be positive");
  if (record_every < 1) throw ConfigError("record_every must be >= 1");
}

struct Evolver::Impl {
  Impl(const VorticityField& initial, EvolveConfig cfg)
      : config(cfg),
        grid(initial.grid()),
        symmetry(initial.symmetry()),
        time(initial.time()),
        state(forward_transform(initial.grid(), initial.samples())),
        u1_hat(grid),
        u2_hat(grid),
        w1_hat(grid),
        w2_hat(grid),
        scratch(grid.spectral_count()),
        u1(grid.point_count()),
        u2(grid.point_count()),
        w1(grid.point_count()),
        w2(grid.point_count()) {
    config.validate();
    if (symmetry == Symmetry::kOddOdd) initial.check_symmetry();
    if (std::abs(state.at(0, 0)) > kMeanTolerance) {
      throw InvalidInputError("evolution needs a mean-zero vorticity");
    }
    state.at(0, 0) = 0.0;
    dealias_in_place(state);
    if (symmetry == Symmetry::kOddOdd && config.project_symmetry) project_odd_odd_in_place(state);
  }

  // Returns -P(u . grad w) for the coefficient field w; records max|u|.
  SpectralField nonlinear(const SpectralField& w, double* max_speed) {
    const int m = grid.size();
    const int cols = w.columns();
    const int nyq = m / 2;
    for (int row = 0; row < m; ++row) {
      const int k1 = w.wavenumber_of_row(row);
      for (int col = 0; col < cols; ++col) {
        const int k2 = col;
        const Complex c = w.at(row, col);
        const int ksq = k1 * k1 + k2 * k2;
        const double d1 = (k1 == -nyq) ? 0.0 : kPi * k1;
        const double d2 = (k2 == nyq) ? 0.0 : kPi * k2;
        const Complex psi = ksq == 0 ? Complex(0.0) : -c / (kPi * kPi * ksq);
        u1_hat.at(row, col) = Complex(0.0, d2) * psi;
        u2_hat.at(row, col) = -Complex(0.0, d1) * psi;
        w1_hat.at(row, col) = Complex(0.0, d1) * c;
        w2_hat.at(row, col) = Complex(0.0, d2) * c;
      }
    }
    inverse_transform_into(u1_hat, scratch, u1);
    inverse_transform_into(u2_hat, scratch, u2);
    inverse_transform_into(w1_hat, scratch, w1);
    inverse_transform_into(w2_hat, scratch, w2);
    double vmax2 = 0.0;
    for (std::size_t i = 0; i < u1.size(); ++i) {
      vmax2 = std::max(vmax2, u1[i] * u1[i] + u2[i] * u2[i]);
      w1[i] = u1[i] * w1[i] + u2[i] * w2[i];
    }
    if (max_speed) *max_speed = std::sqrt(vmax2);
    SpectralField n = forward_transform(grid, w1);
    dealias_in_place(n);
    n.at(0, 0) = 0.0;
    n *= -1.0;
    return n;
  }

  // Integrating factors exp(-nu pi^2 k1^2 tau), one per storage row.
  std::vector<double> damping(double tau) const {
    std::vector<double> e(grid.size(), 1.0);
    if (config.viscosity == 0.0) return e;
    for (int row = 0; row < grid.size(); ++row) {
      const double k1 = row < grid.size() / 2 ? row : row - grid.size();
      e[row] = std::exp(-config.viscosity * kPi * kPi * k1 * k1 * tau);
    }
    return e;
  }

  static void scale_rows(SpectralField& f, const std::vector<double>& e) {
    const int cols = f.columns();
    for (int row = 0; row < f.grid().size(); ++row) {
      if (e[row] == 1.0) continue;
      for (int col = 0; col < cols; ++col) f.at(row, col) *= e[row];
    }
  }

  // a + s * b, coefficientwise.
  static SpectralField axpy(const SpectralField& a, double s, const SpectralField& b) {
    SpectralField out = a;
    auto o = out.data();
    auto bd = b.data();
    for (std::size_t i = 0; i < o.size(); ++i) o[i] += s * bd[i];
    return out;
  }

  void rk4(double dt, const SpectralField& k1) {
    const std::vector<double> eh = damping(dt / 2);
    const std::vector<double> ef = damping(dt);

    SpectralField w_half = state;
    scale_rows(w_half, eh);
    SpectralField k1_half = k1;
    scale_rows(k1_half, eh);

    const SpectralField k2 = nonlinear(axpy(w_half, dt / 2, k1_half), nullptr);
    const SpectralField k3 = nonlinear(axpy(w_half, dt / 2, k2), nullptr);
    SpectralField k3_half = k3;
    scale_rows(k3_half, eh);
    SpectralField w_full = state;
    scale_rows(w_full, ef);
    const SpectralField k4 = nonlinear(axpy(w_full, dt, k3_half), nullptr);

    SpectralField k1_full = k1;
    scale_rows(k1_full, ef);
    SpectralField mid = k2;
    mid += k3;
    scale_rows(mid, eh);

    auto s = w_full.data();
    auto a = k1_full.data();
    auto b = mid.data();
    auto c = k4.data();
    for (std::size_t i = 0; i < s.size(); ++i) s[i] += dt / 6.0 * (a[i] + 2.0 * b[i] + c[i]);
    state = std::move(w_full);
  }

  void advance_checked(double dt, StepReport& report, int depth) {
    double speed = 0.0;
    const SpectralField k1 = nonlinear(state, &speed);
    if (depth == 0) report.max_speed = speed;
    if (dt * speed / grid.spacing() > config.cfl_max) {
      if (depth > 30) throw NumericalError("CFL halving did not terminate; velocity is unbounded");
      ++total_halvings;
      advance_checked(dt / 2, report, depth + 1);
      advance_checked(dt / 2, report, depth + 1);
      return;
    }
    rk4(dt, k1);
    time += dt;
    report.substeps = std::max(report.substeps, 1 << depth);
    report.dt_used = dt;
  }

  void check_finite(double before_max) {
    for (const Complex& c : state.data()) {
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
        std::ostringstream msg;
        msg << "non-finite vorticity at t=" << time << " (grid M=" << grid.size()
            << ", |w|_inf before the step " << before_max << ")";
        if (!config.dump_path.empty() && last_good) {
          write_snapshot(config.dump_path, *last_good);
          msg << "; last finite state written to " << config.dump_path.string();
        }
        throw NumericalError(msg.str());
      }
    }
  }

  VorticityField physical() const {
    return VorticityField(grid, inverse_transform(state), symmetry, time);
  }

  EvolveConfig config;
  Grid grid;
  Symmetry symmetry;
  double time;
  SpectralField state;
  SpectralField u1_hat, u2_hat, w1_hat, w2_hat;
  std::vector<Complex> scratch;
  std::vector<double> u1, u2, w1, w2;
  int total_halvings = 0;
  std::unique_ptr<VorticityField> last_good;
};

Evolver::Evolver(const VorticityField& initial, EvolveConfig config)
    : impl_(std::make_unique<Impl>(initial, std::move(config))) {}
Evolver::~Evolver() = default;
Evolver::Evolver(Evolver&&) noexcept = default;
Evolver& Evolver::operator=(Evolver&&) noexcept = default;

double Evolver::time() const { return impl_->time; }
const Grid& Evolver::grid() const { return impl_->grid; }
const EvolveConfig& Evolver::config() const { return impl_->config; }
const SpectralField& Evolver::spectrum() const { return impl_->state; }
int Evolver::halvings() const { return impl_->total_halvings; }
VorticityField Evolver::snapshot() const { return impl_->physical(); }

StepReport Evolver::advance(double dt) {
  if (!(dt > 0.0)) throw ConfigError("step size must be positive");
  Impl& s = *impl_;
  double before = 0.0;
  if (!s.config.dump_path.empty()) {
    s.last_good = std::make_unique<VorticityField>(s.physical());
    before = s.last_good->max_abs();
  }
  StepReport report;
  s.advance_checked(dt, report, 0);
  s.check_finite(before);
  if (s.symmetry == Symmetry::kOddOdd && s.config.project_symmetry) project_odd_odd_in_place(s.state);
  return report;
}

VorticityField step(const VorticityField& omega, const EvolveConfig& cfg, StepReport* report) {
  Evolver ev(omega, cfg);
  const StepReport r = ev.advance(cfg.dt);
  if (report) *report = r;
  return ev.snapshot();
}

int evolve(const VorticityField& initial, const EvolveConfig& cfg, const FrameObserver& observer) {
  Evolver ev(initial, cfg);
  const double t0 = initial.time();
  const double t_end = t0 + cfg.final_time;
  observer(ev.snapshot());
  // Step count fixed up front so frame times do not depend on roundoff drift.
  const long steps = cfg.final_time <= 0.0
                         ? 0
                         : static_cast<long>(std::ceil(cfg.final_time / cfg.dt - 1e-9));
  for (long n = 1; n <= steps; ++n) {
    const double target = n == steps ? t_end : t0 + n * cfg.dt;
    ev.advance(target - ev.time());
    if (n == steps || n % cfg.record_every == 0) observer(ev.snapshot());
  }
  return ev.halvings();
}

Trajectory evolve(const VorticityField& initial, const EvolveConfig& cfg) {
  Trajectory frames;
  evolve(initial, cfg, [&](const VorticityField& f) { frames.push_back(f); });
  return frames;
}

ConservedQuantities conserved_quantities(const VorticityField& omega) {
  const Grid& g = omega.grid();
  const double area = g.spacing() * g.spacing();
  ConservedQuantities q;
  q.time = omega.time();
  double s1 = 0.0, s2 = 0.0, s4 = 0.0;
  for (double w : omega.samples()) {
    const double a = std::abs(w);
    s1 += a;
    s2 += a * a;
    s4 += a * a * a * a;
    q.linf = std::max(q.linf, a);
  }
  q.l1 = s1 * area;
  q.l2 = std::sqrt(s2 * area);
  q.l4 = std::pow(s4 * area, 0.25);
  const SpectralField c = forward_transform(g, omega.samples());
  q.h1 = std::sqrt(4.0 * c.weighted_power([](int k1, int k2) {
    return kPi * kPi * (k1 * k1 + k2 * k2);
  }));
  q.energy = 0.5 * 4.0 * c.weighted_power([](int k1, int k2) {
    const int ksq = k1 * k1 + k2 * k2;
    return ksq == 0 ? 0.0 : 1.0 / (kPi * kPi * ksq);
  });
  q.symmetry_residual = omega.antisymmetry_residual();
  return q;
}

namespace {

/// Per-mode |c_k|^2 with the half-spectrum multiplicity folded in.
std::vector<double> mode_power(const VorticityField& f) {
  const SpectralField c = forward_transform(f.grid(), f.samples());
  const int half = f.grid().size() / 2;
  std::vector<double> p;
  p.reserve(c.data().size());
  c.for_each([&](int, int k2, Complex v) {
    p.push_back(4.0 * ((k2 == 0 || k2 == half) ? 1.0 : 2.0) * std::norm(v));
  });
  return p;
}

/// (b - a) / ln(b / a): exact mean of a mode decaying exponentially from a to b.
double log_mean(double a, double b) {
  if (a <= 0.0 || b <= 0.0) return 0.5 * (a + b);
  const double r = b / a;
  if (std::abs(r - 1.0) < 1e-6) return 0.5 * (a + b);
  return (b - a) / std::log(r);
}

}  // namespace

EnergyBalanceReport energy_balance(const Trajectory& trajectory, double viscosity) {
  if (!(viscosity >= 0.0)) throw ConfigError("viscosity must be nonnegative");
  EnergyBalanceReport r;
  if (trajectory.empty()) return r;
  const Grid& grid = trajectory.front().grid();
  const int m = grid.size();
  const int cols = m / 2 + 1;
  // 2 nu |d_1 c_k|^2 per unit power; the Nyquist row carries no derivative.
  std::vector<double> rate_of(static_cast<std::size_t>(m) * cols);
  for (int row = 0; row < m; ++row) {
    const int k1 = row < m / 2 ? row : row - m;
    const double w = k1 == -m / 2 ? 0.0 : 2.0 * viscosity * kPi * kPi * k1 * k1;
    std::fill_n(rate_of.begin() + static_cast<std::ptrdiff_t>(row) * cols, cols, w);
  }
  auto total = [](const std::vector<double>& p) {
    double s = 0.0;
    for (double v : p) s += v;
    return s;
  };

  std::vector<double> prev = mode_power(trajectory.front());
  r.enstrophy.push_back(total(prev));
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < trajectory.size(); ++i) {
    const double dt = trajectory[i + 1].time() - trajectory[i].time();
    if (!(dt > 0.0)) throw ConfigError("energy balance needs strictly increasing frame times");
    std::vector<double> next = mode_power(trajectory[i + 1]);
    r.enstrophy.push_back(total(next));
    double diss = 0.0;
    if (viscosity > 0.0)
      for (std::size_t k = 0; k < next.size(); ++k) diss += rate_of[k] * log_mean(prev[k], next[k]);
    const double rate = (r.enstrophy[i + 1] - r.enstrophy[i]) / dt;
    const double res = rate + diss;
    r.interval_residual.push_back(res);
    r.interval_dissipation.push_back(diss);
    r.max_residual = std::max(r.max_residual, std::abs(res));
    r.max_dissipation = std::max(r.max_dissipation, std::abs(diss));
    sum += std::abs(res);
    if (r.enstrophy[i + 1] > r.enstrophy[i]) r.monotone_nonincreasing = false;
    prev = std::move(next);
  }
  if (!r.interval_residual.empty()) r.mean_residual = sum / r.interval_residual.size();
  r.relative_residual = r.max_dissipation > 0.0 ? r.max_residual / r.max_dissipation
                                                : std::numeric_limits<double>::infinity();
  return r;
}

}  // namespace critflow
