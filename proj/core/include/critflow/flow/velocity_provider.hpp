#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "critflow/evolution/evolve.hpp"
#include "critflow/fields/field_types.hpp"
#include "critflow/point.hpp"

namespace critflow {

/// Velocity u(t, x) over a closed time window.
class VelocityProvider {
 public:
  virtual ~VelocityProvider() = default;
  virtual double start_time() const = 0;
  virtual double end_time() const = 0;
  /// out[i] = u(t, points[i]). Throws DomainError when t is outside the window.
  virtual void velocities(double t, std::span<const Point> points, std::span<Point> out) const = 0;
  Point velocity(double t, Point x) const;
  /// Throws DomainError unless [min(a,b), max(a,b)] lies inside the window.
  void check_window(double a, double b) const;
};

/// Closed-form velocity, mainly for synthetic tests.
class AnalyticVelocity final : public VelocityProvider {
 public:
  using Fn = std::function<Point(double, Point)>;
  explicit AnalyticVelocity(Fn fn, double start = -std::numeric_limits<double>::infinity(),
                            double end = std::numeric_limits<double>::infinity());
  double start_time() const override { return start_; }
  double end_time() const override { return end_; }
  void velocities(double t, std::span<const Point> points, std::span<Point> out) const override;

 private:
  Fn fn_;
  double start_;
  double end_;
};

/// Velocity of a stored vorticity trajectory: spectral Biot-Savart per frame,
/// bicubic in space, linear in time between frames. Velocity fields are
/// computed on demand and the most recent few are cached.
class SnapshotVelocity final : public VelocityProvider {
 public:
  /// The trajectory must outlive the provider. Frame times must increase.
  explicit SnapshotVelocity(const Trajectory& frames);
  /// Precomputed velocity fields with increasing times.
  explicit SnapshotVelocity(std::vector<std::shared_ptr<const VelocityField>> fields);

  double start_time() const override;
  double end_time() const override;
  void velocities(double t, std::span<const Point> points, std::span<Point> out) const override;

  std::shared_ptr<const VelocityField> frame_velocity(std::size_t index) const;

 private:
  static constexpr std::size_t kCacheSize = 3;

  const Trajectory* frames_ = nullptr;
  std::vector<double> times_;
  mutable std::vector<std::shared_ptr<const VelocityField>> fields_;
  mutable std::vector<std::size_t> recent_;
  mutable std::mutex mutex_;
};

}  // namespace critflow
