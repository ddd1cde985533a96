#include "critflow/flow/velocity_provider.hpp"

#include <algorithm>
#include <string>

#include "critflow/errors.hpp"
#include "critflow/fields/sampling.hpp"
#include "critflow/spectral/operators.hpp"

namespace critflow {
namespace {

constexpr double kTimeSlack = 1e-12;

}  // namespace

Point VelocityProvider::velocity(double t, Point x) const {
  Point out;
  velocities(t, std::span<const Point>(&x, 1), std::span<Point>(&out, 1));
  return out;
}

void VelocityProvider::check_window(double a, double b) const {
  const double lo = std::min(a, b), hi = std::max(a, b);
  const double slack = kTimeSlack * std::max(1.0, std::abs(end_time()));
  if (lo < start_time() - slack || hi > end_time() + slack) {
    throw DomainError("requested times [" + std::to_string(lo) + ", " + std::to_string(hi) +
                      "] outside velocity window [" + std::to_string(start_time()) + ", " +
                      std::to_string(end_time()) + "]");
  }
}

AnalyticVelocity::AnalyticVelocity(Fn fn, double start, double end)
    : fn_(std::move(fn)), start_(start), end_(end) {}

void AnalyticVelocity::velocities(double t, std::span<const Point> points,
                                  std::span<Point> out) const {
  check_window(t, t);
  for (std::size_t i = 0; i < points.size(); ++i) out[i] = fn_(t, points[i]);
}

SnapshotVelocity::SnapshotVelocity(const Trajectory& frames) : frames_(&frames) {
  if (frames.empty()) throw ConfigError("velocity provider needs at least one frame");
  for (const auto& f : frames) times_.push_back(f.time());
  fields_.resize(frames.size());
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (!(times_[i] > times_[i - 1])) throw ConfigError("frame times must increase");
  }
}

SnapshotVelocity::SnapshotVelocity(std::vector<std::shared_ptr<const VelocityField>> fields)
    : fields_(std::move(fields)) {
  if (fields_.empty()) throw ConfigError("velocity provider needs at least one frame");
  for (const auto& f : fields_) times_.push_back(f->time);
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (!(times_[i] > times_[i - 1])) throw ConfigError("frame times must increase");
  }
}

double SnapshotVelocity::start_time() const { return times_.front(); }
double SnapshotVelocity::end_time() const { return times_.back(); }

std::shared_ptr<const VelocityField> SnapshotVelocity::frame_velocity(std::size_t index) const {
  std::lock_guard lock(mutex_);
  if (fields_[index]) return fields_[index];
  auto u = std::make_shared<const VelocityField>(velocity_from_vorticity((*frames_)[index]));
  fields_[index] = u;
  if (frames_) {
    recent_.push_back(index);
    if (recent_.size() > kCacheSize) {
      fields_[recent_.front()].reset();
      recent_.erase(recent_.begin());
    }
  }
  return u;
}

void SnapshotVelocity::velocities(double t, std::span<const Point> points,
                                  std::span<Point> out) const {
  check_window(t, t);
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  std::size_t hi = std::min<std::size_t>(it - times_.begin(), times_.size() - 1);
  std::size_t lo = hi == 0 ? 0 : hi - 1;
  if (times_.size() == 1) lo = hi = 0;
  const auto ua = frame_velocity(lo);
  const auto ub = frame_velocity(hi);
  const double span = times_[hi] - times_[lo];
  const double s = span > 0.0 ? std::clamp((t - times_[lo]) / span, 0.0, 1.0) : 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Point a = sample_at(*ua, points[i]);
    out[i] = s == 0.0 ? a : a * (1.0 - s) + sample_at(*ub, points[i]) * s;
  }
}

}  // namespace critflow
