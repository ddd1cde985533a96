#include "critflow/spectral/transform.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <string>

#include "critflow/errors.hpp"

namespace critflow {
namespace {

// Plans are created once per grid size with FFTW_ESTIMATE (deterministic
// algorithm choice) and FFTW_UNALIGNED so they can run on any std::vector
// storage through the new-array execute interface, which is thread-safe.
struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [m, p] : plans_) {
      fftw_destroy_plan(p.forward);
      fftw_destroy_plan(p.backward);
    }
  }

  const PlanPair& get(int m) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(m);
    if (it != plans_.end()) return it->second;
    const std::size_t real_count = static_cast<std::size_t>(m) * m;
    const std::size_t cplx_count = static_cast<std::size_t>(m) * (m / 2 + 1);
    double* r = fftw_alloc_real(real_count);
    fftw_complex* c = fftw_alloc_complex(cplx_count);
    PlanPair p;
    p.forward = fftw_plan_dft_r2c_2d(m, m, r, c, FFTW_ESTIMATE | FFTW_UNALIGNED);
    p.backward = fftw_plan_dft_c2r_2d(m, m, c, r, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(r);
    fftw_free(c);
    if (!p.forward || !p.backward) throw NumericalError("FFTW plan creation failed");
    return plans_.emplace(m, p).first->second;
  }

 private:
  std::mutex mutex_;
  std::map<int, PlanPair> plans_;
};

PlanCache& plans() {
  static PlanCache cache;
  return cache;
}

}  // namespace

SpectralField forward_transform(const Grid& grid, std::span<const double> samples) {
  if (samples.size() != grid.point_count()) {
    throw ConfigError("forward transform: expected " + std::to_string(grid.point_count()) +
                      " samples, got " + std::to_string(samples.size()));
  }
  const int m = grid.size();
  SpectralField out(grid);
  fftw_execute_dft_r2c(plans().get(m).forward, const_cast<double*>(samples.data()),
                       reinterpret_cast<fftw_complex*>(out.data().data()));
  // Node j sits at x = -1 + jh, so exp(i pi k x_j) = (-1)^k exp(2 pi i k j / M).
  const double scale = 1.0 / (static_cast<double>(m) * m);
  const int cols = out.columns();
  auto data = out.data();
  for (int row = 0; row < m; ++row) {
    for (int col = 0; col < cols; ++col) {
      const double sign = ((row + col) & 1) ? -scale : scale;
      data[static_cast<std::size_t>(row) * cols + col] *= sign;
    }
  }
  return out;
}

void inverse_transform_into(const SpectralField& field, std::span<Complex> scratch,
                            std::span<double> out) {
  const Grid& grid = field.grid();
  const int m = grid.size();
  if (scratch.size() < grid.spectral_count() || out.size() != grid.point_count()) {
    throw ConfigError("inverse transform: buffer size mismatch");
  }
  const int cols = field.columns();
  auto in = field.data();
  for (int row = 0; row < m; ++row) {
    for (int col = 0; col < cols; ++col) {
      const std::size_t i = static_cast<std::size_t>(row) * cols + col;
      scratch[i] = ((row + col) & 1) ? -in[i] : in[i];
    }
  }
  fftw_execute_dft_c2r(plans().get(m).backward, reinterpret_cast<fftw_complex*>(scratch.data()),
                       out.data());
}

std::vector<double> inverse_transform(const SpectralField& field) {
  std::vector<Complex> scratch(field.grid().spectral_count());
  std::vector<double> out(field.grid().point_count());
  inverse_transform_into(field, scratch, out);
  return out;
}

}  // namespace critflow
