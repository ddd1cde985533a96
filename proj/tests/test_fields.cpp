#include <cstdio>
#include <filesystem>
#include <sstream>

#include "critflow/errors.hpp"
#include "critflow/fields/sampling.hpp"
#include "critflow/fields/snapshot_io.hpp"
#include "critflow/initial/initial_data.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace critflow;
using namespace critflow::testing;

namespace {

double sin_sin(Point p) { return std::sin(kPi * p.x1) * std::sin(kPi * p.x2); }

}  // namespace

TEST_CASE("odd-odd invariant is enforced on construction checks") {
  const Grid g(64);
  std::vector<double> ones(g.point_count(), 1.0);
  VorticityField bad(g, ones, Symmetry::kOddOdd);
  CHECK_THROWS_AS(bad.check_symmetry(), InvalidInputError);
  CHECK_NOTHROW(single_mode(g).check_symmetry());
  CHECK(single_mode(g).antisymmetry_residual() < 1e-15);
  CHECK_THROWS_AS(VorticityField(g, std::vector<double>(10)), ConfigError);
}

TEST_CASE("sample_at is exact at nodes and wraps around the torus") {
  const Grid g(64);
  const auto r = random_samples(g, 4u);
  for (int i : {0, 5, 31, 63}) {
    for (int j : {0, 17, 32, 62}) {
      const Point p{g.coordinate(i), g.coordinate(j)};
      CHECK(sample_at(g, r, p) == r[g.index(i, j)]);
      CHECK(std::abs(sample_at(g, r, p + Point{2.0, -4.0}) - r[g.index(i, j)]) < 1e-12);
    }
  }
}

TEST_CASE("sample_at on an analytic field") {
  const Grid g(256);
  const VorticityField w = sample_function(g, sin_sin, Symmetry::kOddOdd);
  CHECK(std::abs(sample_at(w, {0.25, 0.25}) - 0.5) < 1e-6);
  CHECK(std::abs(sample_at(w, {0.2501, 0.2497}) - sin_sin({0.2501, 0.2497})) < 1e-6);
}

TEST_CASE("bicubic interpolation converges at fourth order") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<Point> pts(400);
  for (auto& p : pts) p = {dist(rng), dist(rng)};
  std::vector<double> errors;
  for (int m : {64, 128, 256}) {
    const Grid g(m);
    const VorticityField w = sample_function(g, sin_sin);
    double err = 0.0;
    for (const Point& p : pts) err = std::max(err, std::abs(sample_at(w, p) - sin_sin(p)));
    errors.push_back(err);
  }
  const double order1 = std::log2(errors[0] / errors[1]);
  const double order2 = std::log2(errors[1] / errors[2]);
  CHECK(order1 >= 2.9);
  CHECK(order2 >= 2.9);
}

TEST_CASE("bump data sampled inside the plateau") {
  const BumpDataParams params{16};
  const Grid g(params.required_grid_size());
  const VorticityField w = make_bump_data(params, g);
  const double r = std::pow(16.0, -0.75);
  CHECK(std::abs(sample_at(w, Point::polar(r, 1.1 * kPi / 4)) - 1.0) < 1e-3);
}

TEST_CASE("polar resampling") {
  const Grid g(128);
  const auto radii = log_spaced(0.01, 1.0, 20);
  const auto angles = quadrant_angles(33);
  CHECK(radii.front() == doctest::Approx(0.01));
  CHECK(radii.back() == doctest::Approx(1.0));
  CHECK(angles.back() == doctest::Approx(kPi / 2));

  const VorticityField c(g, std::vector<double>(g.point_count(), 0.7), Symmetry::kNone);
  const PolarPatch pc = resample_polar(c, radii, angles);
  for (double v : pc.values) CHECK(std::abs(v - 0.7) < 1e-14);

  const VorticityField radial =
      sample_function(Grid(256), [](Point p) { return std::exp(-8.0 * (p.x1 * p.x1 + p.x2 * p.x2)); });
  const PolarPatch pr = resample_polar(radial, log_spaced(0.05, 0.6, 10), angles);
  double spread = 0.0;
  for (std::size_t i = 0; i < pr.radii.size(); ++i) {
    for (std::size_t a = 0; a < pr.angles.size(); ++a) {
      spread = std::max(spread, std::abs(pr(i, a) - pr(i, 0)));
    }
  }
  CHECK(spread < 1e-6);

  const std::vector<double> too_big{0.5, 1.5};
  CHECK_THROWS_AS(resample_polar(c, too_big, angles), DomainError);
  const std::vector<double> descending{0.5, 0.4};
  CHECK_THROWS_AS(resample_polar(c, descending, angles), ConfigError);
  const std::vector<double> wide_angles{0.0, 2.0};
  CHECK_THROWS_AS(resample_polar(c, radii, wide_angles), ConfigError);
}

TEST_CASE("polar row of bump data reproduces the angular profile") {
  // The angular transition at r = N^{-3/4} spans about four cells of the
  // minimal grid; one refinement brings the bicubic error below 1e-3.
  const BumpDataParams params{16};
  const Grid g(2 * params.required_grid_size());
  const VorticityField w = make_bump_data(params, g);
  const std::vector<double> radius{std::pow(16.0, -0.75)};
  const auto angles = quadrant_angles(181);
  const PolarPatch patch = resample_polar(w, radius, angles);
  // Independent profile: quintic smoothstep on [pi/6, pi/4] and [pi/3, 5pi/12].
  auto step = [](double t) {
    t = std::clamp(t, 0.0, 1.0);
    return t * t * t * (10 - 15 * t + 6 * t * t);
  };
  double err = 0.0;
  for (std::size_t a = 0; a < angles.size(); ++a) {
    const double th = angles[a];
    const double expect = step((th - kPi / 6) / (kPi / 12)) * (1 - step((th - kPi / 3) / (kPi / 12)));
    err = std::max(err, std::abs(patch(0, a) - expect));
  }
  CHECK(err < 1e-3);

  // Re-sampling the patch nodes through Cartesian sampling gives the same values.
  double back = 0.0;
  for (std::size_t a = 0; a < angles.size(); ++a) {
    back = std::max(back, std::abs(sample_at(w, Point::polar(radius[0], angles[a])) - patch(0, a)));
  }
  CHECK(back < 1e-14);
}

TEST_CASE("VRT1 snapshots round trip") {
  const Grid g(64);
  VorticityField w = single_mode(g);
  w.set_time(0.375);
  std::stringstream buf;
  write_snapshot(buf, w);
  const std::string bytes = buf.str();
  CHECK(bytes.size() == 16 + 8 * g.point_count());
  CHECK(bytes.substr(0, 4) == "VRT1");
  CHECK(static_cast<unsigned char>(bytes[4]) == 64);

  std::stringstream in(bytes);
  const VorticityField r = read_snapshot(in);
  CHECK(r.grid() == g);
  CHECK(r.time() == 0.375);
  CHECK(r.symmetry() == Symmetry::kOddOdd);
  CHECK(max_abs_diff(r.samples(), w.samples()) == 0.0);

  const VorticityField noisy(g, random_samples(g, 1u));
  std::stringstream buf2;
  write_snapshot(buf2, noisy);
  CHECK(read_snapshot(buf2).symmetry() == Symmetry::kNone);

  const auto path = std::filesystem::temp_directory_path() / "critflow_test_snapshot.vrt";
  write_snapshot(path, w);
  CHECK(max_abs_diff(read_snapshot(path).samples(), w.samples()) == 0.0);
  std::filesystem::remove(path);
}

TEST_CASE("VRT1 reader rejects malformed input") {
  const Grid g(64);
  std::stringstream buf;
  write_snapshot(buf, single_mode(g));
  const std::string good = buf.str();

  std::string bad_magic = good;
  bad_magic[3] = '2';
  std::stringstream s1(bad_magic);
  CHECK_THROWS_AS(read_snapshot(s1), FormatError);

  std::stringstream s2(good.substr(0, good.size() - 8));
  CHECK_THROWS_AS(read_snapshot(s2), FormatError);

  std::stringstream s3(good + "x");
  CHECK_THROWS_AS(read_snapshot(s3), FormatError);

  std::string bad_size = good;
  bad_size[4] = 63;
  std::stringstream s4(bad_size);
  CHECK_THROWS_AS(read_snapshot(s4), FormatError);

  CHECK_THROWS_AS(read_snapshot(std::filesystem::path("/nonexistent/file.vrt")), FormatError);
}
