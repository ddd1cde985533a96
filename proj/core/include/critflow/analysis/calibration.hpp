#pragma once

#include <filesystem>
#include <iosfwd>

namespace critflow {

/// Constants fitted once on calibration runs and frozen. Fresh runs are checked
/// against kCalibrationSlack times the frozen value.
struct CalibrationConstants {
  // Flow separation: d0^{exp(c W t)} <= d(t) <= d0^{exp(-C W t)}.
  double flow_expansion = 0.0;
  double flow_contraction = 0.0;
  // Key Lemma remainder |B_i| <= C_B |w|_inf (1 + ln(1 + x_{3-i}/x_i)).
  double key_lemma_bound = 0.0;
  // Losing exponent q' = -C |w_0|_inf q^2.
  double losing_constant = 0.0;
  // Radial exponent ln(r/r0)/ln ln N in [-lower tau, upper tau].
  double radial_lower = 0.0;
  double radial_upper = 0.0;
  // Hyperbolic constant of the Bahouri-Chemin velocity.
  double bc_slope = 0.0;

  /// Sectioned key=value file. Throws FormatError on missing or malformed keys.
  static CalibrationConstants load(const std::filesystem::path& path);
  static CalibrationConstants read(std::istream& in);
  void save(const std::filesystem::path& path) const;
  void write(std::ostream& out) const;
};

inline constexpr double kCalibrationSlack = 2.0;

}  // namespace critflow
