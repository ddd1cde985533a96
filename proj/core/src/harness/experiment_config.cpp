#include "critflow/harness/experiment_config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "critflow/errors.hpp"

namespace critflow {
namespace {

constexpr std::pair<ExperimentKind, const char*> kKindNames[] = {
    {ExperimentKind::kThm11Sweep, "thm11-sweep"},
    {ExperimentKind::kThm12Run, "thm12-run"},
    {ExperimentKind::kViscousLimit, "viscous-limit"},
    {ExperimentKind::kBcCalibration, "bc-calibration"},
    {ExperimentKind::kLosingCheck, "losing-check"},
};

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return {};
  return s.substr(a, s.find_last_not_of(" \t") - a + 1);
}

template <class T>
T parse_value(const std::string& key, const std::string& text) {
  std::istringstream ss(trim(text));
  T v{};
  if (!(ss >> v) || !(ss >> std::ws).eof())
    throw ConfigError("cannot parse '" + text + "' for " + key);
  return v;
}

template <class T>
std::vector<T> parse_list(const std::string& key, const std::string& text) {
  std::vector<T> out;
  std::istringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!trim(item).empty()) out.push_back(parse_value<T>(key, item));
  }
  if (out.empty()) throw ConfigError("empty list for " + key);
  return out;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  for (const auto& [k, name] : kKindNames)
    if (k == kind) return name;
  return "unknown";
}

ExperimentKind parse_experiment_kind(const std::string& name) {
  for (const auto& [k, n] : kKindNames)
    if (name == n) return k;
  throw ConfigError("unknown experiment kind '" + name + "'");
}

int policy_grid_size(int N) {
  if (N < 2) throw ConfigError("N must be at least 2");
  int m = 64;
  while (2.0 / m > 1.0 / (8.0 * N)) m *= 2;
  return m;
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  const std::string k = trim(key);
  if (k == "experiment.kind") {
    kind = parse_experiment_kind(trim(value));
  } else if (k == "experiment.output") {
    output_dir = trim(value);
  } else if (k == "experiment.seed") {
    seed = parse_value<unsigned>(k, value);
  } else if (k == "data.N") {
    n_list = parse_list<int>(k, value);
  } else if (k == "data.tau_star") {
    tau_star = parse_value<double>(k, value);
  } else if (k == "data.growth_target") {
    growth_target = parse_value<double>(k, value);
  } else if (k == "data.alpha") {
    alpha = parse_value<double>(k, value);
  } else if (k == "data.epsilon") {
    epsilon = parse_value<double>(k, value);
  } else if (k.rfind("grid.size.", 0) == 0) {
    grid_overrides[parse_value<int>(k, k.substr(10))] = parse_value<int>(k, value);
  } else if (k == "grid.refinement") {
    refinement_grids = parse_list<int>(k, value);
  } else if (k == "time.cfl") {
    cfl = parse_value<double>(k, value);
  } else if (k == "time.min_steps") {
    min_steps = parse_value<int>(k, value);
  } else if (k == "time.frames") {
    frames = parse_value<int>(k, value);
  } else if (k == "norms.delta") {
    deltas = parse_list<double>(k, value);
  } else if (k == "norms.sobolev") {
    sobolev.clear();
    for (const std::string& item : parse_list<std::string>(k, value)) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) throw ConfigError("sobolev pairs are written s:p");
      sobolev.push_back({parse_value<double>(k, item.substr(0, colon)),
                         parse_value<double>(k, item.substr(colon + 1))});
    }
  } else if (k == "viscous.nu") {
    viscosities = parse_list<double>(k, value);
  } else if (k == "losing.constant") {
    losing_constant = parse_value<double>(k, value);
  } else if (k == "calibration.file") {
    calibration_file = trim(value);
  } else {
    throw ConfigError("unknown configuration key '" + k + "'");
  }
}

ExperimentConfig ExperimentConfig::read(std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("configuration: ") + e.what());
  }
  ExperimentConfig cfg;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError("configuration key outside a section: " + section);
    for (const auto& [key, value] : body) cfg.set(section + "." + key, value.data());
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration " + path.string());
  return read(in);
}

void ExperimentConfig::validate() const {
  if (n_list.empty()) throw ConfigError("N list is empty");
  for (int n : n_list) {
    if (n < 2) throw ConfigError("every N must be at least 2");
    const int m = grid_size_for(n);
    // Inner plateau 1/N must span at least four cells of width 2/M.
    if (0.5 / n < 4.0 * 2.0 / m)
      throw ConfigError("grid " + std::to_string(m) + " cannot resolve N=" + std::to_string(n));
  }
  for (const auto& [n, m] : grid_overrides) {
    if (m < 64 || (m & (m - 1)) != 0)
      throw ConfigError("grid override for N=" + std::to_string(n) + " is not a power of two >= 64");
  }
  if (!(tau_star >= 0.0)) throw ConfigError("tau_star must be nonnegative");
  if (!(growth_target > 0.0)) throw ConfigError("growth target M must be positive");
  if (!(cfl > 0.0)) throw ConfigError("cfl must be positive");
  if (min_steps < 1) throw ConfigError("min_steps must be positive");
  if (frames < 1) throw ConfigError("frames must be positive");
  if (kind == ExperimentKind::kThm12Run) {
    if (!(alpha > 0.5 && alpha < 0.6)) throw ConfigError("alpha must lie in (1/2, 3/5)");
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw ConfigError("epsilon must lie in (0, 1]");
    if (refinement_grids.empty()) throw ConfigError("refinement list is empty");
    for (int m : refinement_grids)
      if (m < 64 || (m & (m - 1)) != 0) throw ConfigError("refinement grids must be powers of two");
  }
  if (kind == ExperimentKind::kViscousLimit) {
    double lo = 0.0, hi = 0.0;
    for (double nu : viscosities) {
      if (!(nu >= 0.0)) throw ConfigError("viscosities must be nonnegative");
      if (nu > 0.0) lo = lo == 0.0 ? nu : std::min(lo, nu);
      hi = std::max(hi, nu);
    }
    if (lo == 0.0 || hi < 100.0 * lo)
      throw ConfigError("positive viscosities must span at least two decades");
  }
  for (double d : deltas)
    if (!(d > 0.0)) throw ConfigError("annulus radii must be positive");
  for (const SobolevPair& sp : sobolev)
    if (!(sp.s > 0.0 && sp.s <= 2.0 && sp.p > 0.0))
      throw ConfigError("sobolev pairs need s in (0, 2] and p > 0");
  if (!(losing_constant >= 0.0)) throw ConfigError("losing constant must be nonnegative");
}

int ExperimentConfig::grid_size_for(int N) const {
  const auto it = grid_overrides.find(N);
  return it != grid_overrides.end() ? it->second : policy_grid_size(N);
}

EvolveConfig ExperimentConfig::evolve_config(const Grid& grid, double max_speed, double final_time,
                                             double viscosity) const {
  EvolveConfig e;
  e.final_time = final_time;
  e.viscosity = viscosity;
  double dt = final_time > 0.0 ? final_time / min_steps : 1.0;
  if (max_speed > 0.0) dt = std::min(dt, cfl * grid.spacing() / max_speed);
  e.dt = dt;
  const long steps = final_time > 0.0 ? static_cast<long>(std::ceil(final_time / dt - 1e-9)) : 1;
  e.record_every = static_cast<int>(std::max(1L, steps / frames));
  return e;
}

double ExperimentConfig::bump_time_scale(int N) const {
  const double ln = std::log(static_cast<double>(N));
  return tau_star * std::log(ln) / ln;
}

double ExperimentConfig::continuum_time_scale(int N) const {
  const double ln = std::log(static_cast<double>(N));
  return tau_star * std::log(ln) / std::pow(ln, 1.0 - 5.0 * alpha / 3.0);
}

}  // namespace critflow
