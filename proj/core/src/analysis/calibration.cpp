#include "critflow/analysis/calibration.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "critflow/errors.hpp"

namespace critflow {
namespace {

namespace pt = boost::property_tree;

struct Entry {
  const char* key;
  double CalibrationConstants::*field;
};

constexpr Entry kEntries[] = {
    {"flow.expansion", &CalibrationConstants::flow_expansion},
    {"flow.contraction", &CalibrationConstants::flow_contraction},
    {"key_lemma.bound", &CalibrationConstants::key_lemma_bound},
    {"losing.constant", &CalibrationConstants::losing_constant},
    {"radial.lower", &CalibrationConstants::radial_lower},
    {"radial.upper", &CalibrationConstants::radial_upper},
    {"bahouri_chemin.slope", &CalibrationConstants::bc_slope},
};

}  // namespace

CalibrationConstants CalibrationConstants::read(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw FormatError(std::string("calibration file: ") + e.what());
  }
  CalibrationConstants c;
  for (const Entry& e : kEntries) {
    const auto text = tree.get_optional<std::string>(e.key);
    if (!text) throw FormatError(std::string("calibration file lacks ") + e.key);
    std::istringstream ss(*text);
    double v = 0.0;
    if (!(ss >> v) || !std::isfinite(v))
      throw FormatError(std::string("calibration value is not a number: ") + e.key);
    c.*e.field = v;
  }
  return c;
}

CalibrationConstants CalibrationConstants::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open calibration file " + path.string());
  return read(in);
}

void CalibrationConstants::write(std::ostream& out) const {
  pt::ptree tree;
  for (const Entry& e : kEntries) {
    std::ostringstream ss;
    ss << std::setprecision(17) << this->*e.field;
    tree.put(e.key, ss.str());
  }
  pt::write_ini(out, tree);
}

void CalibrationConstants::save(const std::filesystem::path& path) const {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write calibration file " + path.string());
  write(out);
}

}  // namespace critflow
