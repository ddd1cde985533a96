#include "critflow/harness/csv.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

#include "critflow/errors.hpp"

namespace critflow {
namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

CsvCell parse_cell(const std::string& text) {
  long long i = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), i);
  if (ec == std::errc() && p == text.data() + text.size()) return i;
  double d = 0.0;
  auto [q, ec2] = std::from_chars(text.data(), text.data() + text.size(), d);
  if (ec2 == std::errc() && q == text.data() + text.size()) return d;
  return text;
}

}  // namespace

std::string format_cell(const CsvCell& cell) {
  if (const auto* i = std::get_if<long long>(&cell)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&cell)) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", *d);
    return buf;
  }
  return std::get<std::string>(cell);
}

CsvTable::CsvTable(std::string name, std::vector<std::string> header)
    : name_(std::move(name)), header_(std::move(header)) {}

void CsvTable::add_row(std::vector<CsvCell> row) {
  if (row.size() != header_.size())
    throw ConfigError("row width " + std::to_string(row.size()) + " does not match header of " +
                      name_);
  rows_.push_back(std::move(row));
}

void CsvTable::append(const CsvTable& other) {
  if (other.header_ != header_) throw ConfigError("cannot append tables with different headers");
  rows_.insert(rows_.end(), other.rows_.begin(), other.rows_.end());
}

std::string CsvTable::str() const {
  std::ostringstream out;
  out << "# critflow " << name_ << " v" << kCsvVersion << '\n';
  for (std::size_t i = 0; i < header_.size(); ++i) out << (i ? "," : "") << header_[i];
  out << '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_cell(row[i]);
    out << '\n';
  }
  return out.str();
}

void CsvTable::write_atomic(const std::filesystem::path& path) const {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw FormatError("cannot write " + tmp.string());
    out << str();
    if (!out) throw FormatError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

CsvTable CsvTable::read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("# critflow ", 0) != 0)
    throw FormatError(path.string() + " lacks the table banner");
  std::istringstream banner(line.substr(11));
  std::string name, version;
  banner >> name >> version;
  if (version != "v" + std::to_string(kCsvVersion))
    throw FormatError(path.string() + " has unsupported version " + version);
  if (!std::getline(in, line)) throw FormatError(path.string() + " lacks a header");
  CsvTable t(name, split(line));
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != t.header_.size()) throw FormatError("ragged row in " + path.string());
    std::vector<CsvCell> row;
    for (const auto& c : cells) row.push_back(parse_cell(c));
    t.rows_.push_back(std::move(row));
  }
  return t;
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header_.size(); ++i)
    if (header_[i] == name) return i;
  throw FormatError("table " + name_ + " has no column " + name);
}

double CsvTable::number(std::size_t row, const std::string& column_name) const {
  const CsvCell& c = rows_.at(row).at(column(column_name));
  if (const auto* i = std::get_if<long long>(&c)) return static_cast<double>(*i);
  if (const auto* d = std::get_if<double>(&c)) return *d;
  throw FormatError("cell " + column_name + " is not numeric");
}

}  // namespace critflow
