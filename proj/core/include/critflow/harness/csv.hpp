#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

namespace critflow {

/// Schema version written on the first line of every table.
inline constexpr int kCsvVersion = 1;

using CsvCell = std::variant<long long, double, std::string>;

/// Shortest text that round-trips: 17 significant digits for doubles.
std::string format_cell(const CsvCell& cell);

/// Comma-separated table with a "# critflow <table> v<version>" line before
/// the header. Text cells must not contain commas, quotes, or newlines.
class CsvTable {
 public:
  CsvTable(std::string name, std::vector<std::string> header);

  const std::string& name() const { return name_; }
  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<CsvCell>>& rows() const { return rows_; }

  /// Throws ConfigError when the width does not match the header.
  void add_row(std::vector<CsvCell> row);
  void append(const CsvTable& other);

  std::string str() const;
  /// Writes to a temporary sibling and renames, so readers never see a
  /// partial file.
  void write_atomic(const std::filesystem::path& path) const;
  /// Parses a file produced by write_atomic. Throws FormatError.
  static CsvTable read(const std::filesystem::path& path);

  /// Column index by name; throws FormatError if absent.
  std::size_t column(const std::string& name) const;
  /// Numeric value of a cell (integers are widened).
  double number(std::size_t row, const std::string& column_name) const;

 private:
  std::string name_;
  std::vector<std::string> header_;
  std::vector<std::vector<CsvCell>> rows_;
};

}  // namespace critflow
