#include "critflow/fields/snapshot_io.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "critflow/errors.hpp"

namespace critflow {
namespace {

constexpr std::array<char, 4> kMagic{'V', 'R', 'T', '1'};

template <class T>
void put_le(std::ostream& out, T value) {
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  U bits = std::bit_cast<U>(value);
  std::array<char, sizeof(T)> bytes{};
  for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xFF);
  out.write(bytes.data(), bytes.size());
}

template <class T>
T get_le(std::istream& in) {
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  std::array<unsigned char, sizeof(T)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) throw FormatError("snapshot truncated");
  U bits = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) bits |= static_cast<U>(bytes[i]) << (8 * i);
  return std::bit_cast<T>(bits);
}

}  // namespace

void write_snapshot(std::ostream& out, const VorticityField& field) {
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(field.grid().size()));
  put_le<double>(out, field.time());
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(field.samples().data()),
              static_cast<std::streamsize>(field.samples().size() * sizeof(double)));
  } else {
    for (double v : field.samples()) put_le<double>(out, v);
  }
  if (!out) throw FormatError("failed writing snapshot");
}

void write_snapshot(const std::filesystem::path& path, const VorticityField& field) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  write_snapshot(out, field);
}

VorticityField read_snapshot(std::istream& in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw FormatError("not a VRT1 snapshot (bad magic)");
  const auto m = get_le<std::uint32_t>(in);
  if (m > (1u << 16)) throw FormatError("snapshot grid size " + std::to_string(m) + " is implausible");
  std::optional<Grid> grid;
  try {
    grid.emplace(static_cast<int>(m));
  } catch (const ConfigError& e) {
    throw FormatError(std::string("snapshot header: ") + e.what());
  }
  const double time = get_le<double>(in);
  std::vector<double> samples(grid->point_count());
  if constexpr (std::endian::native == std::endian::little) {
    in.read(reinterpret_cast<char*>(samples.data()),
            static_cast<std::streamsize>(samples.size() * sizeof(double)));
    if (!in) throw FormatError("snapshot payload truncated");
  } else {
    for (double& v : samples) v = get_le<double>(in);
  }
  if (in.peek() != std::char_traits<char>::eof()) throw FormatError("snapshot has trailing bytes");
  VorticityField field(*grid, std::move(samples), Symmetry::kNone, time);
  if (field.antisymmetry_residual() < 1e-10 && std::abs(field.mean()) < 1e-12) {
    field.set_symmetry(Symmetry::kOddOdd);
  }
  return field;
}

VorticityField read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open snapshot " + path.string());
  return read_snapshot(in);
}

}  // namespace critflow
