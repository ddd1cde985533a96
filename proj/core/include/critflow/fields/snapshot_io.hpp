#pragma once

#include <filesystem>
#include <iosfwd>

#include "critflow/fields/field_types.hpp"

namespace critflow {

/// "VRT1" snapshot layout, all little-endian:
///   bytes 0-3   magic "VRT1"
///   bytes 4-7   u32 grid size M
///   bytes 8-15  f64 time
///   then M*M f64 samples, row-major (x1 is the row index).
///
/// The format carries no symmetry flag. Readers mark a field odd-odd when its
/// samples pass the odd-odd invariant, otherwise kNone.
void write_snapshot(std::ostream& out, const VorticityField& field);
void write_snapshot(const std::filesystem::path& path, const VorticityField& field);

/// Throws FormatError on a bad magic, an invalid grid size, or a truncated or
/// oversized payload.
VorticityField read_snapshot(std::istream& in);
VorticityField read_snapshot(const std::filesystem::path& path);

}  // namespace critflow
