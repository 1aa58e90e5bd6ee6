#pragma once

#include <iosfwd>
#include <string>

#include "splitwire/types.hpp"

namespace splitwire {

/// Formats a double with 9 significant digits, trailing zeros kept
/// ("1.00000000"). Shared by every text writer in the toolkit.
std::string sig9(double value);

/// Reads whitespace- or comma-separated "x y z [label]" lines.
/// '#'-prefixed lines and blank lines are skipped. Throws ParseError with a
/// 1-based line number on malformed input, ValidationError on non-finite
/// coordinates.
PointCloud read_xyz(std::istream& in, bool has_label_column);

/// Reads an ASCII PLY with at least float properties x, y, z on element
/// "vertex". Extra properties are ignored. Binary PLY is rejected.
PointCloud read_ply_ascii(std::istream& in);

/// Writes "x y z [label]" rows, 9 significant digits, one point per line.
void write_xyz(const PointCloud& cloud, std::ostream& out);

/// Writes the "x,y,z,label" CSV. Requires labels (ContractError otherwise).
void write_labels_csv(const PointCloud& cloud, std::ostream& out);

// File-path conveniences used by the CLI and bindings.
PointCloud read_xyz_file(const std::string& path, bool has_label_column);
PointCloud read_ply_file(const std::string& path);
void write_xyz_file(const PointCloud& cloud, const std::string& path);
void write_labels_csv_file(const PointCloud& cloud, const std::string& path);

}  // namespace splitwire
