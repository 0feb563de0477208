#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>

#include "mubest/clifford.hpp"
#include "mubest/designs.hpp"

namespace mubest {

/// On-disk rendering. kAuto picks CSV for a ".csv" extension and JSON otherwise.
enum class FileFormat { kAuto, kJson, kCsv };

inline constexpr int kDesignFormatVersion = 1;

/// Writes the header {format_version, dim, t, K, provenance, phi_t} followed by
/// one record per state of 2*dim numbers (re, im alternating, 17 significant
/// digits). phi_t is recomputed from the states at t = max(1, strength).
///
/// JSON: a single object with the header fields, "metadata" and "states".
/// CSV:  "# key=value" header lines, a column line re0,im0,..., one state per line.
void save_design(const StateDesign& design, const std::filesystem::path& path,
                 FileFormat format = FileFormat::kAuto);

/// Parses and validates a design file. Syntax problems raise ParseError with a
/// line (CSV, JSON syntax) or field (JSON structure) location; non-unit states
/// or a stored phi_t that disagrees with the recomputed one by more than 1e-9
/// raise ValidationError naming the offending state or field.
StateDesign load_design(const std::filesystem::path& path, FileFormat format = FileFormat::kAuto);

/// Same container with kind "unitary_group": one record per element holding the
/// 2*dim*dim entries of its phase-canonical matrix, row-major.
void save_group(const UnitaryGroup& group, const std::filesystem::path& path,
                FileFormat format = FileFormat::kAuto);

/// Loads a group and checks it: stored order, optional expected order, identity
/// membership, and closure under product and inverse on 100 seeded random pairs.
UnitaryGroup load_group(const std::filesystem::path& path, std::optional<std::size_t> expected_order = std::nullopt,
                        FileFormat format = FileFormat::kAuto);

}  // namespace mubest
