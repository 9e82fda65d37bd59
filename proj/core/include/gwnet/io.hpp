#pragma once

#include <filesystem>
#include <string>

#include "gwnet/generators.hpp"
#include "gwnet/invariants.hpp"
#include "gwnet/lower_bounds.hpp"
#include "gwnet/network.hpp"

namespace gwnet {

// Network JSON: {"labels": [...], "weights": [[...]], "measure": [...]}.
// "labels" and "measure" are optional; a missing measure means uniform.

MeasureNetwork network_from_json(const std::string& text);
std::string network_to_json(const MeasureNetwork& X);

/// Throws IoError when the file cannot be read, ParseError on bad content.
MeasureNetwork read_network(const std::filesystem::path& path);
void write_network(const MeasureNetwork& X, const std::filesystem::path& path);

// SBM spec JSON: {"means": [[...]], "variances": [[...]],
// "block_sizes": [...], "seed": n}. "variances" may be a single number.
SbmSpec sbm_spec_from_json(const std::string& text);

std::string bound_report_to_json(const BoundReport& report);

/// Shortest round-trip decimal form of x ("inf", "-inf", "nan" for
/// non-finite values).
std::string format_double(double x);

/// Two-column CSV "t,value".
std::string size_curve_csv(const SizeCurve& curve);

/// Reads a whole file; IoError on failure.
std::string read_text(const std::filesystem::path& path);
/// Writes a whole file, creating parent directories; IoError on failure.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace gwnet
