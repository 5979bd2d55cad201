#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "ltrace/measures.hpp"

namespace ltrace {

inline constexpr const char* kMeasureSchema = "ltrace.measure/1";

/// Text document: schema, n, dimension_alpha, level, spacing, total_mass,
/// support {kind, ...}, generator (or null), atoms [[x_1, ..., x_n, w], ...].
/// Doubles are written with 17 significant digits, so reading reproduces the
/// measure bitwise.
nlohmann::json measure_to_json(const DiscreteMeasure& mu);
DiscreteMeasure measure_from_json(const nlohmann::json& doc);
std::string measure_to_text(const DiscreteMeasure& mu);
DiscreteMeasure parse_measure(std::string_view text);

/// Binary layout (little endian):
///   "LTMS" u32 version, u32 n, i32 level, f64 alpha, f64 spacing,
///   support and generator blocks, u64 atoms, u8 encoding,
///   encoding 1: per atom n x u32 cell indices of the generator axes,
///   encoding 0: per atom n x f64 coordinates,
///   u8 uniform flag, then either one f64 weight or one per atom.
/// Measures carrying a product generator use the cell-index encoding.
std::string measure_to_binary(const DiscreteMeasure& mu);
DiscreteMeasure measure_from_binary(std::string_view bytes);

/// Format chosen by extension: ".msrb" binary, anything else text.
void write_measure_file(const DiscreteMeasure& mu, const std::filesystem::path& path);
DiscreteMeasure read_measure_file(const std::filesystem::path& path);

}  // namespace ltrace
