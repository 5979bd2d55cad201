#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "ltrace/fields.hpp"

namespace ltrace {

/// CSV with header x1..xn,u1..um and one row per node in grid order.
std::string field_to_csv(const GridField& u);

/// Binary layout (little endian):
///   "LTFD" u32 version, u32 n, u32 components, u8 periodic, u8 band_limited,
///   per axis i32 res, f64 length, f64 origin, per component f64 weight,
///   then components x nodes f64 samples (component-major, row-major nodes).
std::string field_to_binary(const GridField& u);
GridField field_from_binary(std::string_view bytes);

/// ".csv" writes CSV, anything else the binary layout.
void write_field_file(const GridField& u, const std::filesystem::path& path);
GridField read_field_file(const std::filesystem::path& path);

}  // namespace ltrace
