#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "ltrace/symbol.hpp"

namespace ltrace {

/// Operator spec document:
///   {"name": "...", "n": 2, "k": 1, "dimV": 2, "dimW": 3,
///    "w_weights": ["1", "2", "1"],                      (optional)
///    "terms": [{"alpha": [1, 0], "matrix": [["1", "0"], ...]}, ...]}
/// Matrix rows = dimW, cols = dimV; entries are "p/q" strings or integers.
///
/// Throws ParseError whose location is "line L, column C" for syntax errors
/// and a JSON path such as "terms[2].alpha" for semantic errors.
HomogeneousSymbol parse_symbol(std::string_view text);
HomogeneousSymbol read_symbol_file(const std::filesystem::path& path);

/// Pretty-printed document; parse_symbol(symbol_to_json(a)) reproduces a.
std::string symbol_to_json(const HomogeneousSymbol& a);
void write_symbol_file(const HomogeneousSymbol& a, const std::filesystem::path& path);

}  // namespace ltrace
