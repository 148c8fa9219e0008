#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>

#include "sknet/matcore.hpp"

// The wire formats write floating-point values as 17-significant-digit
// decimals so files round-trip bit-exactly. nlohmann/json handles parsing;
// writing goes through the helpers here so the digit count is pinned.

namespace sknet {

/// %.17g rendering, the float format used by every file this toolkit emits.
std::string format_f17(double v);

/// {"dim": d, "entries": [[re, im], ...]} row-major.
std::string matrix_to_json(const UMatrix& m);

UMatrix matrix_from_json(const nlohmann::json& j);
UMatrix matrix_from_json_text(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& data);

/// FNV-1a over a canonical rendering; used to pin nets to their gate set.
std::string content_hash(const std::string& canonical);

}  // namespace sknet
