#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

namespace sdverify {

using json = nlohmann::json;

/// Serializes with sorted object keys, two-space indentation, a trailing
/// newline, and every floating-point number in fixed notation with six
/// fractional digits. Output is byte-stable for equal documents.
std::string canonical_dump(const json& doc);

/// Whole-file read. Throws IoError.
std::string read_text_file(const std::filesystem::path& path);

}  // namespace sdverify
