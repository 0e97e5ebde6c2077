#pragma once

#include <memory>
#include <optional>
#include <string>

#include <unicode/regex.h>

namespace sdverify::detail {

/// Compiles an ICU pattern from UTF-8. On failure returns nullptr and fills `error`.
std::unique_ptr<icu::RegexPattern> compile_regex(const std::string& pattern, std::string& error);

}  // namespace sdverify::detail
