#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace sdverify {

/// Normalized tokens of one post.
using TokenStream = std::vector<std::string>;

/// Splits UTF-8 text on Unicode whitespace, control and punctuation characters
/// and applies simple case folding. An apostrophe (U+0027, U+2019, U+02BC)
/// between two letters stays inside the token and is normalized to U+0027.
/// Malformed UTF-8 sequences become U+FFFD. Idempotent under join_tokens.
TokenStream tokenize(std::string_view text);

/// Tokens joined with single ASCII spaces; the text regex markers are matched against.
std::string join_tokens(const TokenStream& tokens);

}  // namespace sdverify
