#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sdverify/lexicon.hpp"
#include "sdverify/tokenizer.hpp"

namespace sdverify {

/// Raw hit count of one marker (by position in the lexicon's marker list).
struct MarkerHit {
    std::size_t marker_index = 0;
    std::uint32_t count = 0;

    bool operator==(const MarkerHit&) const = default;
};

/// Lexicon compiled for matching: token markers through a hash index, phrase
/// markers indexed by their first token, regex markers precompiled. Immutable
/// and cheap to copy; share freely across threads.
class CompiledMatcher {
public:
    CompiledMatcher();

    /// Hits in one post, ascending by marker_index, zero counts omitted.
    [[nodiscard]] std::vector<MarkerHit> match_tokens(const TokenStream& tokens) const;
    [[nodiscard]] std::vector<MarkerHit> match_text(std::string_view text) const;

    [[nodiscard]] std::size_t marker_count() const noexcept;
    [[nodiscard]] const std::string& marker_id(std::size_t index) const;

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;

    friend CompiledMatcher compile_lexicon(const MarkerLexicon& lexicon);
};

/// Throws RegexError(marker_id) for a regex that does not compile.
CompiledMatcher compile_lexicon(const MarkerLexicon& lexicon);

}  // namespace sdverify
