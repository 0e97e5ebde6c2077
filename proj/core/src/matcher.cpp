#include "sdverify/matcher.hpp"

#include <algorithm>
#include <unordered_map>

#include <unicode/unistr.h>

#include "regex_util.hpp"
#include "sdverify/errors.hpp"

namespace sdverify {

namespace detail {

std::unique_ptr<icu::RegexPattern> compile_regex(const std::string& pattern, std::string& error) {
    UErrorCode status = U_ZERO_ERROR;
    UParseError parse_error{};
    auto upattern = icu::UnicodeString::fromUTF8(pattern);
    std::unique_ptr<icu::RegexPattern> compiled(icu::RegexPattern::compile(upattern, 0, parse_error, status));
    if (U_FAILURE(status)) {
        error = std::string(u_errorName(status)) + " at offset " + std::to_string(parse_error.offset);
        return nullptr;
    }
    return compiled;
}

}  // namespace detail

struct CompiledMatcher::Impl {
    struct Phrase {
        std::size_t marker_index;
        TokenStream tokens;
    };
    struct Regex {
        std::size_t marker_index;
        std::unique_ptr<icu::RegexPattern> pattern;
    };

    std::vector<std::string> marker_ids;
    std::unordered_map<std::string, std::vector<std::size_t>> tokens;
    std::unordered_map<std::string, std::vector<Phrase>> phrases;  // keyed by first token
    std::vector<Regex> regexes;
};

CompiledMatcher::CompiledMatcher() : impl_(std::make_shared<const Impl>()) {}

std::size_t CompiledMatcher::marker_count() const noexcept { return impl_->marker_ids.size(); }

const std::string& CompiledMatcher::marker_id(std::size_t index) const { return impl_->marker_ids.at(index); }

std::vector<MarkerHit> CompiledMatcher::match_tokens(const TokenStream& tokens) const {
    const Impl& impl = *impl_;
    std::unordered_map<std::size_t, std::uint32_t> counts;

    if (!impl.tokens.empty() || !impl.phrases.empty()) {
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            if (auto it = impl.tokens.find(tokens[i]); it != impl.tokens.end()) {
                for (auto idx : it->second) ++counts[idx];
            }
            if (auto it = impl.phrases.find(tokens[i]); it != impl.phrases.end()) {
                for (const auto& phrase : it->second) {
                    if (i + phrase.tokens.size() > tokens.size()) continue;
                    if (std::equal(phrase.tokens.begin() + 1, phrase.tokens.end(),
                                   tokens.begin() + static_cast<std::ptrdiff_t>(i) + 1)) {
                        ++counts[phrase.marker_index];
                    }
                }
            }
        }
    }

    if (!impl.regexes.empty() && !tokens.empty()) {
        const auto joined = icu::UnicodeString::fromUTF8(join_tokens(tokens));
        for (const auto& rx : impl.regexes) {
            UErrorCode status = U_ZERO_ERROR;
            std::unique_ptr<icu::RegexMatcher> m(rx.pattern->matcher(joined, status));
            if (U_FAILURE(status)) continue;
            std::uint32_t n = 0;
            while (m->find(status) && U_SUCCESS(status)) {
                if (m->end(status) > m->start(status)) ++n;
            }
            if (n > 0) counts[rx.marker_index] += n;
        }
    }

    std::vector<MarkerHit> hits;
    hits.reserve(counts.size());
    for (const auto& [idx, n] : counts) hits.push_back({idx, n});
    std::sort(hits.begin(), hits.end(), [](const MarkerHit& a, const MarkerHit& b) { return a.marker_index < b.marker_index; });
    return hits;
}

std::vector<MarkerHit> CompiledMatcher::match_text(std::string_view text) const { return match_tokens(tokenize(text)); }

CompiledMatcher compile_lexicon(const MarkerLexicon& lexicon) {
    auto impl = std::make_shared<CompiledMatcher::Impl>();
    for (std::size_t i = 0; i < lexicon.markers.size(); ++i) {
        const auto& m = lexicon.markers[i];
        impl->marker_ids.push_back(m.marker_id);
        switch (m.pattern_kind) {
            case PatternKind::token: {
                auto toks = tokenize(m.pattern);
                if (toks.size() != 1) throw InvariantViolation(m.marker_id, "token pattern must be exactly one token");
                impl->tokens[toks.front()].push_back(i);
                break;
            }
            case PatternKind::phrase: {
                auto toks = tokenize(m.pattern);
                if (toks.empty()) throw InvariantViolation(m.marker_id, "phrase pattern has no tokens");
                auto first = toks.front();
                impl->phrases[first].push_back({i, std::move(toks)});
                break;
            }
            case PatternKind::regex: {
                std::string error;
                auto compiled = detail::compile_regex(m.pattern, error);
                if (!compiled) throw RegexError(m.marker_id, error);
                impl->regexes.push_back({i, std::move(compiled)});
                break;
            }
        }
    }
    CompiledMatcher matcher;
    matcher.impl_ = std::move(impl);
    return matcher;
}

}  // namespace sdverify
