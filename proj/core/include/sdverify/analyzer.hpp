#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sdverify/corpus.hpp"
#include "sdverify/lexicon.hpp"
#include "sdverify/matcher.hpp"

namespace sdverify {

inline constexpr unsigned kDefaultPerPostCap = 3;

struct MarkerTotal {
    std::uint64_t raw = 0;
    std::uint64_t capped = 0;  // sum over posts of min(raw_in_post, cap)

    bool operator==(const MarkerTotal&) const = default;
};

struct PostMatches {
    std::string post_id;
    std::vector<std::pair<std::string, std::uint32_t>> hits;  // (marker_id, raw count), by marker_id

    bool operator==(const PostMatches&) const = default;
};

/// Marker matches over one track. Only markers and posts with at least one hit appear.
struct MatchSet {
    std::map<std::string, MarkerTotal> totals;
    std::vector<PostMatches> per_post;  // in track order

    [[nodiscard]] bool empty() const noexcept { return totals.empty(); }
    bool operator==(const MatchSet&) const = default;
};

/// Evidence for one characteristic: mass[i] is the evidence for values[i].
struct CharacteristicEvidence {
    std::string characteristic;
    std::vector<std::string> values;
    std::vector<double> mass;
    double total = 0.0;

    [[nodiscard]] double mass_of(std::string_view value) const;
    bool operator==(const CharacteristicEvidence&) const = default;
};

/// One entry per lexicon characteristic, in lexicon order.
struct EvidenceVector {
    std::vector<CharacteristicEvidence> entries;

    [[nodiscard]] const CharacteristicEvidence* find(std::string_view characteristic) const;
    bool operator==(const EvidenceVector&) const = default;
};

/// Per-post raw counts and per-marker capped totals. Throws ValidationError if cap == 0.
MatchSet match_track(const CompiledMatcher& matcher, const InformationTrack& track, unsigned per_post_cap);

/// Evidence mass per (characteristic, value) as the sum of weight x capped count,
/// accumulated in marker_id order. Throws ValidationError for a marker id the
/// lexicon does not contain.
EvidenceVector aggregate_evidence(const MatchSet& match_set, const MarkerLexicon& lexicon);

EvidenceVector analyze_track(const CompiledMatcher& matcher, const MarkerLexicon& lexicon,
                             const InformationTrack& track, unsigned per_post_cap);

/// All-zero vector shaped by the lexicon.
EvidenceVector zero_evidence(const MarkerLexicon& lexicon);

}  // namespace sdverify
