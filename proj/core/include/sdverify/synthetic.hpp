#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sdverify/canonical_json.hpp"
#include "sdverify/corpus.hpp"
#include "sdverify/lexicon.hpp"

namespace sdverify {

/// Recipe for one labeled synthetic community.
struct SyntheticSpec {
    std::string label = "synthetic";
    std::string community_id = "synthetic";
    std::size_t n_members = 100;
    std::size_t posts_min = 5;
    std::size_t posts_max = 30;
    double signal_rate = 0.5;        // per post and characteristic: one marker of the true value
    double noise_rate = 0.05;        // per post and characteristic: one marker of a random wrong value
    double deceiver_fraction = 0.2;  // deceivers misdeclare every generated characteristic
    std::vector<std::string> characteristics{"gender", "age_group"};
    std::uint64_t seed = 1;

    /// Throws ValidationError.
    void validate() const;
    bool operator==(const SyntheticSpec&) const = default;
};

struct GroundTruth {
    std::map<std::string, std::map<std::string, std::string>> values;  // member -> characteristic -> true value
    std::map<std::string, bool> deceiver;

    bool operator==(const GroundTruth&) const = default;
};

struct SyntheticCommunity {
    Corpus corpus;
    GroundTruth truth;
};

/// Deterministic for a fixed seed on every platform (mt19937_64 raw output with
/// hand-rolled range reduction). Marker text is drawn from token and phrase
/// markers only. Throws CoverageError when some (characteristic, value) has no
/// such marker, ValidationError for a bad spec.
SyntheticCommunity generate_synthetic(const SyntheticSpec& spec, const MarkerLexicon& lexicon, int reference_year);

json to_json(const SyntheticSpec& spec);
/// `posts_per_member` is a [min, max] pair. Missing keys keep their defaults.
SyntheticSpec synthetic_spec_from_json(const json& doc);

}  // namespace sdverify
