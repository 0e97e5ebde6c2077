#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sdverify/analyzer.hpp"
#include "sdverify/corpus.hpp"
#include "sdverify/lexicon.hpp"
#include "sdverify/matcher.hpp"

namespace sdverify {

inline constexpr int kDefaultReferenceYear = 2015;

struct VerifierConfig {
    double theta_min = 3.0;    // evidence mass needed before any verdict is attempted
    double theta_sat = 10.0;   // evidence mass at which reliability stops growing
    double theta_conf = 0.6;   // reliability needed for a definitive verdict
    unsigned per_post_cap = kDefaultPerPostCap;
    int reference_year = kDefaultReferenceYear;
    std::vector<std::string> selected_characteristics;  // empty: every lexicon characteristic

    /// Throws ValidationError.
    void validate() const;
    bool operator==(const VerifierConfig&) const = default;
};

enum class Verdict { confirmed, refuted, unverifiable, inferred };
enum class Classification { verified, partially_verified, suspicious, unverified };

struct CharacteristicVerdict {
    std::string characteristic;
    std::optional<std::string> declared;
    std::optional<std::string> inferred;
    double reliability = 0.0;
    Verdict verdict = Verdict::unverifiable;
    double evidence_mass = 0.0;

    [[nodiscard]] bool definitive() const noexcept { return verdict != Verdict::unverifiable; }
    bool operator==(const CharacteristicVerdict&) const = default;
};

struct ProfileEntry {
    std::string value;
    double reliability = 0.0;

    bool operator==(const ProfileEntry&) const = default;
};

/// Portrait assembled only from Confirmed characteristics; Refuted and Inferred
/// verdicts are carried alongside as annotations.
struct VerifiedProfile {
    std::string member_id;
    std::string community_id;
    std::map<std::string, ProfileEntry> entries;
    std::vector<CharacteristicVerdict> annotations;

    bool operator==(const VerifiedProfile&) const = default;
};

struct MemberReport {
    std::string member_id;
    std::string community_id;
    std::vector<CharacteristicVerdict> verdicts;  // by characteristic id
    VerifiedProfile profile;
    Classification classification = Classification::unverified;
    std::size_t track_size = 0;

    bool operator==(const MemberReport&) const = default;
};

/// Share of the characteristic's evidence held by each value (aligned with the
/// domain order). nullopt when the characteristic has zero mass or is unknown.
std::optional<std::vector<double>> normalize(const EvidenceVector& evidence, std::string_view characteristic);

/// Concentration of the leading value scaled by evidence volume:
/// max share x min(1, total / theta_sat); zero without evidence.
double reliability(const EvidenceVector& evidence, std::string_view characteristic, const VerifierConfig& config);

CharacteristicVerdict verify_characteristic(const EvidenceVector& evidence, const std::optional<std::string>& declared,
                                            const std::string& characteristic, const VerifierConfig& config);

/// Throws DuplicateCharacteristic.
VerifiedProfile form_profile(std::span<const CharacteristicVerdict> verdicts, const std::string& member_id,
                             const std::string& community_id);

/// Throws EmptyVerdicts.
Classification classify_member(std::span<const CharacteristicVerdict> verdicts);

/// Selected characteristic ids in ascending order. Throws UnknownCharacteristic.
std::vector<std::string> resolve_characteristics(const MarkerLexicon& lexicon, const VerifierConfig& config);

MemberReport verify_member(const Corpus& corpus, const CompiledMatcher& matcher, const MarkerLexicon& lexicon,
                           const std::string& community_id, const std::string& member_id,
                           const VerifierConfig& config);

/// Verifies members concurrently on `workers` threads (0: hardware concurrency).
/// Empty `member_ids` selects every member of the community. Output is ordered
/// by member_id and independent of the worker count.
std::vector<MemberReport> verify_members(const Corpus& corpus, const CompiledMatcher& matcher,
                                         const MarkerLexicon& lexicon, const std::string& community_id,
                                         std::vector<std::string> member_ids, const VerifierConfig& config,
                                         unsigned workers = 0);

std::string to_string(Verdict v);
std::string to_string(Classification c);
std::optional<Verdict> parse_verdict(std::string_view s);
std::optional<Classification> parse_classification(std::string_view s);

}  // namespace sdverify
