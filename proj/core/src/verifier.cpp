#include "sdverify/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "parallel.hpp"
#include "sdverify/errors.hpp"

namespace sdverify {

void VerifierConfig::validate() const {
    if (!(theta_min >= 0.0) || !std::isfinite(theta_min)) throw ValidationError("theta_min must be a non-negative number");
    if (!(theta_sat > 0.0) || !std::isfinite(theta_sat)) throw ValidationError("theta_sat must be positive");
    if (theta_min > theta_sat) throw ValidationError("theta_min must not exceed theta_sat");
    if (!(theta_conf > 0.0 && theta_conf <= 1.0)) throw ValidationError("theta_conf must lie in (0, 1]");
    if (per_post_cap == 0) throw ValidationError("per_post_cap must be >= 1");
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::confirmed: return "Confirmed";
        case Verdict::refuted: return "Refuted";
        case Verdict::unverifiable: return "Unverifiable";
        case Verdict::inferred: return "Inferred";
    }
    return "?";
}

std::string to_string(Classification c) {
    switch (c) {
        case Classification::verified: return "Verified";
        case Classification::partially_verified: return "PartiallyVerified";
        case Classification::suspicious: return "Suspicious";
        case Classification::unverified: return "Unverified";
    }
    return "?";
}

std::optional<Verdict> parse_verdict(std::string_view s) {
    for (auto v : {Verdict::confirmed, Verdict::refuted, Verdict::unverifiable, Verdict::inferred}) {
        if (to_string(v) == s) return v;
    }
    return std::nullopt;
}

std::optional<Classification> parse_classification(std::string_view s) {
    for (auto c : {Classification::verified, Classification::partially_verified, Classification::suspicious,
                   Classification::unverified}) {
        if (to_string(c) == s) return c;
    }
    return std::nullopt;
}

std::optional<std::vector<double>> normalize(const EvidenceVector& evidence, std::string_view characteristic) {
    const auto* e = evidence.find(characteristic);
    if (e == nullptr || !(e->total > 0.0)) return std::nullopt;
    std::vector<double> p;
    p.reserve(e->mass.size());
    for (double s : e->mass) p.push_back(s / e->total);
    return p;
}

double reliability(const EvidenceVector& evidence, std::string_view characteristic, const VerifierConfig& config) {
    const auto* e = evidence.find(characteristic);
    if (e == nullptr || !(e->total > 0.0)) return 0.0;
    const double top = *std::max_element(e->mass.begin(), e->mass.end());
    const double share = top / e->total;
    const double volume = std::min(1.0, e->total / config.theta_sat);
    return std::clamp(share * volume, 0.0, 1.0);
}

CharacteristicVerdict verify_characteristic(const EvidenceVector& evidence, const std::optional<std::string>& declared,
                                            const std::string& characteristic, const VerifierConfig& config) {
    CharacteristicVerdict out;
    out.characteristic = characteristic;
    out.declared = declared;

    const auto* e = evidence.find(characteristic);
    if (e == nullptr || !(e->total > 0.0)) return out;
    out.evidence_mass = e->total;
    out.reliability = reliability(evidence, characteristic, config);

    std::size_t best = 0;
    for (std::size_t i = 1; i < e->mass.size(); ++i) {
        if (e->mass[i] > e->mass[best]) best = i;
    }
    for (std::size_t i = 0; i < e->mass.size(); ++i) {
        if (i != best && e->mass[i] == e->mass[best]) return out;  // exact tie: no inferred value
    }
    out.inferred = e->values[best];

    if (e->total < config.theta_min || out.reliability < config.theta_conf) return out;
    if (!declared) {
        out.verdict = Verdict::inferred;
    } else {
        out.verdict = *declared == *out.inferred ? Verdict::confirmed : Verdict::refuted;
    }
    return out;
}

VerifiedProfile form_profile(std::span<const CharacteristicVerdict> verdicts, const std::string& member_id,
                             const std::string& community_id) {
    VerifiedProfile profile;
    profile.member_id = member_id;
    profile.community_id = community_id;
    std::set<std::string> seen;
    for (const auto& v : verdicts) {
        if (!seen.insert(v.characteristic).second) throw DuplicateCharacteristic(v.characteristic);
    }
    for (const auto& v : verdicts) {
        if (v.verdict == Verdict::confirmed) {
            profile.entries.emplace(v.characteristic, ProfileEntry{*v.inferred, v.reliability});
        } else if (v.verdict == Verdict::refuted || v.verdict == Verdict::inferred) {
            profile.annotations.push_back(v);
        }
    }
    std::sort(profile.annotations.begin(), profile.annotations.end(),
              [](const auto& a, const auto& b) { return a.characteristic < b.characteristic; });
    return profile;
}

Classification classify_member(std::span<const CharacteristicVerdict> verdicts) {
    if (verdicts.empty()) throw EmptyVerdicts();
    bool any_definitive = false;
    bool any_declared = false;
    bool declared_all_confirmed = true;
    for (const auto& v : verdicts) {
        if (v.verdict == Verdict::refuted) return Classification::suspicious;
        any_definitive = any_definitive || v.definitive();
        if (v.declared) {
            any_declared = true;
            declared_all_confirmed = declared_all_confirmed && v.verdict == Verdict::confirmed;
        }
    }
    if (any_declared && declared_all_confirmed) return Classification::verified;
    if (!any_definitive) return Classification::unverified;
    return Classification::partially_verified;
}

std::vector<std::string> resolve_characteristics(const MarkerLexicon& lexicon, const VerifierConfig& config) {
    std::set<std::string> ids;
    if (config.selected_characteristics.empty()) {
        for (const auto& c : lexicon.characteristics) ids.insert(c.id);
    } else {
        for (const auto& id : config.selected_characteristics) {
            if (lexicon.find_characteristic(id) == nullptr) throw UnknownCharacteristic(id);
            ids.insert(id);
        }
    }
    return {ids.begin(), ids.end()};
}

MemberReport verify_member(const Corpus& corpus, const CompiledMatcher& matcher, const MarkerLexicon& lexicon,
                           const std::string& community_id, const std::string& member_id,
                           const VerifierConfig& config) {
    config.validate();
    const auto selected = resolve_characteristics(lexicon, config);
    const auto track = build_information_track(corpus, community_id, member_id);
    const auto evidence = analyze_track(matcher, lexicon, track, config.per_post_cap);
    const auto& declared = corpus.profile(community_id, member_id);

    MemberReport report;
    report.member_id = member_id;
    report.community_id = community_id;
    report.track_size = track.total_posts;
    for (const auto& c : selected) {
        report.verdicts.push_back(
            verify_characteristic(evidence, declared_value(declared, c, config.reference_year), c, config));
    }
    report.profile = form_profile(report.verdicts, member_id, community_id);
    report.classification = classify_member(report.verdicts);
    return report;
}

std::vector<MemberReport> verify_members(const Corpus& corpus, const CompiledMatcher& matcher,
                                         const MarkerLexicon& lexicon, const std::string& community_id,
                                         std::vector<std::string> member_ids, const VerifierConfig& config,
                                         unsigned workers) {
    config.validate();
    resolve_characteristics(lexicon, config);
    if (!corpus.has_community(community_id)) throw UnknownCommunity(community_id);
    if (member_ids.empty()) {
        for (const auto& m : list_members(corpus, community_id)) member_ids.push_back(m.member_id);
    } else {
        std::sort(member_ids.begin(), member_ids.end());
        member_ids.erase(std::unique(member_ids.begin(), member_ids.end()), member_ids.end());
        for (const auto& id : member_ids) {
            if (!corpus.has_member(community_id, id)) throw UnknownMember(community_id, id);
        }
    }
    std::vector<MemberReport> reports(member_ids.size());
    detail::parallel_for(member_ids.size(), workers, [&](std::size_t i) {
        reports[i] = verify_member(corpus, matcher, lexicon, community_id, member_ids[i], config);
    });
    return reports;
}

}  // namespace sdverify
