#include "sdverify/analyzer.hpp"

#include <algorithm>
#include <unordered_map>

#include "sdverify/errors.hpp"

namespace sdverify {

double CharacteristicEvidence::mass_of(std::string_view value) const {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] == value) return mass[i];
    }
    return 0.0;
}

const CharacteristicEvidence* EvidenceVector::find(std::string_view characteristic) const {
    for (const auto& e : entries) {
        if (e.characteristic == characteristic) return &e;
    }
    return nullptr;
}

MatchSet match_track(const CompiledMatcher& matcher, const InformationTrack& track, unsigned per_post_cap) {
    if (per_post_cap == 0) throw ValidationError("per_post_cap must be >= 1");
    MatchSet result;
    for (const auto& post : track.posts) {
        auto hits = matcher.match_text(post.text);
        if (hits.empty()) continue;
        PostMatches pm;
        pm.post_id = post.post_id;
        for (const auto& hit : hits) {
            const auto& id = matcher.marker_id(hit.marker_index);
            pm.hits.emplace_back(id, hit.count);
            auto& total = result.totals[id];
            total.raw += hit.count;
            total.capped += std::min<std::uint64_t>(hit.count, per_post_cap);
        }
        std::sort(pm.hits.begin(), pm.hits.end());
        result.per_post.push_back(std::move(pm));
    }
    return result;
}

EvidenceVector zero_evidence(const MarkerLexicon& lexicon) {
    EvidenceVector ev;
    ev.entries.reserve(lexicon.characteristics.size());
    for (const auto& c : lexicon.characteristics) {
        ev.entries.push_back({c.id, c.values, std::vector<double>(c.values.size(), 0.0), 0.0});
    }
    return ev;
}

EvidenceVector aggregate_evidence(const MatchSet& match_set, const MarkerLexicon& lexicon) {
    EvidenceVector ev = zero_evidence(lexicon);

    std::unordered_map<std::string_view, const Marker*> by_id;
    by_id.reserve(lexicon.markers.size());
    for (const auto& m : lexicon.markers) by_id.emplace(m.marker_id, &m);

    std::unordered_map<std::string_view, std::size_t> char_index;
    for (std::size_t i = 0; i < ev.entries.size(); ++i) char_index.emplace(ev.entries[i].characteristic, i);

    // totals is a std::map, so this walk is in marker_id order
    for (const auto& [marker_id, total] : match_set.totals) {
        auto it = by_id.find(marker_id);
        if (it == by_id.end()) throw ValidationError("match set refers to unknown marker " + marker_id);
        const Marker& m = *it->second;
        auto& entry = ev.entries[char_index.at(m.characteristic)];
        const auto value_index = lexicon.find_characteristic(m.characteristic)->index_of(m.value).value();
        entry.mass[value_index] += m.weight * static_cast<double>(total.capped);
    }

    for (auto& entry : ev.entries) {
        double sum = 0.0;
        for (double s : entry.mass) sum += s;
        entry.total = sum;
    }
    return ev;
}

EvidenceVector analyze_track(const CompiledMatcher& matcher, const MarkerLexicon& lexicon,
                             const InformationTrack& track, unsigned per_post_cap) {
    return aggregate_evidence(match_track(matcher, track, per_post_cap), lexicon);
}

}  // namespace sdverify
