#include "brute_force_scanner.hpp"

#include <algorithm>
#include <regex>

namespace sdverify::testing {

std::vector<std::string> ascii_split(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == ' ' || c == ',' || c == '.') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::uint64_t brute_count(const Marker& marker, const std::string& text) {
    const auto tokens = ascii_split(text);
    switch (marker.pattern_kind) {
        case PatternKind::token:
            return static_cast<std::uint64_t>(std::count(tokens.begin(), tokens.end(), marker.pattern));
        case PatternKind::phrase: {
            const auto phrase = ascii_split(marker.pattern);
            std::uint64_t n = 0;
            for (std::size_t i = 0; i + phrase.size() <= tokens.size(); ++i) {
                bool all = true;
                for (std::size_t j = 0; j < phrase.size(); ++j) all = all && tokens[i + j] == phrase[j];
                n += all ? 1 : 0;
            }
            return n;
        }
        case PatternKind::regex: {
            std::string joined;
            for (const auto& t : tokens) joined += (joined.empty() ? "" : " ") + t;
            const std::regex rx(marker.pattern, std::regex::ECMAScript);
            std::uint64_t n = 0;
            for (auto it = std::sregex_iterator(joined.begin(), joined.end(), rx); it != std::sregex_iterator(); ++it) {
                if (it->length(0) > 0) ++n;
            }
            return n;
        }
    }
    return 0;
}

std::map<std::string, std::uint64_t> brute_capped_totals(const MarkerLexicon& lexicon, const InformationTrack& track,
                                                         unsigned cap) {
    std::map<std::string, std::uint64_t> totals;
    for (const auto& marker : lexicon.markers) {
        std::uint64_t sum = 0;
        for (const auto& post : track.posts) sum += std::min<std::uint64_t>(brute_count(marker, post.text), cap);
        if (sum > 0) totals[marker.marker_id] = sum;
    }
    return totals;
}

EvidenceVector brute_evidence(const MarkerLexicon& lexicon, const InformationTrack& track, unsigned cap) {
    const auto totals = brute_capped_totals(lexicon, track, cap);
    EvidenceVector ev;
    for (const auto& c : lexicon.characteristics) {
        CharacteristicEvidence e;
        e.characteristic = c.id;
        e.values = c.values;
        e.mass.assign(c.values.size(), 0.0);
        for (const auto& [id, count] : totals) {
            const Marker* m = nullptr;
            for (const auto& candidate : lexicon.markers) {
                if (candidate.marker_id == id) m = &candidate;
            }
            if (m->characteristic != c.id) continue;
            for (std::size_t v = 0; v < c.values.size(); ++v) {
                if (c.values[v] == m->value) e.mass[v] += m->weight * static_cast<double>(count);
            }
        }
        for (double s : e.mass) e.total += s;
        ev.entries.push_back(std::move(e));
    }
    return ev;
}

}  // namespace sdverify::testing
