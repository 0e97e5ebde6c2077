#include "sdverify/report_json.hpp"

#include "sdverify/errors.hpp"

namespace sdverify {
namespace {

json optional_string(const std::optional<std::string>& s) { return s ? json(*s) : json(nullptr); }

std::optional<std::string> read_optional_string(const json& doc, const char* key) {
    auto it = doc.find(key);
    if (it == doc.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) throw FormatError("report", 0, std::string("field ") + key + " must be string or null");
    return it->get<std::string>();
}

template <typename T>
T read(const json& doc, const char* key) {
    auto it = doc.find(key);
    if (it == doc.end()) throw FormatError("report", 0, std::string("missing field ") + key);
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        throw FormatError("report", 0, std::string("wrong type for field ") + key);
    }
}

}  // namespace

json to_json(const CharacteristicVerdict& v) {
    return {{"characteristic", v.characteristic},
            {"declared", optional_string(v.declared)},
            {"inferred", optional_string(v.inferred)},
            {"reliability", v.reliability},
            {"verdict", to_string(v.verdict)},
            {"evidence_mass", v.evidence_mass}};
}

json to_json(const MemberReport& r) {
    json verdicts = json::array();
    for (const auto& v : r.verdicts) verdicts.push_back(to_json(v));
    json entries = json::object();
    for (const auto& [c, e] : r.profile.entries) entries[c] = {{"value", e.value}, {"reliability", e.reliability}};
    json annotations = json::array();
    for (const auto& v : r.profile.annotations) annotations.push_back(to_json(v));
    return {{"member_id", r.member_id},
            {"community_id", r.community_id},
            {"track_size", r.track_size},
            {"classification", to_string(r.classification)},
            {"verdicts", verdicts},
            {"profile",
             {{"member_id", r.profile.member_id},
              {"community_id", r.profile.community_id},
              {"entries", entries},
              {"annotations", annotations}}}};
}

json to_json(const VerifierConfig& c) {
    return {{"theta_min", c.theta_min},
            {"theta_sat", c.theta_sat},
            {"theta_conf", c.theta_conf},
            {"per_post_cap", c.per_post_cap},
            {"reference_year", c.reference_year},
            {"selected_characteristics", c.selected_characteristics}};
}

CharacteristicVerdict verdict_from_json(const json& doc) {
    if (!doc.is_object()) throw FormatError("report", 0, "verdict must be an object");
    CharacteristicVerdict v;
    v.characteristic = read<std::string>(doc, "characteristic");
    v.declared = read_optional_string(doc, "declared");
    v.inferred = read_optional_string(doc, "inferred");
    v.reliability = read<double>(doc, "reliability");
    v.evidence_mass = read<double>(doc, "evidence_mass");
    auto verdict = parse_verdict(read<std::string>(doc, "verdict"));
    if (!verdict) throw FormatError("report", 0, "unknown verdict");
    v.verdict = *verdict;
    return v;
}

MemberReport member_report_from_json(const json& doc) {
    if (!doc.is_object()) throw FormatError("report", 0, "report must be an object");
    MemberReport r;
    r.member_id = read<std::string>(doc, "member_id");
    r.community_id = read<std::string>(doc, "community_id");
    r.track_size = read<std::size_t>(doc, "track_size");
    auto cls = parse_classification(read<std::string>(doc, "classification"));
    if (!cls) throw FormatError("report", 0, "unknown classification");
    r.classification = *cls;
    for (const auto& v : read<json>(doc, "verdicts")) r.verdicts.push_back(verdict_from_json(v));
    const auto profile = read<json>(doc, "profile");
    r.profile.member_id = read<std::string>(profile, "member_id");
    r.profile.community_id = read<std::string>(profile, "community_id");
    const auto entries = read<json>(profile, "entries");
    for (const auto& [c, e] : entries.items()) {
        r.profile.entries.emplace(c, ProfileEntry{read<std::string>(e, "value"), read<double>(e, "reliability")});
    }
    for (const auto& v : read<json>(profile, "annotations")) r.profile.annotations.push_back(verdict_from_json(v));
    return r;
}

VerifierConfig apply_config_overrides(VerifierConfig base, const json& overrides) {
    if (overrides.is_null()) {
        base.validate();
        return base;
    }
    if (!overrides.is_object()) throw ValidationError("config overrides must be an object");
    auto number = [](const json& v, const std::string& key) {
        if (!v.is_number()) throw ValidationError("config." + key + " must be a number");
        return v.get<double>();
    };
    for (auto it = overrides.begin(); it != overrides.end(); ++it) {
        const auto& key = it.key();
        const auto& v = it.value();
        if (key == "theta_min") {
            base.theta_min = number(v, key);
        } else if (key == "theta_sat") {
            base.theta_sat = number(v, key);
        } else if (key == "theta_conf") {
            base.theta_conf = number(v, key);
        } else if (key == "per_post_cap") {
            if (!v.is_number_integer() || v.get<std::int64_t>() < 1) {
                throw ValidationError("config.per_post_cap must be a positive integer");
            }
            base.per_post_cap = static_cast<unsigned>(v.get<std::int64_t>());
        } else if (key == "reference_year") {
            if (!v.is_number_integer()) throw ValidationError("config.reference_year must be an integer");
            base.reference_year = v.get<int>();
        } else if (key == "selected_characteristics") {
            if (!v.is_array()) throw ValidationError("config.selected_characteristics must be an array");
            base.selected_characteristics.clear();
            for (const auto& c : v) {
                if (!c.is_string()) throw ValidationError("config.selected_characteristics must hold strings");
                base.selected_characteristics.push_back(c.get<std::string>());
            }
        } else {
            throw ValidationError("unknown config key: " + key);
        }
    }
    base.validate();
    return base;
}

std::string canonical_reports(const std::vector<MemberReport>& reports) {
    json arr = json::array();
    for (const auto& r : reports) arr.push_back(to_json(r));
    return canonical_dump(arr);
}

}  // namespace sdverify
