#include "sdverify/lexicon.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include "regex_util.hpp"
#include "sdverify/canonical_json.hpp"
#include "sdverify/errors.hpp"
#include "sdverify/tokenizer.hpp"

namespace sdverify {
namespace {

std::optional<MarkerClass> parse_marker_class(std::string_view s) {
    if (s == "lexico_semantic") return MarkerClass::lexico_semantic;
    if (s == "lexico_syntactic") return MarkerClass::lexico_syntactic;
    if (s == "grammatical") return MarkerClass::grammatical;
    return std::nullopt;
}

std::optional<PatternKind> parse_pattern_kind(std::string_view s) {
    if (s == "token") return PatternKind::token;
    if (s == "phrase") return PatternKind::phrase;
    if (s == "regex") return PatternKind::regex;
    return std::nullopt;
}

std::string string_field(const json& obj, const char* key, const std::string& source, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_string()) {
        throw FormatError(source, 0, where + ": missing or non-string \"" + key + "\"");
    }
    return it->get<std::string>();
}

bool has_whitespace(std::string_view s) {
    return std::any_of(s.begin(), s.end(), [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; });
}

std::string normalized_pattern(const Marker& m) {
    if (m.pattern_kind == PatternKind::regex) return m.pattern;
    return join_tokens(tokenize(m.pattern));
}

}  // namespace

std::optional<std::size_t> Characteristic::index_of(std::string_view value) const {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] == value) return i;
    }
    return std::nullopt;
}

const Characteristic* MarkerLexicon::find_characteristic(std::string_view id) const {
    for (const auto& c : characteristics) {
        if (c.id == id) return &c;
    }
    return nullptr;
}

const Marker* MarkerLexicon::find_marker(std::string_view id) const {
    for (const auto& m : markers) {
        if (m.marker_id == id) return &m;
    }
    return nullptr;
}

std::string to_string(MarkerClass c) {
    switch (c) {
        case MarkerClass::lexico_semantic: return "lexico_semantic";
        case MarkerClass::lexico_syntactic: return "lexico_syntactic";
        case MarkerClass::grammatical: return "grammatical";
    }
    return "?";
}

std::string to_string(PatternKind k) {
    switch (k) {
        case PatternKind::token: return "token";
        case PatternKind::phrase: return "phrase";
        case PatternKind::regex: return "regex";
    }
    return "?";
}

std::string to_string(Severity s) { return s == Severity::warning ? "warning" : "error"; }

void check_lexicon_invariants(const MarkerLexicon& lexicon) {
    std::set<std::string> characteristic_ids;
    for (const auto& c : lexicon.characteristics) {
        const std::string tag = "characteristic:" + c.id;
        if (c.id.empty()) throw InvariantViolation(tag, "empty characteristic id");
        if (!characteristic_ids.insert(c.id).second) throw InvariantViolation(tag, "duplicate characteristic id");
        if (c.values.size() < 2) throw InvariantViolation(tag, "value domain needs at least two values");
        std::set<std::string> seen;
        for (const auto& v : c.values) {
            if (v.empty()) throw InvariantViolation(tag, "empty value identifier");
            if (!seen.insert(v).second) throw InvariantViolation(tag, "duplicate value \"" + v + "\"");
        }
    }

    std::set<std::string> marker_ids;
    for (const auto& m : lexicon.markers) {
        if (m.marker_id.empty()) throw InvariantViolation(m.marker_id, "empty marker_id");
        if (!marker_ids.insert(m.marker_id).second) throw InvariantViolation(m.marker_id, "duplicate marker_id");
        if (!(m.weight > 0.0) || !std::isfinite(m.weight)) {
            throw InvariantViolation(m.marker_id, "weight must be a positive finite number");
        }
        const auto* c = lexicon.find_characteristic(m.characteristic);
        if (c == nullptr) throw InvariantViolation(m.marker_id, "unknown characteristic \"" + m.characteristic + "\"");
        if (!c->index_of(m.value)) {
            throw InvariantViolation(m.marker_id, "value \"" + m.value + "\" not in domain of " + m.characteristic);
        }
        if (m.pattern.empty()) throw InvariantViolation(m.marker_id, "empty pattern");
        switch (m.pattern_kind) {
            case PatternKind::token:
                if (has_whitespace(m.pattern) || tokenize(m.pattern).size() != 1) {
                    throw InvariantViolation(m.marker_id, "token pattern must be exactly one token");
                }
                break;
            case PatternKind::phrase:
                if (tokenize(m.pattern).empty()) throw InvariantViolation(m.marker_id, "phrase pattern has no tokens");
                break;
            case PatternKind::regex: {
                std::string error;
                if (!detail::compile_regex(m.pattern, error)) {
                    throw InvariantViolation(m.marker_id, "regex does not compile: " + error);
                }
                break;
            }
        }
    }
}

MarkerLexicon parse_lexicon(std::string_view text, const std::string& source) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(source, 0, std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw FormatError(source, 0, "lexicon must be a JSON object");

    MarkerLexicon lexicon;
    lexicon.version = string_field(doc, "version", source, "lexicon");

    auto chars = doc.find("characteristics");
    if (chars == doc.end() || !chars->is_array()) throw FormatError(source, 0, "\"characteristics\" must be an array");
    for (const auto& c : *chars) {
        if (!c.is_object()) throw FormatError(source, 0, "characteristic entry must be an object");
        Characteristic ch;
        ch.id = string_field(c, "id", source, "characteristic");
        auto values = c.find("values");
        if (values == c.end() || !values->is_array()) {
            throw FormatError(source, 0, "characteristic " + ch.id + ": \"values\" must be an array");
        }
        for (const auto& v : *values) {
            if (!v.is_string()) throw FormatError(source, 0, "characteristic " + ch.id + ": values must be strings");
            ch.values.push_back(v.get<std::string>());
        }
        lexicon.characteristics.push_back(std::move(ch));
    }

    auto markers = doc.find("markers");
    if (markers == doc.end() || !markers->is_array()) throw FormatError(source, 0, "\"markers\" must be an array");
    for (const auto& m : *markers) {
        if (!m.is_object()) throw FormatError(source, 0, "marker entry must be an object");
        Marker marker;
        marker.marker_id = string_field(m, "marker_id", source, "marker");
        const std::string where = "marker " + marker.marker_id;
        auto cls = parse_marker_class(string_field(m, "class", source, where));
        if (!cls) throw FormatError(source, 0, where + ": unknown class");
        marker.marker_class = *cls;
        auto kind = parse_pattern_kind(string_field(m, "pattern_kind", source, where));
        if (!kind) throw FormatError(source, 0, where + ": unknown pattern_kind");
        marker.pattern_kind = *kind;
        marker.pattern = string_field(m, "pattern", source, where);
        marker.characteristic = string_field(m, "characteristic", source, where);
        marker.value = string_field(m, "value", source, where);
        auto w = m.find("weight");
        if (w == m.end() || !w->is_number()) throw FormatError(source, 0, where + ": missing or non-numeric weight");
        marker.weight = w->get<double>();
        lexicon.markers.push_back(std::move(marker));
    }

    check_lexicon_invariants(lexicon);
    return lexicon;
}

MarkerLexicon load_lexicon(const std::filesystem::path& path) {
    return parse_lexicon(read_text_file(path), path.string());
}

std::string serialize_lexicon(const MarkerLexicon& lexicon) {
    json doc;
    doc["version"] = lexicon.version;
    doc["characteristics"] = json::array();
    for (const auto& c : lexicon.characteristics) {
        doc["characteristics"].push_back({{"id", c.id}, {"values", c.values}});
    }
    std::vector<const Marker*> sorted;
    for (const auto& m : lexicon.markers) sorted.push_back(&m);
    std::sort(sorted.begin(), sorted.end(), [](const Marker* a, const Marker* b) { return a->marker_id < b->marker_id; });
    doc["markers"] = json::array();
    for (const auto* m : sorted) {
        doc["markers"].push_back({{"marker_id", m->marker_id},
                                  {"class", to_string(m->marker_class)},
                                  {"pattern_kind", to_string(m->pattern_kind)},
                                  {"pattern", m->pattern},
                                  {"characteristic", m->characteristic},
                                  {"value", m->value},
                                  {"weight", m->weight}});
    }
    return doc.dump(2, ' ', false, json::error_handler_t::strict) + "\n";
}

std::vector<Issue> validate_lexicon(const MarkerLexicon& lexicon) {
    std::vector<Issue> issues;

    for (const auto& c : lexicon.characteristics) {
        std::set<std::string> covered;
        for (const auto& m : lexicon.markers) {
            if (m.characteristic == c.id) covered.insert(m.value);
        }
        if (covered.empty()) {
            issues.push_back({Severity::warning, std::nullopt, "characteristic " + c.id + " has no markers"});
            continue;
        }
        for (const auto& v : c.values) {
            if (!covered.count(v)) {
                issues.push_back({Severity::warning, std::nullopt,
                                  "coverage gap: characteristic " + c.id + " has no markers for value " + v});
            }
        }
    }

    // (characteristic, kind, normalized pattern) -> value -> marker ids
    std::map<std::tuple<std::string, PatternKind, std::string>, std::map<std::string, std::set<std::string>>> groups;
    for (const auto& m : lexicon.markers) {
        groups[{m.characteristic, m.pattern_kind, normalized_pattern(m)}][m.value].insert(m.marker_id);
    }
    for (const auto& [key, by_value] : groups) {
        if (by_value.size() < 2) continue;
        std::set<std::string> ids;
        std::string values;
        for (const auto& [value, marker_ids] : by_value) {
            ids.insert(marker_ids.begin(), marker_ids.end());
            values += (values.empty() ? "" : ", ") + value;
        }
        std::string id_list;
        for (const auto& id : ids) id_list += (id_list.empty() ? "" : ", ") + id;
        issues.push_back({Severity::warning, *ids.begin(),
                          "conflicting values for " + to_string(std::get<1>(key)) + " pattern \"" +
                              std::get<2>(key) + "\" of " + std::get<0>(key) + " (" + values + "): " + id_list});
    }

    if (!lexicon.markers.empty()) {
        std::vector<double> weights;
        for (const auto& m : lexicon.markers) weights.push_back(m.weight);
        std::sort(weights.begin(), weights.end());
        const std::size_t n = weights.size();
        const double median = n % 2 == 1 ? weights[n / 2] : (weights[n / 2 - 1] + weights[n / 2]) / 2.0;
        for (const auto& m : lexicon.markers) {
            if (m.weight > 100.0 * median) {
                issues.push_back({Severity::warning, m.marker_id,
                                  "weight outlier: " + json(m.weight).dump() + " exceeds 100x median " +
                                      json(median).dump()});
            }
        }
    }

    std::sort(issues.begin(), issues.end());
    return issues;
}

}  // namespace sdverify
