#pragma once

#include <compare>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sdverify {

/// A socio-demographic characteristic and its ordered value domain. Domain
/// order breaks argmax ties.
struct Characteristic {
    std::string id;
    std::vector<std::string> values;

    /// Position of `value` in the domain, or nullopt.
    [[nodiscard]] std::optional<std::size_t> index_of(std::string_view value) const;
    bool operator==(const Characteristic&) const = default;
};

enum class MarkerClass { lexico_semantic, lexico_syntactic, grammatical };
enum class PatternKind { token, phrase, regex };

/// One dictionary entry.
///
/// token  - a single normalized token, matched by exact equality
/// phrase - a space-separated token sequence, matched at every start position
/// regex  - an ICU regular expression run over one post's space-joined token
///          stream; each non-empty, non-overlapping match counts once
struct Marker {
    std::string marker_id;
    MarkerClass marker_class = MarkerClass::lexico_semantic;
    PatternKind pattern_kind = PatternKind::token;
    std::string pattern;
    std::string characteristic;
    std::string value;
    double weight = 1.0;

    bool operator==(const Marker&) const = default;
};

struct MarkerLexicon {
    std::string version;
    std::vector<Characteristic> characteristics;
    std::vector<Marker> markers;

    [[nodiscard]] const Characteristic* find_characteristic(std::string_view id) const;
    [[nodiscard]] const Marker* find_marker(std::string_view id) const;
    bool operator==(const MarkerLexicon&) const = default;
};

/// Parses lexicon JSON and enforces every Marker/MarkerLexicon invariant.
/// Throws FormatError for shape problems, InvariantViolation for rule breaks.
MarkerLexicon parse_lexicon(std::string_view text, const std::string& source = "<lexicon>");
/// Throws IoError, FormatError, InvariantViolation.
MarkerLexicon load_lexicon(const std::filesystem::path& path);

/// Throws InvariantViolation on the first broken invariant.
void check_lexicon_invariants(const MarkerLexicon& lexicon);

/// Canonical form: sorted keys, two-space indent, markers sorted by marker_id,
/// characteristics in domain-declaration order. load_lexicon(serialize(x)) == x.
std::string serialize_lexicon(const MarkerLexicon& lexicon);

enum class Severity { warning, error };

struct Issue {
    Severity severity = Severity::warning;
    std::optional<std::string> marker_id;
    std::string message;

    auto operator<=>(const Issue&) const = default;
};

/// Quality checks on an otherwise loadable lexicon: value coverage gaps,
/// identical patterns pointing at different values of one characteristic, and
/// weights above 100x the median. Sorted; empty iff clean.
std::vector<Issue> validate_lexicon(const MarkerLexicon& lexicon);

std::string to_string(MarkerClass c);
std::string to_string(PatternKind k);
std::string to_string(Severity s);

}  // namespace sdverify
