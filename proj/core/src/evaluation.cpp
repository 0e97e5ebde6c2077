#include "sdverify/evaluation.hpp"

#include <algorithm>
#include <cstdio>

#include "sdverify/errors.hpp"
#include "sdverify/report_json.hpp"


namespace sdverify {
namespace {

std::size_t display_width(std::string_view s) {
    std::size_t n = 0;
    for (unsigned char c : s) {
        if ((c & 0xC0) != 0x80) ++n;
    }
    return n;
}

std::string pad_left(std::string_view s, std::size_t width) {
    const auto w = display_width(s);
    return std::string(width > w ? width - w : 0, ' ') + std::string(s);
}

std::string pad_right(std::string_view s, std::size_t width) {
    const auto w = display_width(s);
    return std::string(s) + std::string(width > w ? width - w : 0, ' ');
}

std::string one_decimal(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", v);
    return buf;
}

}  // namespace

double percent_one_decimal(std::size_t k, std::size_t n) {
    if (n == 0) return 0.0;
    // round(1000 k / n) half-up == floor((2000 k + n) / (2 n))
    const auto tenths = (2000ULL * k + n) / (2ULL * n);
    return static_cast<double>(tenths) / 10.0;
}

EvaluationReport evaluate(std::span<const MemberReport> reports, const GroundTruth& truth, std::string label) {
    EvaluationReport out;
    out.label = std::move(label);
    out.checked_members = reports.size();
    for (const auto& r : reports) {
        auto member = truth.values.find(r.member_id);
        if (member == truth.values.end()) throw MissingTruth(r.member_id);
        bool wrong = false;
        bool right = false;
        for (const auto& v : r.verdicts) {
            if (!v.definitive()) continue;
            auto t = member->second.find(v.characteristic);
            if (t == member->second.end()) continue;
            const std::string& actual = t->second;
            bool correct = false;
            switch (v.verdict) {
                case Verdict::confirmed: correct = v.declared && *v.declared == actual; break;
                case Verdict::refuted: correct = v.declared && *v.declared != actual; break;
                case Verdict::inferred: correct = v.inferred && *v.inferred == actual; break;
                case Verdict::unverifiable: break;
            }
            (correct ? right : wrong) = true;
        }
        if (wrong) ++out.false_trigger_members;
        if (right) ++out.effective_members;
    }
    out.false_rate_percent = percent_one_decimal(out.false_trigger_members, out.checked_members);
    out.effectiveness_percent = percent_one_decimal(out.effective_members, out.checked_members);
    return out;
}

std::string csv_field(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

ResultsTable format_results_table(std::span<const EvaluationReport> rows) {
    if (rows.empty()) throw ValidationError("results table needs at least one row");
    const std::vector<std::string> header = {"Community", "Checked members", "False triggers, %", "Effectiveness, %"};
    std::vector<std::vector<std::string>> cells;
    for (const auto& r : rows) {
        cells.push_back({r.label, std::to_string(r.checked_members), one_decimal(r.false_rate_percent),
                         one_decimal(r.effectiveness_percent)});
    }
    std::vector<std::size_t> width(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) {
        width[c] = display_width(header[c]);
        for (const auto& row : cells) width[c] = std::max(width[c], display_width(row[c]));
    }

    ResultsTable out;
    auto line = [&](const std::vector<std::string>& row) {
        std::string s;
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0) s += " | ";
            s += c == 0 ? pad_right(row[c], width[c]) : pad_left(row[c], width[c]);
        }
        while (!s.empty() && s.back() == ' ') s.pop_back();
        return s + "\n";
    };
    out.text += line(header);
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c > 0) out.text += "-+-";
        out.text += std::string(width[c], '-');
    }
    out.text += "\n";
    for (const auto& row : cells) out.text += line(row);

    out.csv = "community,checked_members,false_rate_percent,effectiveness_percent\r\n";
    for (const auto& row : cells) {
        out.csv += csv_field(row[0]) + "," + row[1] + "," + row[2] + "," + row[3] + "\r\n";
    }
    return out;
}

json results_to_json(std::span<const EvaluationReport> rows, const VerifierConfig& config) {
    json arr = json::array();
    for (const auto& r : rows) {
        arr.push_back({{"label", r.label},
                       {"checked_members", r.checked_members},
                       {"false_trigger_members", r.false_trigger_members},
                       {"effective_members", r.effective_members},
                       {"false_rate_percent", r.false_rate_percent},
                       {"effectiveness_percent", r.effectiveness_percent}});
    }
    return {{"rows", arr},
            {"config", to_json(config)},
            {"definitions",
             {{"false_rate_percent",
               "share of checked members with at least one definitive verdict contradicting ground truth"},
              {"effectiveness_percent",
               "share of checked members with at least one definitive verdict agreeing with ground truth"},
              {"rounding", "100 x count / checked, rounded half-up to one decimal"}}}};
}

std::vector<EvaluationReport> run_benchmark(std::span<const SyntheticSpec> specs, const MarkerLexicon& lexicon,
                                            const VerifierConfig& config, unsigned workers) {
    config.validate();
    const auto matcher = compile_lexicon(lexicon);
    std::vector<EvaluationReport> rows;
    for (const auto& spec : specs) {
        const auto community = generate_synthetic(spec, lexicon, config.reference_year);
        VerifierConfig run_config = config;
        if (run_config.selected_characteristics.empty()) run_config.selected_characteristics = spec.characteristics;
        std::vector<MemberReport> reports;
        if (community.corpus.has_community(spec.community_id)) {
            reports = verify_members(community.corpus, matcher, lexicon, spec.community_id, {}, run_config, workers);
        }
        rows.push_back(evaluate(reports, community.truth, spec.label));
    }
    return rows;
}

BenchmarkPlan load_benchmark_plan(const std::filesystem::path& path, VerifierConfig base) {
    json doc;
    try {
        doc = json::parse(read_text_file(path));
    } catch (const json::parse_error& e) {
        throw FormatError(path.string(), 0, std::string("invalid JSON: ") + e.what());
    }
    BenchmarkPlan plan;
    const json* specs = &doc;
    if (doc.is_object()) {
        if (auto it = doc.find("config"); it != doc.end()) base = apply_config_overrides(base, *it);
        auto it = doc.find("specs");
        if (it == doc.end()) throw FormatError(path.string(), 0, "missing \"specs\"");
        specs = &*it;
    }
    if (!specs->is_array()) throw FormatError(path.string(), 0, "specs must be an array");
    base.validate();
    plan.config = base;
    for (const auto& s : *specs) plan.specs.push_back(synthetic_spec_from_json(s));
    return plan;
}

}  // namespace sdverify
