#pragma once

#include <span>
#include <string>
#include <vector>

#include "sdverify/canonical_json.hpp"
#include "sdverify/lexicon.hpp"
#include "sdverify/synthetic.hpp"
#include "sdverify/verifier.hpp"

namespace sdverify {

/// One results-table row.
///
/// A member is a false trigger when at least one of its definitive verdicts
/// contradicts ground truth: Confirmed on a false declaration, Refuted on a
/// true one, or Inferred with a wrong value. A member counts as effective when
/// at least one definitive verdict agrees with ground truth. Percentages are
/// 100 x count / checked_members rounded half-up to one decimal.
struct EvaluationReport {
    std::string label;
    std::size_t checked_members = 0;
    std::size_t false_trigger_members = 0;
    std::size_t effective_members = 0;
    double false_rate_percent = 0.0;
    double effectiveness_percent = 0.0;

    bool operator==(const EvaluationReport&) const = default;
};

/// 100 x k / n rounded half-up to one decimal, computed in integers. 0 when n == 0.
double percent_one_decimal(std::size_t k, std::size_t n);

/// Throws MissingTruth for a report whose member has no ground truth.
EvaluationReport evaluate(std::span<const MemberReport> reports, const GroundTruth& truth, std::string label = {});

struct ResultsTable {
    std::string text;
    std::string csv;
};

/// Aligned text table and RFC 4180 CSV with columns: community, checked
/// members, false-trigger %, effectiveness %. Throws ValidationError on no rows.
ResultsTable format_results_table(std::span<const EvaluationReport> rows);

/// Field quoted when it holds a comma, quote, CR or LF; inner quotes doubled.
std::string csv_field(std::string_view field);

/// Rows plus the metric definitions, for results.json.
json results_to_json(std::span<const EvaluationReport> rows, const VerifierConfig& config);

/// generate -> verify every member -> evaluate, once per spec. When
/// config.selected_characteristics is empty each spec verifies its own
/// characteristics.
std::vector<EvaluationReport> run_benchmark(std::span<const SyntheticSpec> specs, const MarkerLexicon& lexicon,
                                            const VerifierConfig& config, unsigned workers = 0);

/// Benchmark definition file: {"config": {...}?, "specs": [...]} or a bare spec array.
struct BenchmarkPlan {
    VerifierConfig config;
    std::vector<SyntheticSpec> specs;
};
BenchmarkPlan load_benchmark_plan(const std::filesystem::path& path, VerifierConfig base = {});

}  // namespace sdverify
