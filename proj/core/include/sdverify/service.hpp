#pragma once

#include <condition_variable>
#include <deque>
#include <filesystem>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "sdverify/corpus.hpp"
#include "sdverify/lexicon.hpp"
#include "sdverify/matcher.hpp"
#include "sdverify/run_store.hpp"
#include "sdverify/verifier.hpp"

namespace sdverify {

enum class ExportFormat { json, csv, table };
std::optional<ExportFormat> parse_export_format(std::string_view s);

struct CommunitySummary {
    std::string community_id;
    std::size_t member_count = 0;

    bool operator==(const CommunitySummary&) const = default;
};

struct ServiceOptions {
    unsigned run_workers = 1;     // runs executed concurrently
    unsigned verify_threads = 0;  // threads per run (0: hardware concurrency)
    bool start_workers = true;    // false: runs stay queued (tests)
};

/// Verification runs over one loaded corpus and lexicon. Runs are persisted in
/// a RunStore before submit_run returns and executed asynchronously by a
/// worker pool; queued runs found in the store at startup are resumed.
class VerificationService {
public:
    VerificationService(Corpus corpus, MarkerLexicon lexicon, VerifierConfig defaults,
                        const std::filesystem::path& runs_dir, ServiceOptions options = {});
    ~VerificationService();

    VerificationService(const VerificationService&) = delete;
    VerificationService& operator=(const VerificationService&) = delete;

    /// Throws UnknownCommunity, UnknownCharacteristic, ValidationError.
    std::string submit_run(const VerificationRequest& request);
    /// Throws UnknownRun.
    [[nodiscard]] RunRecord get_run(const std::string& run_id) const;
    [[nodiscard]] std::vector<CommunitySummary> list_communities() const;
    /// Throws UnknownCommunity.
    [[nodiscard]] std::vector<MemberSummary> list_members(const std::string& community_id) const;
    /// Throws UnknownRun, RunNotDone.
    [[nodiscard]] std::string export_run(const std::string& run_id, ExportFormat format) const;

    [[nodiscard]] const VerifierConfig& default_config() const noexcept { return defaults_; }
    [[nodiscard]] const MarkerLexicon& lexicon() const noexcept { return lexicon_; }
    [[nodiscard]] const RunStore& store() const noexcept { return store_; }

    /// Blocks until the queue is empty and no run is executing.
    void wait_idle();

private:
    void worker_loop(std::stop_token stop);
    void execute(const std::string& run_id);

    Corpus corpus_;
    MarkerLexicon lexicon_;
    CompiledMatcher matcher_;
    VerifierConfig defaults_;
    ServiceOptions options_;
    RunStore store_;

    std::mutex queue_mu_;
    std::condition_variable_any queue_cv_;
    std::condition_variable idle_cv_;
    std::deque<std::string> queue_;
    std::size_t active_ = 0;
    std::vector<std::jthread> workers_;
};

/// Rendering of a finished run. json: the canonical RunRecord document;
/// csv: one row per (member, characteristic); table: one table per member.
std::string render_run(const RunRecord& record, ExportFormat format);

/// `<UTC time>-<random hex>`, e.g. 20261016T101500Z-3f9a0c1d.
std::string make_run_id();

}  // namespace sdverify
