#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "sdverify/canonical_json.hpp"
#include "sdverify/verifier.hpp"

namespace sdverify {

struct VerificationRequest {
    std::string community_id;
    std::vector<std::string> member_ids;                // empty: every member
    std::vector<std::string> selected_characteristics;  // empty: every characteristic
    json config_overrides;                              // null or a partial VerifierConfig object

    bool operator==(const VerificationRequest&) const = default;
};

enum class RunStatus { queued, running, done, failed };

struct RunRecord {
    std::string run_id;
    VerificationRequest request;
    std::vector<std::string> members;  // resolved at submission, sorted
    VerifierConfig config;             // effective config, resolved at submission
    RunStatus status = RunStatus::queued;
    std::string created_at;            // RFC 3339 UTC
    std::vector<MemberReport> reports; // only when done
    std::optional<std::string> error;  // only when failed

    bool operator==(const RunRecord&) const = default;
};

std::string to_string(RunStatus s);
std::optional<RunStatus> parse_run_status(std::string_view s);

json to_json(const VerificationRequest& request);
/// Throws ValidationError on shape problems.
VerificationRequest verification_request_from_json(const json& doc);
json to_json(const RunRecord& record);
/// Throws FormatError; rejects done records whose reports do not cover `members`.
RunRecord run_record_from_json(const json& doc);

/// Transition rule: queued -> running -> (done | failed), plus queued -> failed.
bool is_valid_transition(RunStatus from, RunStatus to) noexcept;

/// One canonical JSON document per run, `<dir>/<run_id>.json`, replaced
/// atomically (write temp file, fsync, rename, fsync directory). Writes are
/// serialized; reads return immutable snapshots.
class RunStore {
public:
    struct Recovery {
        std::size_t loaded = 0;
        std::size_t removed_temp_files = 0;
        std::size_t unreadable = 0;   // skipped documents
        std::size_t interrupted = 0;  // running at last shutdown, now failed
    };

    /// Opens (creating if needed) and recovers the store: stray temp files are
    /// deleted, unreadable documents are skipped, runs left in `running` are
    /// marked failed.
    explicit RunStore(std::filesystem::path dir);

    /// Persists a new run or a status transition. Throws ValidationError on an
    /// illegal transition or an attempt to modify a done run; IoError on write failure.
    void put(const RunRecord& record);

    [[nodiscard]] std::shared_ptr<const RunRecord> get(const std::string& run_id) const;
    [[nodiscard]] std::vector<std::shared_ptr<const RunRecord>> list() const;
    [[nodiscard]] bool contains(const std::string& run_id) const;
    [[nodiscard]] const Recovery& recovery() const noexcept { return recovery_; }
    [[nodiscard]] const std::filesystem::path& dir() const noexcept { return dir_; }

    /// Path of a run's document.
    [[nodiscard]] std::filesystem::path path_of(const std::string& run_id) const;

private:
    void write_atomically(const std::string& run_id, const std::string& content);

    std::filesystem::path dir_;
    mutable std::mutex mu_;
    std::mutex write_mu_;
    std::map<std::string, std::shared_ptr<const RunRecord>> records_;
    Recovery recovery_;
};

/// Atomic whole-file replacement. Throws IoError.
void write_file_atomically(const std::filesystem::path& path, const std::string& content);

}  // namespace sdverify
