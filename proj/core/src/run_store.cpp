#include "sdverify/run_store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <iostream>

#include "sdverify/errors.hpp"
#include "sdverify/report_json.hpp"

namespace sdverify {
namespace {

constexpr std::string_view kTempSuffix = ".tmp";

bool safe_run_id(std::string_view id) {
    return !id.empty() && id.size() <= 128 && std::all_of(id.begin(), id.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' || c == '_';
    });
}

std::vector<std::string> string_list(const json& doc, const char* key) {
    auto it = doc.find(key);
    if (it == doc.end() || it->is_null()) return {};
    if (!it->is_array()) throw ValidationError(std::string(key) + " must be an array of strings");
    std::vector<std::string> out;
    for (const auto& v : *it) {
        if (!v.is_string()) throw ValidationError(std::string(key) + " must be an array of strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

void fsync_path(const std::filesystem::path& p, int flags) {
    int fd = ::open(p.c_str(), flags);
    if (fd < 0) return;
    ::fsync(fd);
    ::close(fd);
}

}  // namespace

std::string to_string(RunStatus s) {
    switch (s) {
        case RunStatus::queued: return "queued";
        case RunStatus::running: return "running";
        case RunStatus::done: return "done";
        case RunStatus::failed: return "failed";
    }
    return "?";
}

std::optional<RunStatus> parse_run_status(std::string_view s) {
    for (auto st : {RunStatus::queued, RunStatus::running, RunStatus::done, RunStatus::failed}) {
        if (to_string(st) == s) return st;
    }
    return std::nullopt;
}

bool is_valid_transition(RunStatus from, RunStatus to) noexcept {
    switch (from) {
        case RunStatus::queued: return to == RunStatus::running || to == RunStatus::failed;
        case RunStatus::running: return to == RunStatus::done || to == RunStatus::failed;
        case RunStatus::done:
        case RunStatus::failed: return false;
    }
    return false;
}

json to_json(const VerificationRequest& r) {
    return {{"community_id", r.community_id},
            {"member_ids", r.member_ids},
            {"selected_characteristics", r.selected_characteristics},
            {"config", r.config_overrides}};
}

VerificationRequest verification_request_from_json(const json& doc) {
    if (!doc.is_object()) throw ValidationError("request body must be a JSON object");
    VerificationRequest r;
    auto c = doc.find("community_id");
    if (c == doc.end() || !c->is_string() || c->get<std::string>().empty()) {
        throw ValidationError("community_id must be a non-empty string");
    }
    r.community_id = c->get<std::string>();
    r.member_ids = string_list(doc, "member_ids");
    r.selected_characteristics = string_list(doc, "selected_characteristics");
    if (auto it = doc.find("config"); it != doc.end() && !it->is_null()) {
        if (!it->is_object()) throw ValidationError("config must be an object");
        r.config_overrides = *it;
    }
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        const auto& k = it.key();
        if (k != "community_id" && k != "member_ids" && k != "selected_characteristics" && k != "config") {
            throw ValidationError("unknown request field: " + k);
        }
    }
    return r;
}

json to_json(const RunRecord& r) {
    json reports = json::array();
    for (const auto& rep : r.reports) reports.push_back(to_json(rep));
    return {{"run_id", r.run_id},
            {"request", to_json(r.request)},
            {"members", r.members},
            {"config", to_json(r.config)},
            {"status", to_string(r.status)},
            {"created_at", r.created_at},
            {"reports", reports},
            {"error", r.error ? json(*r.error) : json(nullptr)}};
}

RunRecord run_record_from_json(const json& doc) {
    try {
        if (!doc.is_object()) throw FormatError("run", 0, "run record must be an object");
        RunRecord r;
        r.run_id = doc.at("run_id").get<std::string>();
        r.request = verification_request_from_json(doc.at("request"));
        r.members = doc.at("members").get<std::vector<std::string>>();
        r.config = apply_config_overrides(VerifierConfig{}, doc.at("config"));
        auto status = parse_run_status(doc.at("status").get<std::string>());
        if (!status) throw FormatError("run", 0, "unknown status");
        r.status = *status;
        r.created_at = doc.at("created_at").get<std::string>();
        for (const auto& rep : doc.at("reports")) r.reports.push_back(member_report_from_json(rep));
        if (const auto& e = doc.at("error"); !e.is_null()) r.error = e.get<std::string>();

        if (r.status == RunStatus::done) {
            if (r.reports.size() != r.members.size()) throw FormatError("run", 0, "done run with missing reports");
            for (std::size_t i = 0; i < r.members.size(); ++i) {
                if (r.reports[i].member_id != r.members[i]) {
                    throw FormatError("run", 0, "done run reports do not match members");
                }
            }
        } else if (!r.reports.empty()) {
            throw FormatError("run", 0, "reports present on a run that is not done");
        }
        return r;
    } catch (const json::exception& e) {
        throw FormatError("run", 0, std::string("malformed run record: ") + e.what());
    } catch (const ValidationError& e) {
        throw FormatError("run", 0, std::string("malformed run record: ") + e.what());
    }
}

void write_file_atomically(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += kTempSuffix;
    int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
    if (fd < 0) throw IoError("cannot create " + tmp.string() + ": " + std::strerror(errno));
    const char* data = content.data();
    std::size_t left = content.size();
    while (left > 0) {
        ssize_t n = ::write(fd, data, left);
        if (n < 0) {
            if (errno == EINTR) continue;
            const int err = errno;
            ::close(fd);
            ::unlink(tmp.c_str());
            throw IoError("write failed on " + tmp.string() + ": " + std::strerror(err));
        }
        data += n;
        left -= static_cast<std::size_t>(n);
    }
    if (::fsync(fd) != 0 || ::close(fd) != 0) {
        ::unlink(tmp.c_str());
        throw IoError("cannot flush " + tmp.string());
    }
    if (::rename(tmp.c_str(), path.c_str()) != 0) {
        const int err = errno;
        ::unlink(tmp.c_str());
        throw IoError("cannot rename " + tmp.string() + ": " + std::strerror(err));
    }
    fsync_path(path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path(), O_RDONLY | O_DIRECTORY);
}

RunStore::RunStore(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create run store " + dir_.string() + ": " + ec.message());

    std::vector<std::filesystem::path> docs;
    for (const auto& entry : std::filesystem::directory_iterator(dir_, ec)) {
        if (!entry.is_regular_file()) continue;
        const auto name = entry.path().filename().string();
        if (name.ends_with(kTempSuffix)) {
            std::filesystem::remove(entry.path(), ec);
            ++recovery_.removed_temp_files;
        } else if (name.ends_with(".json")) {
            docs.push_back(entry.path());
        }
    }
    if (ec) throw IoError("cannot scan run store " + dir_.string() + ": " + ec.message());
    std::sort(docs.begin(), docs.end());

    for (const auto& path : docs) {
        RunRecord record;
        try {
            record = run_record_from_json(json::parse(read_text_file(path)));
        } catch (const std::exception& e) {
            std::cerr << "run store: skipping " << path.string() << ": " << e.what() << "\n";
            ++recovery_.unreadable;
            continue;
        }
        if (record.run_id + ".json" != path.filename().string()) {
            ++recovery_.unreadable;
            continue;
        }
        if (record.status == RunStatus::running) {
            record.status = RunStatus::failed;
            record.error = "interrupted: process stopped while the run was executing";
            write_atomically(record.run_id, canonical_dump(to_json(record)));
            ++recovery_.interrupted;
        }
        auto id = record.run_id;
        records_.emplace(std::move(id), std::make_shared<const RunRecord>(std::move(record)));
        ++recovery_.loaded;
    }
}

std::filesystem::path RunStore::path_of(const std::string& run_id) const {
    if (!safe_run_id(run_id)) throw ValidationError("invalid run id: " + run_id);
    return dir_ / (run_id + ".json");
}

void RunStore::write_atomically(const std::string& run_id, const std::string& content) {
    write_file_atomically(path_of(run_id), content);
}

void RunStore::put(const RunRecord& record) {
    std::lock_guard write_lock(write_mu_);
    if (!safe_run_id(record.run_id)) throw ValidationError("invalid run id: " + record.run_id);
    if (auto previous = get(record.run_id)) {
        if (!is_valid_transition(previous->status, record.status)) {
            throw ValidationError("illegal run transition " + to_string(previous->status) + " -> " +
                                  to_string(record.status) + " for " + record.run_id);
        }
    } else if (record.status != RunStatus::queued) {
        throw ValidationError("new runs must start queued: " + record.run_id);
    }
    if (record.status == RunStatus::done && record.reports.size() != record.members.size()) {
        throw ValidationError("done run must carry one report per member: " + record.run_id);
    }
    write_atomically(record.run_id, canonical_dump(to_json(record)));
    auto snapshot = std::make_shared<const RunRecord>(record);
    std::lock_guard lock(mu_);
    records_[record.run_id] = std::move(snapshot);
}

std::shared_ptr<const RunRecord> RunStore::get(const std::string& run_id) const {
    std::lock_guard lock(mu_);
    auto it = records_.find(run_id);
    return it == records_.end() ? nullptr : it->second;
}

bool RunStore::contains(const std::string& run_id) const { return get(run_id) != nullptr; }

std::vector<std::shared_ptr<const RunRecord>> RunStore::list() const {
    std::lock_guard lock(mu_);
    std::vector<std::shared_ptr<const RunRecord>> out;
    out.reserve(records_.size());
    for (const auto& [id, rec] : records_) out.push_back(rec);
    return out;
}

}  // namespace sdverify
