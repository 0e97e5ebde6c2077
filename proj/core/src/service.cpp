#include "sdverify/service.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <random>
#include <set>

#include "sdverify/errors.hpp"
#include "sdverify/evaluation.hpp"
#include "sdverify/report_json.hpp"

namespace sdverify {
namespace {

std::string utc_now(const char* fmt) {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[64];
    std::strftime(buf, sizeof buf, fmt, &tm);
    return buf;
}

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::size_t width_of(std::string_view s) {
    std::size_t n = 0;
    for (unsigned char c : s) {
        if ((c & 0xC0) != 0x80) ++n;
    }
    return n;
}

std::string render_table(const RunRecord& record) {
    std::string out;
    for (const auto& report : record.reports) {
        out += "Member: " + report.member_id + " (community " + report.community_id + ")\n";
        out += "Classification: " + to_string(report.classification) + "\n";
        out += "Posts analysed: " + std::to_string(report.track_size) + "\n\n";

        const std::vector<std::string> header = {"Characteristic", "Declared", "Inferred", "Reliability", "Verdict"};
        std::vector<std::vector<std::string>> rows;
        for (const auto& v : report.verdicts) {
            rows.push_back({v.characteristic, v.declared.value_or("-"), v.inferred.value_or("-"),
                            fixed6(v.reliability), to_string(v.verdict)});
        }
        std::vector<std::size_t> width(header.size());
        for (std::size_t c = 0; c < header.size(); ++c) {
            width[c] = width_of(header[c]);
            for (const auto& r : rows) width[c] = std::max(width[c], width_of(r[c]));
        }
        auto line = [&](const std::vector<std::string>& cells) {
            std::string s;
            for (std::size_t c = 0; c < cells.size(); ++c) {
                if (c > 0) s += " | ";
                const auto pad = std::string(width[c] - width_of(cells[c]), ' ');
                s += c == 3 ? pad + cells[c] : cells[c] + pad;
            }
            while (!s.empty() && s.back() == ' ') s.pop_back();
            return s + "\n";
        };
        out += line(header);
        for (std::size_t c = 0; c < header.size(); ++c) {
            if (c > 0) out += "-+-";
            out += std::string(width[c], '-');
        }
        out += "\n";
        for (const auto& r : rows) out += line(r);

        out += "\nVerified profile:";
        if (report.profile.entries.empty()) {
            out += " (empty)\n";
        } else {
            out += "\n";
            for (const auto& [c, e] : report.profile.entries) {
                out += "  " + c + " = " + e.value + " (reliability " + fixed6(e.reliability) + ")\n";
            }
        }
        out += "\n";
    }
    return out;
}

std::string render_csv(const RunRecord& record) {
    std::string out =
        "member_id,community_id,classification,characteristic,declared,inferred,reliability,verdict,evidence_mass\r\n";
    for (const auto& report : record.reports) {
        for (const auto& v : report.verdicts) {
            out += csv_field(report.member_id) + "," + csv_field(report.community_id) + "," +
                   to_string(report.classification) + "," + csv_field(v.characteristic) + "," +
                   csv_field(v.declared.value_or("")) + "," + csv_field(v.inferred.value_or("")) + "," +
                   fixed6(v.reliability) + "," + to_string(v.verdict) + "," + fixed6(v.evidence_mass) + "\r\n";
        }
    }
    return out;
}

}  // namespace

std::optional<ExportFormat> parse_export_format(std::string_view s) {
    if (s == "json") return ExportFormat::json;
    if (s == "csv") return ExportFormat::csv;
    if (s == "table") return ExportFormat::table;
    return std::nullopt;
}

std::string make_run_id() {
    thread_local std::mt19937_64 rng{std::random_device{}()};
    char suffix[17];
    std::snprintf(suffix, sizeof suffix, "%08llx", static_cast<unsigned long long>(rng() & 0xffffffffULL));
    return utc_now("%Y%m%dT%H%M%SZ") + "-" + suffix;
}

std::string render_run(const RunRecord& record, ExportFormat format) {
    switch (format) {
        case ExportFormat::json: return canonical_dump(to_json(record));
        case ExportFormat::csv: return render_csv(record);
        case ExportFormat::table: return render_table(record);
    }
    return {};
}

VerificationService::VerificationService(Corpus corpus, MarkerLexicon lexicon, VerifierConfig defaults,
                                         const std::filesystem::path& runs_dir, ServiceOptions options)
    : corpus_(std::move(corpus)),
      lexicon_(std::move(lexicon)),
      matcher_(compile_lexicon(lexicon_)),
      defaults_(std::move(defaults)),
      options_(options),
      store_(runs_dir) {
    defaults_.validate();
    for (const auto& rec : store_.list()) {
        if (rec->status == RunStatus::queued) queue_.push_back(rec->run_id);
    }
    if (options_.start_workers) {
        for (unsigned i = 0; i < std::max(1u, options_.run_workers); ++i) {
            workers_.emplace_back([this](std::stop_token st) { worker_loop(st); });
        }
    }
}

VerificationService::~VerificationService() {
    for (auto& w : workers_) w.request_stop();
    queue_cv_.notify_all();
    workers_.clear();
}

std::string VerificationService::submit_run(const VerificationRequest& request) {
    if (!corpus_.has_community(request.community_id)) throw UnknownCommunity(request.community_id);

    VerifierConfig config = apply_config_overrides(defaults_, request.config_overrides);
    if (!request.selected_characteristics.empty()) config.selected_characteristics = request.selected_characteristics;
    config.selected_characteristics = resolve_characteristics(lexicon_, config);

    std::vector<std::string> members;
    if (request.member_ids.empty()) {
        for (const auto& m : corpus_.members_of(request.community_id)) members.push_back(m.member_id);
    } else {
        std::set<std::string> unique(request.member_ids.begin(), request.member_ids.end());
        for (const auto& id : unique) {
            if (!corpus_.has_member(request.community_id, id)) {
                throw ValidationError("unknown member " + id + " in community " + request.community_id);
            }
        }
        members.assign(unique.begin(), unique.end());
    }

    RunRecord record;
    record.request = request;
    record.members = std::move(members);
    record.config = std::move(config);
    record.status = RunStatus::queued;
    record.created_at = utc_now("%Y-%m-%dT%H:%M:%SZ");
    do {
        record.run_id = make_run_id();
    } while (store_.contains(record.run_id));
    store_.put(record);

    {
        std::lock_guard lock(queue_mu_);
        queue_.push_back(record.run_id);
    }
    queue_cv_.notify_one();
    return record.run_id;
}

RunRecord VerificationService::get_run(const std::string& run_id) const {
    auto rec = store_.get(run_id);
    if (!rec) throw UnknownRun(run_id);
    return *rec;
}

std::vector<CommunitySummary> VerificationService::list_communities() const {
    std::vector<CommunitySummary> out;
    for (const auto& c : corpus_.communities()) out.push_back({c, corpus_.members_of(c).size()});
    return out;
}

std::vector<MemberSummary> VerificationService::list_members(const std::string& community_id) const {
    return sdverify::list_members(corpus_, community_id);
}

std::string VerificationService::export_run(const std::string& run_id, ExportFormat format) const {
    auto rec = store_.get(run_id);
    if (!rec) throw UnknownRun(run_id);
    if (rec->status != RunStatus::done) throw RunNotDone(run_id);
    return render_run(*rec, format);
}

void VerificationService::wait_idle() {
    std::unique_lock lock(queue_mu_);
    idle_cv_.wait(lock, [&] { return queue_.empty() && active_ == 0; });
}

void VerificationService::worker_loop(std::stop_token stop) {
    for (;;) {
        std::string run_id;
        {
            std::unique_lock lock(queue_mu_);
            if (!queue_cv_.wait(lock, stop, [&] { return !queue_.empty(); })) return;
            run_id = std::move(queue_.front());
            queue_.pop_front();
            ++active_;
        }
        execute(run_id);
        {
            std::lock_guard lock(queue_mu_);
            --active_;
        }
        idle_cv_.notify_all();
    }
}

void VerificationService::execute(const std::string& run_id) {
    auto current = store_.get(run_id);
    if (!current || current->status != RunStatus::queued) return;
    RunRecord record = *current;
    try {
        record.status = RunStatus::running;
        store_.put(record);
        auto reports = verify_members(corpus_, matcher_, lexicon_, record.request.community_id, record.members,
                                      record.config, options_.verify_threads);
        record.reports = std::move(reports);
        record.status = RunStatus::done;
        store_.put(record);
    } catch (const std::exception& e) {
        RunRecord failed = *store_.get(run_id);
        if (failed.status == RunStatus::done) return;
        failed.status = RunStatus::failed;
        failed.reports.clear();
        failed.error = e.what();
        try {
            store_.put(failed);
        } catch (const std::exception&) {
            // store unavailable; the run stays in its last persisted state
        }
    }
}

}  // namespace sdverify
