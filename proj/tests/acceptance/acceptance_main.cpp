// Acceptance checks. Prints one PASS/FAIL line per criterion; exit status is
// the number of failed criteria (0 when all pass).

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <csignal>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "brute_force_scanner.hpp"
#include "sdverify/canonical_json.hpp"
#include "sdverify/evaluation.hpp"
#include "sdverify/report_json.hpp"
#include "sdverify/run_store.hpp"
#include "sdverify/service.hpp"
#include "test_support.hpp"

using namespace sdverify;
using namespace sdverify::testing;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int g_failed = 0;

void report(const std::string& name, const std::function<Outcome()>& check) {
    Outcome o;
    try {
        o = check();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
    if (!o.pass) ++g_failed;
}

std::string fmt1(double v) {
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(1);
    s << v;
    return s.str();
}

const MarkerLexicon& starter() {
    static const MarkerLexicon lex = load_lexicon(starter_lexicon_path());
    return lex;
}

Outcome false_trigger_bound() {
    std::vector<SyntheticSpec> specs;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        SyntheticSpec s;
        s.label = "seed-" + std::to_string(seed);
        s.community_id = s.label;
        s.n_members = 500;
        s.posts_min = 5;
        s.posts_max = 30;
        s.signal_rate = 0.5;
        s.noise_rate = 0.05;
        s.deceiver_fraction = 0.2;
        s.characteristics = {"gender", "age_group"};
        s.seed = seed;
        specs.push_back(s);
    }
    const auto t0 = std::chrono::steady_clock::now();
    const auto rows = run_benchmark(specs, starter(), VerifierConfig{});
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool ok = rows.size() == 5 && secs < 60.0;
    std::string detail;
    for (const auto& r : rows) {
        ok = ok && r.false_rate_percent <= 18.0 && r.effectiveness_percent >= 55.0;
        detail += r.label + " false=" + fmt1(r.false_rate_percent) + "% eff=" + fmt1(r.effectiveness_percent) + "%; ";
    }
    detail += "runtime " + fmt1(secs) + " s (limits: false <= 18.0, eff >= 55.0, < 60 s)";
    return {ok, detail};
}

Outcome clean_signal() {
    std::vector<SyntheticSpec> specs;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        SyntheticSpec s;
        s.label = "clean-" + std::to_string(seed);
        s.community_id = s.label;
        s.n_members = 300;
        s.posts_min = 10;
        s.posts_max = 30;
        s.signal_rate = 1.0;
        s.noise_rate = 0.0;
        s.deceiver_fraction = 0.0;
        s.seed = seed;
        specs.push_back(s);
    }
    const auto rows = run_benchmark(specs, starter(), VerifierConfig{});
    bool ok = true;
    std::string detail;
    for (const auto& r : rows) {
        ok = ok && r.false_rate_percent == 0.0 && r.effectiveness_percent == 100.0;
        detail += r.label + " false=" + fmt1(r.false_rate_percent) + "% eff=" + fmt1(r.effectiveness_percent) + "%; ";
    }
    return {ok, detail + "expected 0.0 / 100.0"};
}

Outcome oracle_equivalence() {
    std::mt19937_64 rng(20150101);
    std::size_t mismatches = 0, markers = 0, posts = 0;
    for (int i = 0; i < 100; ++i) {
        const auto inst = random_instance(rng, 50, 200);
        markers += inst.lexicon.markers.size();
        posts += inst.track.posts.size();
        const auto got = analyze_track(compile_lexicon(inst.lexicon), inst.lexicon, inst.track, kDefaultPerPostCap);
        if (!(got == brute_evidence(inst.lexicon, inst.track, kDefaultPerPostCap))) ++mismatches;
    }
    return {mismatches == 0, "100 instances (" + std::to_string(markers) + " markers, " + std::to_string(posts) +
                                 " posts), " + std::to_string(mismatches) + " mismatches"};
}

bool table_holds(const CharacteristicVerdict& v, const VerifierConfig& cfg) {
    if (!(v.reliability >= 0.0 && v.reliability <= 1.0)) return false;
    const bool strong = v.inferred && v.reliability >= cfg.theta_conf && v.evidence_mass >= cfg.theta_min;
    switch (v.verdict) {
        case Verdict::confirmed: return strong && v.declared && *v.declared == *v.inferred;
        case Verdict::refuted: return strong && v.declared && *v.declared != *v.inferred;
        case Verdict::inferred: return strong && !v.declared;
        case Verdict::unverifiable: return true;
    }
    return false;
}

Outcome verdict_invariants() {
    std::mt19937_64 rng(77);
    const double confs[] = {0.5, 0.6, 0.8};
    const double mins[] = {0.0, 3.0, 6.0};
    std::size_t table_violations = 0, monotonicity_violations = 0, definitive = 0;
    for (int i = 0; i < 10000; ++i) {
        CharacteristicEvidence e;
        e.characteristic = "c";
        const std::size_t k = 2 + rng() % 4;
        for (std::size_t j = 0; j < k; ++j) {
            e.values.push_back("v" + std::to_string(j));
            // coarse grid so exact ties occur; a third of the values get nothing
            const double s = rng() % 3 == 0 ? 0.0 : 0.25 * static_cast<double>(rng() % 48);
            e.mass.push_back(s);
            e.total += s;
        }
        const EvidenceVector ev{{e}};
        const auto pick = rng() % (k + 1);
        const std::optional<std::string> declared = pick == k ? std::nullopt : std::optional(e.values[pick]);

        bool prev_conf[3][3];
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                VerifierConfig cfg;
                cfg.theta_conf = confs[a];
                cfg.theta_min = mins[b];
                const auto v = verify_characteristic(ev, declared, "c", cfg);
                if (!table_holds(v, cfg)) ++table_violations;
                prev_conf[a][b] = v.definitive();
                definitive += v.definitive();
            }
        }
        // definitive under a stricter threshold implies definitive under a looser one
        for (int a = 1; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                if (prev_conf[a][b] && !prev_conf[a - 1][b]) ++monotonicity_violations;
            }
        }
        for (int a = 0; a < 3; ++a) {
            for (int b = 1; b < 3; ++b) {
                if (prev_conf[a][b] && !prev_conf[a][b - 1]) ++monotonicity_violations;
            }
        }
    }
    return {table_violations == 0 && monotonicity_violations == 0,
            "10000 vectors x 9 configs, " + std::to_string(definitive) + " definitive verdicts, " +
                std::to_string(table_violations) + " table violations, " + std::to_string(monotonicity_violations) +
                " monotonicity violations"};
}

Outcome argmax_invariance() {
    std::mt19937_64 rng(4242);
    double worst = 0.0;
    std::size_t changed = 0, checked = 0;
    for (int i = 0; i < 200; ++i) {
        const auto inst = random_instance(rng, 50, 200);
        const auto matcher = compile_lexicon(inst.lexicon);
        const auto base = analyze_track(matcher, inst.lexicon, inst.track, kDefaultPerPostCap);
        VerifierConfig open;
        open.theta_min = 0.0;
        for (double lambda : {0.1, 10.0}) {
            auto lex = inst.lexicon;
            for (auto& m : lex.markers) m.weight *= lambda;
            const auto scaled = analyze_track(matcher, lex, inst.track, kDefaultPerPostCap);
            for (const auto& c : lex.characteristics) {
                const auto p = normalize(base, c.id);
                const auto q = normalize(scaled, c.id);
                if (p.has_value() != q.has_value()) {
                    ++changed;
                    continue;
                }
                if (!p) continue;
                ++checked;
                for (std::size_t k = 0; k < p->size(); ++k) worst = std::max(worst, std::fabs((*p)[k] - (*q)[k]));
                if (verify_characteristic(base, std::nullopt, c.id, open).inferred !=
                    verify_characteristic(scaled, std::nullopt, c.id, open).inferred) {
                    ++changed;
                }
            }
        }
    }
    std::ostringstream d;
    d << checked << " distributions, max |dP| = " << worst << ", " << changed << " inferred-value changes";
    return {worst <= 1e-12 && changed == 0, d.str()};
}

std::string read_bytes(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome golden_files() {
    const auto golden = fixtures_dir() / "golden";
    const auto corpus = load_corpus_dir(fixtures_dir() / "corpus");
    const auto matcher = compile_lexicon(starter());
    std::vector<std::string> bad;
    std::string first;
    for (const std::string community : {"lviv-forum", "malecha"}) {
        for (unsigned workers : {1u, 4u}) {
            const auto got = canonical_reports(verify_members(corpus, matcher, starter(), community, {}, {}, workers));
            if (got != read_bytes(golden / ("reports_" + community + ".json"))) {
                bad.push_back("reports_" + community + " (workers=" + std::to_string(workers) + ")");
            }
        }
    }

    const std::vector<EvaluationReport> rows = {{"Малеча", 1631, 0, 0, 13.0, 70.0},
                                                {"Дівочі посиденьки", 504, 0, 0, 8.0, 62.0},
                                                {"Rock.Lviv.Ua", 216, 0, 0, 16.0, 55.0},
                                                {"Теревені", 386, 0, 0, 18.0, 58.0},
                                                {"Львів. Форум Рідного Міста", 345, 0, 0, 7.0, 62.0}};
    const auto table = format_results_table(rows);
    if (table.text != read_bytes(golden / "table1.txt")) bad.push_back("table1.txt");
    if (table.csv != read_bytes(golden / "table1.csv")) bad.push_back("table1.csv");

    RunRecord run;
    run.run_id = "golden";
    run.status = RunStatus::done;
    run.members = {"Andreas"};
    run.reports = verify_members(corpus, matcher, starter(), "lviv-forum", {"Andreas"}, {}, 1);
    if (render_run(run, ExportFormat::table) != read_bytes(golden / "andreas_table.txt")) {
        bad.push_back("andreas_table.txt");
    }

    std::string detail = "7 golden comparisons";
    for (const auto& b : bad) detail += ", mismatch: " + b;
    return {bad.empty(), detail};
}

// Child process: start a service on a large synthetic community, submit runs,
// tell the parent, then keep working until killed.
[[noreturn]] void crash_child(const std::filesystem::path& runs, int notify_fd) {
    try {
        SyntheticSpec spec;
        spec.community_id = "big";
        spec.n_members = 4000;
        spec.seed = 99;
        auto community = generate_synthetic(spec, starter(), kDefaultReferenceYear);
        ServiceOptions options;
        options.verify_threads = 1;
        options.run_workers = 2;
        VerificationService svc(std::move(community.corpus), starter(), VerifierConfig{}, runs, options);
        VerificationRequest req;
        req.community_id = "big";
        VerificationRequest small = req;
        small.member_ids = {"m0001", "m0002"};
        svc.submit_run(small);
        svc.submit_run(req);
        svc.submit_run(req);
        const char ok = 'k';
        (void)!write(notify_fd, &ok, 1);
        svc.wait_idle();
    } catch (...) {
        _exit(3);
    }
    _exit(0);
}

Outcome crash_safety() {
    TempDir dir;
    const auto runs = dir.path() / "runs";
    std::size_t kills = 0, done_total = 0, failed_total = 0, queued_total = 0;
    std::vector<std::string> problems;
    for (int round = 0; round < 4; ++round) {
        int fds[2];
        if (pipe(fds) != 0) return {false, "pipe failed"};
        std::cout.flush();
        const pid_t pid = fork();
        if (pid < 0) return {false, "fork failed"};
        if (pid == 0) {
            close(fds[0]);
            crash_child(runs, fds[1]);
        }
        close(fds[1]);
        char c = 0;
        const bool acknowledged = read(fds[0], &c, 1) == 1;
        close(fds[0]);
        if (acknowledged) std::this_thread::sleep_for(std::chrono::milliseconds(40 * round));
        kill(pid, SIGKILL);
        int status = 0;
        waitpid(pid, &status, 0);
        if (WIFSIGNALED(status)) ++kills;
        if (!acknowledged) problems.push_back("child exited before submitting");

        // a write that was interrupted between temp file and rename
        std::ofstream(runs / ("half-" + std::to_string(round) + ".json.tmp")) << "{\"run_id\": \"half\", \"stat";

        RunStore store(runs);
        if (store.recovery().removed_temp_files < 1) problems.push_back("temp file not removed");
        if (store.recovery().unreadable != 0) problems.push_back("unreadable run document");
        for (const auto& rec : store.list()) {
            if (rec->status == RunStatus::done && rec->reports.size() != rec->members.size()) {
                problems.push_back("done run " + rec->run_id + " with missing reports");
            }
            if (rec->status == RunStatus::running) problems.push_back("run left running after recovery");
        }
        for (const auto& entry : std::filesystem::directory_iterator(runs)) {
            if (entry.path().extension() == ".tmp") problems.push_back("temp file survived recovery");
        }
    }

    // a restarted service drains what is still queued
    {
        ServiceOptions options;
        options.verify_threads = 2;
        SyntheticSpec spec;
        spec.community_id = "big";
        spec.n_members = 4000;
        spec.seed = 99;
        auto community = generate_synthetic(spec, starter(), kDefaultReferenceYear);
        VerificationService svc(std::move(community.corpus), starter(), VerifierConfig{}, runs, options);
        svc.wait_idle();
        for (const auto& rec : svc.store().list()) {
            if (rec->status == RunStatus::done) {
                ++done_total;
                if (rec->reports.size() != rec->members.size()) problems.push_back("incomplete done run");
            } else if (rec->status == RunStatus::failed) {
                ++failed_total;
            } else {
                ++queued_total;
            }
        }
    }
    if (queued_total != 0) problems.push_back("queued runs not drained after restart");

    std::string detail = std::to_string(kills) + " SIGKILLs; after restart " + std::to_string(done_total) + " done, " +
                         std::to_string(failed_total) + " failed (interrupted)";
    for (const auto& p : problems) detail += "; " + p;
    return {problems.empty() && kills == 4, detail};
}

}  // namespace

int main() {
    report("false-trigger bound", false_trigger_bound);
    report("clean-signal exactness", clean_signal);
    report("oracle equivalence", oracle_equivalence);
    report("verdict invariant suite", verdict_invariants);
    report("argmax invariance", argmax_invariance);
    report("determinism and golden files", golden_files);
    report("gateway crash safety", crash_safety);
    return g_failed;
}
