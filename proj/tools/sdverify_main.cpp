// sdverify: command-line front end for the verification pipeline.
//
//   sdverify verify   --corpus DIR --lexicon FILE --community ID [--members a,b] [--characteristics g,a] [--out FILE]
//   sdverify evaluate --spec FILE --lexicon FILE --out results.csv
//   sdverify generate --spec FILE --lexicon FILE --out DIR
//   sdverify lexicon validate FILE
//   sdverify serve    --corpus DIR --lexicon FILE --port N --runs DIR [--static DIR]
//
// Exit codes: 0 success, 1 validation (bad arguments, unknown ids, invalid
// lexicon), 2 I/O.

#include <csignal>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "httplib.h"
#include "sdverify/canonical_json.hpp"
#include "sdverify/errors.hpp"
#include "sdverify/evaluation.hpp"
#include "sdverify/http_api.hpp"
#include "sdverify/report_json.hpp"
#include "sdverify/service.hpp"
#include "sdverify/synthetic.hpp"

namespace {

using namespace sdverify;

struct ThresholdFlags {
    std::optional<double> theta_min, theta_sat, theta_conf;
    std::optional<unsigned> cap;
    std::optional<int> reference_year;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--theta-min", theta_min, "Evidence mass needed before any verdict");
        cmd->add_option("--theta-sat", theta_sat, "Evidence mass at which reliability saturates");
        cmd->add_option("--theta-conf", theta_conf, "Reliability needed for a definitive verdict");
        cmd->add_option("--cap", cap, "Per-post cap on marker occurrences");
        cmd->add_option("--reference-year", reference_year, "Year used to turn birth years into age groups");
    }

    VerifierConfig apply(VerifierConfig c) const {
        if (theta_min) c.theta_min = *theta_min;
        if (theta_sat) c.theta_sat = *theta_sat;
        if (theta_conf) c.theta_conf = *theta_conf;
        if (cap) c.per_post_cap = *cap;
        if (reference_year) c.reference_year = *reference_year;
        c.validate();
        return c;
    }
};

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    write_file_atomically(path, content);
}

int cmd_verify(const std::string& corpus_dir, const std::string& lexicon_path, const std::string& community,
               const std::vector<std::string>& members, const std::vector<std::string>& chars, const std::string& out,
               const ThresholdFlags& flags, unsigned threads) {
    const auto corpus = load_corpus_dir(corpus_dir);
    const auto lexicon = load_lexicon(lexicon_path);
    auto config = flags.apply({});
    config.selected_characteristics = chars;
    const auto reports = verify_members(corpus, compile_lexicon(lexicon), lexicon, community, members, config, threads);
    write_output(out, canonical_reports(reports));
    return 0;
}

int cmd_evaluate(const std::string& spec_path, const std::string& lexicon_path, const std::string& out,
                 const ThresholdFlags& flags, unsigned threads) {
    const auto lexicon = load_lexicon(lexicon_path);
    const auto plan = load_benchmark_plan(spec_path, flags.apply({}));
    const auto config = flags.apply(plan.config);
    const auto rows = run_benchmark(plan.specs, lexicon, config, threads);
    const auto table = format_results_table(rows);
    std::cout << table.text;
    if (!out.empty()) {
        const std::filesystem::path csv_path(out);
        write_file_atomically(csv_path, table.csv);
        auto json_path = csv_path;
        json_path.replace_extension(".json");
        write_file_atomically(json_path, canonical_dump(results_to_json(rows, config)));
        std::cerr << "wrote " << csv_path.string() << " and " << json_path.string() << "\n";
    }
    return 0;
}

int cmd_generate(const std::string& spec_path, const std::string& lexicon_path, const std::string& out, int year) {
    const auto lexicon = load_lexicon(lexicon_path);
    const auto spec = synthetic_spec_from_json(json::parse(read_text_file(spec_path)));
    const auto community = generate_synthetic(spec, lexicon, year);
    write_corpus_dir(community.corpus, out);
    json truth = json::object();
    for (const auto& [member, values] : community.truth.values) {
        truth[member] = {{"values", values}, {"deceiver", community.truth.deceiver.at(member)}};
    }
    write_file_atomically(std::filesystem::path(out) / "truth.json", canonical_dump(truth));
    std::cerr << "generated " << community.corpus.member_count() << " members, " << community.corpus.post_count()
              << " posts in " << out << "\n";
    return 0;
}

int cmd_lexicon_validate(const std::string& path) {
    const auto lexicon = load_lexicon(path);  // throws on hard invariant violations
    const auto issues = validate_lexicon(lexicon);
    bool errors = false;
    for (const auto& issue : issues) {
        std::cout << to_string(issue.severity) << ": " << (issue.marker_id ? *issue.marker_id + ": " : "")
                  << issue.message << "\n";
        errors = errors || issue.severity == Severity::error;
    }
    std::cout << lexicon.markers.size() << " markers, " << lexicon.characteristics.size() << " characteristics, "
              << issues.size() << " issue(s)\n";
    return errors ? 1 : 0;
}

httplib::Server* g_server = nullptr;

void on_signal(int) {
    if (g_server != nullptr) g_server->stop();
}

int cmd_serve(const std::string& corpus_dir, const std::string& lexicon_path, const std::string& host, int port,
              const std::string& runs_dir, const std::string& static_dir, const ThresholdFlags& flags,
              unsigned workers) {
    ServiceOptions options;
    options.run_workers = workers;
    VerificationService service(load_corpus_dir(corpus_dir), load_lexicon(lexicon_path), flags.apply({}), runs_dir,
                                options);
    const auto& rec = service.store().recovery();
    std::cerr << "run store " << runs_dir << ": " << rec.loaded << " run(s), " << rec.interrupted
              << " interrupted, " << rec.removed_temp_files << " temp file(s) removed\n";

    httplib::Server server;
    std::optional<std::filesystem::path> static_path;
    if (!static_dir.empty()) static_path = static_dir;
    register_routes(server, service, static_path);

    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cerr << "listening on http://" << host << ":" << port << "\n";
    if (!server.listen(host, port)) {
        std::cerr << "error: cannot listen on " << host << ":" << port << "\n";
        return 2;
    }
    g_server = nullptr;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Verification of declared socio-demographic profiles against forum posts"};
    app.require_subcommand(1);

    std::string corpus_dir, lexicon_path, community, out, spec_path, runs_dir, static_dir, host = "127.0.0.1";
    std::vector<std::string> members, chars;
    unsigned threads = 0;
    int port = 8080;
    int year = kDefaultReferenceYear;
    ThresholdFlags flags;

    auto* verify = app.add_subcommand("verify", "Verify members of one community, print canonical JSON reports");
    verify->add_option("--corpus", corpus_dir, "Directory with posts.jsonl and members.jsonl")->required();
    verify->add_option("--lexicon", lexicon_path, "Marker lexicon JSON")->required();
    verify->add_option("--community", community, "Community id")->required();
    verify->add_option("--members", members, "Member ids (default: all)")->delimiter(',');
    verify->add_option("--characteristics", chars, "Characteristic ids (default: all)")->delimiter(',');
    verify->add_option("--out", out, "Output file (default: stdout)");
    verify->add_option("--threads", threads, "Worker threads (0: all cores)");
    flags.add_to(verify);

    auto* evaluate = app.add_subcommand("evaluate", "Run the synthetic benchmark and print the results table");
    evaluate->add_option("--spec", spec_path, "Benchmark plan JSON")->required();
    evaluate->add_option("--lexicon", lexicon_path, "Marker lexicon JSON")->required();
    evaluate->add_option("--out", out, "results.csv path; results.json is written next to it");
    evaluate->add_option("--threads", threads, "Worker threads (0: all cores)");
    flags.add_to(evaluate);

    auto* generate = app.add_subcommand("generate", "Write one synthetic community as a corpus directory");
    generate->add_option("--spec", spec_path, "Synthetic spec JSON")->required();
    generate->add_option("--lexicon", lexicon_path, "Marker lexicon JSON")->required();
    generate->add_option("--out", out, "Output directory")->required();
    generate->add_option("--reference-year", year, "Year used for birth years");

    auto* lexicon = app.add_subcommand("lexicon", "Lexicon utilities");
    lexicon->require_subcommand(1);
    auto* validate = lexicon->add_subcommand("validate", "Check a lexicon and list its issues");
    validate->add_option("file", lexicon_path, "Marker lexicon JSON")->required();

    auto* serve = app.add_subcommand("serve", "Serve the HTTP API");
    serve->add_option("--corpus", corpus_dir, "Directory with posts.jsonl and members.jsonl")->required();
    serve->add_option("--lexicon", lexicon_path, "Marker lexicon JSON")->required();
    serve->add_option("--port", port, "TCP port");
    serve->add_option("--host", host, "Bind address");
    serve->add_option("--runs", runs_dir, "Run store directory")->required();
    serve->add_option("--static", static_dir, "Directory served at /");
    serve->add_option("--workers", threads, "Runs executed concurrently")->default_val(1);
    flags.add_to(serve);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (*verify) return cmd_verify(corpus_dir, lexicon_path, community, members, chars, out, flags, threads);
        if (*evaluate) return cmd_evaluate(spec_path, lexicon_path, out, flags, threads);
        if (*generate) return cmd_generate(spec_path, lexicon_path, out, year);
        if (*validate) return cmd_lexicon_validate(lexicon_path);
        if (*serve) return cmd_serve(corpus_dir, lexicon_path, host, port, runs_dir, static_dir, flags, std::max(1u, threads));
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.error_class());
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
