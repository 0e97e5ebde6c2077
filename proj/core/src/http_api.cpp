#include "sdverify/http_api.hpp"

#include "httplib.h"
#include "sdverify/canonical_json.hpp"
#include "sdverify/errors.hpp"
#include "sdverify/report_json.hpp"
#include "sdverify/service.hpp"

namespace sdverify {
namespace {

constexpr const char* kJson = "application/json; charset=utf-8";

int status_for(ErrorClass cls) {
    switch (cls) {
        case ErrorClass::validation: return 400;
        case ErrorClass::not_found: return 404;
        case ErrorClass::conflict: return 409;
        case ErrorClass::io: return 500;
    }
    return 500;
}

void send_error(httplib::Response& res, int status, const std::string& message) {
    res.status = status;
    res.set_content(canonical_dump(json{{"error", message}}), kJson);
}

/// Runs `fn` and maps exceptions onto HTTP errors.
template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
    return [fn = std::move(fn)](const httplib::Request& req, httplib::Response& res) {
        try {
            fn(req, res);
        } catch (const Error& e) {
            send_error(res, status_for(e.error_class()), e.what());
        } catch (const json::exception& e) {
            send_error(res, 400, std::string("malformed JSON: ") + e.what());
        } catch (const std::exception& e) {
            send_error(res, 500, e.what());
        }
    };
}

json declared_json(const DeclaredProfile& p) {
    json d = json::object();
    for (const auto& [k, v] : p.extra) d[k] = v;
    if (p.gender) d["gender"] = to_string(*p.gender);
    if (p.birth_year) d["birth_year"] = *p.birth_year;
    if (p.residence) d["residence"] = *p.residence;
    if (p.education) d["education"] = to_string(*p.education);
    if (p.occupation) d["occupation"] = *p.occupation;
    return d;
}

}  // namespace

void register_routes(httplib::Server& server, VerificationService& service,
                     const std::optional<std::filesystem::path>& static_dir) {
    server.Get("/api/config", guarded([&service](const httplib::Request&, httplib::Response& res) {
                   json chars = json::array();
                   for (const auto& c : service.lexicon().characteristics) {
                       chars.push_back({{"id", c.id}, {"values", c.values}});
                   }
                   res.set_content(canonical_dump(json{{"config", to_json(service.default_config())},
                                                       {"characteristics", chars},
                                                       {"lexicon_version", service.lexicon().version}}),
                                   kJson);
               }));

    server.Get("/api/communities", guarded([&service](const httplib::Request&, httplib::Response& res) {
                   json out = json::array();
                   for (const auto& c : service.list_communities()) {
                       out.push_back({{"community_id", c.community_id}, {"member_count", c.member_count}});
                   }
                   res.set_content(canonical_dump(out), kJson);
               }));

    server.Get(R"(/api/communities/([^/]+)/members)",
               guarded([&service](const httplib::Request& req, httplib::Response& res) {
                   json out = json::array();
                   for (const auto& m : service.list_members(req.matches[1].str())) {
                       out.push_back({{"member_id", m.member_id},
                                      {"total_posts", m.total_posts},
                                      {"declared", declared_json(m.profile)}});
                   }
                   res.set_content(canonical_dump(out), kJson);
               }));

    server.Post("/api/runs", guarded([&service](const httplib::Request& req, httplib::Response& res) {
                    const auto body = json::parse(req.body);
                    const auto run_id = service.submit_run(verification_request_from_json(body));
                    res.status = 202;
                    res.set_content(canonical_dump(json{{"run_id", run_id}}), kJson);
                }));

    server.Get(R"(/api/runs/([^/]+))", guarded([&service](const httplib::Request& req, httplib::Response& res) {
                   res.set_content(canonical_dump(to_json(service.get_run(req.matches[1].str()))), kJson);
               }));

    server.Get(R"(/api/runs/([^/]+)/export)",
               guarded([&service](const httplib::Request& req, httplib::Response& res) {
                   const auto name = req.has_param("format") ? req.get_param_value("format") : std::string("json");
                   const auto format = parse_export_format(name);
                   if (!format) throw ValidationError("unknown export format: " + name);
                   const auto body = service.export_run(req.matches[1].str(), *format);
                   switch (*format) {
                       case ExportFormat::json: res.set_content(body, kJson); break;
                       case ExportFormat::csv: res.set_content(body, "text/csv; charset=utf-8"); break;
                       case ExportFormat::table: res.set_content(body, "text/plain; charset=utf-8"); break;
                   }
               }));

    if (static_dir) server.set_mount_point("/", static_dir->string());
}

}  // namespace sdverify
