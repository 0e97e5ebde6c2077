#pragma once

#include <filesystem>
#include <optional>
#include <string>

namespace httplib {
class Server;
}

namespace sdverify {

class VerificationService;

/// Mounts the JSON API on `server`:
///
///   GET  /api/config                       default VerifierConfig + characteristics
///   GET  /api/communities                  [{community_id, member_count}]
///   GET  /api/communities/{id}/members     [{member_id, total_posts, declared}]
///   POST /api/runs                         VerificationRequest -> 202 {run_id}
///   GET  /api/runs/{id}                    RunRecord
///   GET  /api/runs/{id}/export?format=     json | csv | table
///
/// Errors are {"error": message} with 400 (validation), 404 (unknown), 409 (run
/// not done) or 500. When `static_dir` is set it is served at "/".
void register_routes(httplib::Server& server, VerificationService& service,
                     const std::optional<std::filesystem::path>& static_dir = std::nullopt);

}  // namespace sdverify
