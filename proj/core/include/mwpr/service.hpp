#pragma once

// JSON-over-HTTP front end.
//
//   POST /api/query          {text?, equation?, k?, provider?, excludeId?}
//   POST /api/problems       native record object
//   GET  /api/problems/{id}
//   GET  /api/stats
//
// Every error body is {"error": {"code", "message", "detail"?}} with code in
// PARSE_ERROR, NOT_FOUND, DUPLICATE_ID, BAD_REQUEST, PROVIDER_ERROR, INTERNAL.

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "mwpr/provider.hpp"
#include "mwpr/retrieval.hpp"

namespace mwpr {

inline constexpr std::string_view kSchemaVersionHeader = "X-MWPR-Schema-Version";
inline constexpr std::string_view kSchemaVersion = "1";

struct ServiceConfig {
  std::optional<RemoteEndpoint> generator;
  std::string cors_origin = "*";
};

struct HttpReply {
  int status = 200;
  std::string body;
};

/// Request handlers, independent of the HTTP transport.
class Service {
 public:
  Service(Repository& repo, ServiceConfig config);

  HttpReply query(std::string_view body) const;
  HttpReply add_problem(std::string_view body);
  HttpReply get_problem(std::string_view id) const;
  HttpReply stats() const;

  const ServiceConfig& config() const noexcept { return config_; }

 private:
  Repository& repo_;
  ServiceConfig config_;
};

/// Owns the listening socket; routes requests to a Service.
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds; port 0 picks a free port. Returns the bound port or -1.
  int bind(const std::string& host, int port);
  /// Blocks serving requests until stop().
  bool serve();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct ServeSettings {
  std::string host = "0.0.0.0";
  int port = 8080;
  std::string corpus;  // JSONL, used when no index is given
  std::string index;
  std::optional<std::string> generator_url;
  int generator_timeout_ms = 2000;
  std::string cors_origin = "*";
};

/// Overlays MWPR_PORT, MWPR_CORPUS, MWPR_INDEX, MWPR_GENERATOR_URL and
/// MWPR_GENERATOR_TIMEOUT_MS onto `defaults`.
ServeSettings settings_from_env(ServeSettings defaults = {});

}  // namespace mwpr
