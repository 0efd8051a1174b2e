#include "mwpr/service.hpp"

#include <cstdlib>

#include <httplib.h>

#include "json_io.hpp"
#include "mwpr/error.hpp"

namespace mwpr {

using detail::json;

namespace {

HttpReply api_error(int status, std::string_view code, const std::string& message,
                    json detail = nullptr) {
  json err = {{"code", code}, {"message", message}};
  if (!detail.is_null()) err["detail"] = std::move(detail);
  return HttpReply{status, json{{"error", std::move(err)}}.dump()};
}

HttpReply bad_request(const std::string& message) {
  return api_error(400, "BAD_REQUEST", message);
}

json error_detail(const Error& e) {
  return json{{"kind", std::string(to_string(e.code()))}, {"stage", e.stage()}};
}

std::optional<json> parse_body(std::string_view body) {
  try {
    return json::parse(body);
  } catch (const json::parse_error&) {
    return std::nullopt;
  }
}

}  // namespace

Service::Service(Repository& repo, ServiceConfig config)
    : repo_(repo), config_(std::move(config)) {}

HttpReply Service::query(std::string_view body) const {
  const auto req = parse_body(body);
  if (!req || !req->is_object()) return bad_request("body must be a JSON object");

  auto optional_string = [&](const char* key) -> std::optional<std::string> {
    auto it = req->find(key);
    if (it == req->end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) throw std::invalid_argument(key);
    return it->get<std::string>();
  };

  std::optional<std::string> text, equation, provider, exclude;
  std::size_t k = kDefaultTopK;
  try {
    text = optional_string("text");
    equation = optional_string("equation");
    provider = optional_string("provider");
    exclude = optional_string("excludeId");
  } catch (const std::invalid_argument& e) {
    return bad_request(std::string("field '") + e.what() + "' must be a string");
  }
  if (auto it = req->find("k"); it != req->end() && !it->is_null()) {
    if (!it->is_number_integer() || it->get<long long>() < 1) {
      return bad_request("k must be a positive integer");
    }
    k = it->get<std::size_t>();
  }
  if (text && text->empty()) text.reset();
  if (equation && equation->empty()) equation.reset();
  if (provider && *provider != "gold" && *provider != "remote") {
    return bad_request("provider must be \"gold\" or \"remote\"");
  }
  if (!text && !equation) return bad_request("text or equation is required");

  std::string provider_name = "gold";
  if (provider == "remote") {
    if (!text) return bad_request("the remote provider needs problem text");
    if (!config_.generator) {
      return bad_request("no expression generator is configured");
    }
    try {
      auto resp = provide_remote({*text, extract_numbers(*text)}, *config_.generator);
      equation = resp.equation;
      provider_name = resp.provider_name;
    } catch (const Error& e) {
      return api_error(502, "PROVIDER_ERROR", e.what(), error_detail(e));
    }
  } else if (!equation) {
    return bad_request(
        "equation is required unless provider is \"remote\"");
  }

  const auto snapshot = repo_.snapshot();
  std::optional<RawQueryResult> found;
  try {
    found = query_raw(*snapshot, *equation, QueryOptions{k, text, exclude});
  } catch (const Error& e) {
    if (is_parse_error(e.code())) {
      return api_error(400, "PARSE_ERROR", e.what(), error_detail(e));
    }
    return bad_request(e.what());
  }
  const RawQueryResult& result = *found;

  json results = json::array();
  for (const auto& m : result.results) {
    const MWPRecord* r = snapshot->find(m.problem_id);
    results.push_back({{"problemId", m.problem_id},
                       {"rank", m.rank},
                       {"lexScore", m.lex_score},
                       {"signature", m.signature},
                       {"text", r ? r->text : ""},
                       {"equation", r ? r->equation : ""}});
  }
  json out = {{"results", std::move(results)},
              {"signature", result.signature.canonical},
              {"parsedExpression", to_string(result.parsed.postfix)},
              {"tree", result.parsed.tree.to_sexpr()},
              {"equation", *equation},
              {"provider", provider_name}};
  return HttpReply{200, out.dump()};
}

HttpReply Service::add_problem(std::string_view body) {
  const auto req = parse_body(body);
  if (!req || !req->is_object()) return bad_request("body must be a JSON object");
  MWPRecord record;
  try {
    record = detail::record_from_json(*req);
  } catch (const Error& e) {
    return bad_request(e.message());
  }
  const std::string id = record.id;
  try {
    const AddOutcome outcome = repo_.add(std::move(record));
    json out = {{"id", id}, {"indexed", outcome.indexed}};
    if (outcome.signature) out["signature"] = outcome.signature->canonical;
    if (outcome.failure) out["failure"] = *outcome.failure;
    return HttpReply{201, out.dump()};
  } catch (const Error& e) {
    if (e.code() == ErrorCode::DuplicateId) {
      return api_error(409, "DUPLICATE_ID", e.message(), json{{"id", id}});
    }
    return api_error(500, "INTERNAL", e.what());
  }
}

HttpReply Service::get_problem(std::string_view id) const {
  const auto snapshot = repo_.snapshot();
  const MWPRecord* r = snapshot->find(id);
  if (r == nullptr) {
    return api_error(404, "NOT_FOUND", "no problem with id '" + std::string(id) + "'");
  }
  json out = detail::record_to_json(*r, true);
  const auto ordinal = snapshot->ordinal(id);
  const auto& sig = snapshot->signature_at(*ordinal);
  out["indexed"] = sig.has_value();
  out["signature"] = sig ? json(sig->canonical) : json(nullptr);
  return HttpReply{200, out.dump()};
}

HttpReply Service::stats() const {
  const IndexStats s = repo_.snapshot()->stats();
  json out = {{"total", s.total},
              {"indexed", s.indexed},
              {"failed", s.failed},
              {"buckets", s.buckets},
              {"largestBucket", s.largest_bucket}};
  return HttpReply{200, out.dump()};
}

// ---------------------------------------------------------------------------
// HTTP transport

struct HttpServer::Impl {
  Service& service;
  httplib::Server server;

  explicit Impl(Service& s) : service(s) {}

  void reply(httplib::Response& res, const HttpReply& r) const {
    res.status = r.status;
    res.set_content(r.body, "application/json");
  }

  void install() {
    const std::string origin = service.config().cors_origin;
    server.set_default_headers(
        {{std::string(kSchemaVersionHeader), std::string(kSchemaVersion)},
         {"Access-Control-Allow-Origin", origin},
         {"Access-Control-Allow-Headers", "Content-Type"},
         {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});

    server.Options(R"(/api/.*)", [](const httplib::Request&,
                                    httplib::Response& res) { res.status = 204; });
    server.Post("/api/query", [this](const httplib::Request& req,
                                     httplib::Response& res) {
      reply(res, service.query(req.body));
    });
    server.Post("/api/problems", [this](const httplib::Request& req,
                                        httplib::Response& res) {
      reply(res, service.add_problem(req.body));
    });
    server.Get(R"(/api/problems/([^/]+))", [this](const httplib::Request& req,
                                                  httplib::Response& res) {
      reply(res, service.get_problem(httplib::detail::decode_url(req.matches[1], false)));
    });
    server.Get("/api/stats", [this](const httplib::Request&,
                                    httplib::Response& res) {
      reply(res, service.stats());
    });
    server.set_exception_handler([this](const httplib::Request&,
                                        httplib::Response& res,
                                        std::exception_ptr ep) {
      std::string what = "unexpected error";
      try {
        std::rethrow_exception(ep);
      } catch (const std::exception& e) {
        what = e.what();
      } catch (...) {
      }
      reply(res, api_error(500, "INTERNAL", what));
    });
    server.set_error_handler([this](const httplib::Request&,
                                    httplib::Response& res) {
      // Only rewrite transport-level errors that carry no body yet.
      if (!res.body.empty()) return;
      if (res.status == 404) {
        reply(res, api_error(404, "NOT_FOUND", "no such endpoint"));
      } else if (res.status >= 400) {
        reply(res, api_error(res.status, res.status >= 500 ? "INTERNAL" : "BAD_REQUEST",
                             "HTTP " + std::to_string(res.status)));
      }
    });
  }
};

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>(service)) {
  impl_->install();
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::serve() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

ServeSettings settings_from_env(ServeSettings s) {
  auto env = [](const char* name) -> std::optional<std::string> {
    const char* v = std::getenv(name);
    if (v == nullptr || *v == '\0') return std::nullopt;
    return std::string(v);
  };
  auto to_int = [](const std::string& v, const char* name) {
    try {
      return std::stoi(v);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument,
                  std::string(name) + " must be an integer, got '" + v + "'");
    }
  };
  if (auto v = env("MWPR_PORT")) s.port = to_int(*v, "MWPR_PORT");
  if (auto v = env("MWPR_CORPUS")) s.corpus = *v;
  if (auto v = env("MWPR_INDEX")) s.index = *v;
  if (auto v = env("MWPR_GENERATOR_URL")) s.generator_url = *v;
  if (auto v = env("MWPR_GENERATOR_TIMEOUT_MS")) {
    s.generator_timeout_ms = to_int(*v, "MWPR_GENERATOR_TIMEOUT_MS");
  }
  return s;
}

}  // namespace mwpr
