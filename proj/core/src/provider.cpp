#include "mwpr/provider.hpp"

#include <chrono>

#include <httplib.h>

#include "json_io.hpp"
#include "mwpr/error.hpp"

namespace mwpr {

using detail::json;

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

SplitUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::InvalidArgument,
                "generator URL needs a scheme: '" + url + "'", "provider");
  }
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

ExpressionResponse provide_gold(const MWPRecord& record) {
  const auto start = Clock::now();
  if (record.equation.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw Error(ErrorCode::MissingEquation,
                "record '" + record.id + "' has no equation", "gold");
  }
  return ExpressionResponse{record.equation, "gold", elapsed_ms(start)};
}

ExpressionResponse provide_remote(const ExpressionRequest& request,
                                  const RemoteEndpoint& endpoint) {
  constexpr const char* kStage = "remote";
  const auto start = Clock::now();
  const auto [origin, path] = split_url(endpoint.url);

  httplib::Client client(origin);
  const auto timeout = std::chrono::milliseconds(endpoint.timeout_ms);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);

  const json body = {{"text", request.text}, {"numbers", request.text_numbers}};
  auto res = client.Post(path, body.dump(), "application/json");
  if (!res) {
    const auto err = res.error();
    const bool timed_out = err == httplib::Error::ConnectionTimeout ||
                           ((err == httplib::Error::Read ||
                             err == httplib::Error::Connection) &&
                            elapsed_ms(start) >= endpoint.timeout_ms);
    if (timed_out) {
      throw Error(ErrorCode::Timeout,
                  "no response within " + std::to_string(endpoint.timeout_ms) +
                      " ms",
                  kStage);
    }
    throw Error(ErrorCode::ConnectionFailed,
                "cannot reach " + endpoint.url + ": " + httplib::to_string(err),
                kStage);
  }

  json reply;
  try {
    reply = json::parse(res->body);
  } catch (const json::parse_error&) {
    if (res->status < 200 || res->status >= 300) {
      throw Error(ErrorCode::RemoteError,
                  "HTTP " + std::to_string(res->status), kStage);
    }
    throw Error(ErrorCode::BadResponse, "response is not JSON", kStage);
  }
  if (res->status < 200 || res->status >= 300) {
    std::string message = "HTTP " + std::to_string(res->status);
    if (reply.is_object() && reply.contains("error") &&
        reply["error"].is_string()) {
      message += ": " + reply["error"].get<std::string>();
    }
    throw Error(ErrorCode::RemoteError, message, kStage);
  }
  if (!reply.is_object() || !reply.contains("equation") ||
      !reply["equation"].is_string() ||
      reply["equation"].get<std::string>().empty()) {
    throw Error(ErrorCode::BadResponse,
                "response lacks a non-empty string 'equation'", kStage);
  }
  return ExpressionResponse{reply["equation"].get<std::string>(), "remote",
                            elapsed_ms(start)};
}

}  // namespace mwpr
