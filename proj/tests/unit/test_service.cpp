#include <gtest/gtest.h>

#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "mwpr/error.hpp"
#include "mwpr/service.hpp"
#include "stub_generator.hpp"

using namespace mwpr;
using nlohmann::json;

namespace {

const std::string kJohnMary =
    "John had 5 apples, and Mary had 6 oranges. Find the total number of fruits";

IndexedCorpus fixture() {
  return build_index(import_jsonl(std::filesystem::path(MWPR_FIXTURE_DIR) / "fixture3.jsonl"));
}

void expect_api_error(const HttpReply& r, int status, const std::string& code) {
  EXPECT_EQ(r.status, status) << r.body;
  const auto body = json::parse(r.body);
  ASSERT_TRUE(body.contains("error")) << r.body;
  EXPECT_EQ(body["error"]["code"], code);
  EXPECT_TRUE(body["error"]["message"].is_string());
  for (const auto& [key, value] : body["error"].items()) {
    EXPECT_TRUE(key == "code" || key == "message" || key == "detail") << key;
  }
}

}  // namespace

class ServiceHandlers : public ::testing::Test {
 protected:
  Repository repo{fixture()};
  Service service{repo, {}};
};

TEST_F(ServiceHandlers, QueryReturnsBucket) {
  const auto r = service.query(json{{"equation", "x = 5 + 6"}, {"text", kJohnMary}, {"k", 3}}.dump());
  ASSERT_EQ(r.status, 200) << r.body;
  const auto body = json::parse(r.body);
  EXPECT_EQ(body["signature"], "VAR VAR OP:+");
  EXPECT_EQ(body["parsedExpression"], "N0 N1 +");
  EXPECT_EQ(body["tree"], "(+ V0 V1)");
  EXPECT_EQ(body["provider"], "gold");
  ASSERT_EQ(body["results"].size(), 2u);
  EXPECT_EQ(body["results"][0]["problemId"], "q1");
  EXPECT_EQ(body["results"][0]["rank"], 1);
  EXPECT_EQ(body["results"][0]["lexScore"], 1.0);
  EXPECT_EQ(body["results"][1]["problemId"], "q2");
  for (const auto& m : body["results"]) {
    EXPECT_EQ(m["signature"], "VAR VAR OP:+");
    EXPECT_TRUE(m["text"].is_string());
    EXPECT_TRUE(m["equation"].is_string());
  }
}

TEST_F(ServiceHandlers, QueryIsByteStable) {
  const std::string req = json{{"equation", "x = 5 + 6"}, {"text", kJohnMary}}.dump();
  EXPECT_EQ(service.query(req).body, service.query(req).body);
}

TEST_F(ServiceHandlers, QueryExcludeAndK) {
  const auto body = json::parse(
      service.query(json{{"equation", "x = 5 + 6"}, {"text", kJohnMary}, {"k", 1}, {"excludeId", "q1"}}.dump()).body);
  ASSERT_EQ(body["results"].size(), 1u);
  EXPECT_EQ(body["results"][0]["problemId"], "q2");
}

TEST_F(ServiceHandlers, QueryBadRequests) {
  expect_api_error(service.query(R"({"k":3})"), 400, "BAD_REQUEST");
  expect_api_error(service.query("not json"), 400, "BAD_REQUEST");
  expect_api_error(service.query("[1]"), 400, "BAD_REQUEST");
  expect_api_error(service.query(R"({"equation":"x = 1 + 2","k":0})"), 400, "BAD_REQUEST");
  expect_api_error(service.query(R"({"equation":"x = 1 + 2","k":"3"})"), 400, "BAD_REQUEST");
  expect_api_error(service.query(R"({"equation":5})"), 400, "BAD_REQUEST");
  expect_api_error(service.query(R"({"text":"only text"})"), 400, "BAD_REQUEST");
  expect_api_error(service.query(R"({"equation":"x = 1","provider":"bert"})"), 400, "BAD_REQUEST");
  expect_api_error(service.query(R"({"text":"t 1","provider":"remote"})"), 400, "BAD_REQUEST");
}

TEST_F(ServiceHandlers, QueryParseError) {
  const auto r = service.query(R"({"equation":"x = 5 +"})");
  expect_api_error(r, 400, "PARSE_ERROR");
  const auto body = json::parse(r.body);
  EXPECT_EQ(body["error"]["detail"]["kind"], "MalformedExpression");
  EXPECT_EQ(body["error"]["detail"]["stage"], "to_postfix");
}

TEST_F(ServiceHandlers, AddGetStats) {
  const auto stats0 = json::parse(service.stats().body);
  EXPECT_EQ(stats0, (json{{"total", 3}, {"indexed", 3}, {"failed", 0}, {"buckets", 2}, {"largestBucket", 2}}));

  const auto added = service.add_problem(
      json{{"id", "q4"}, {"text", "Kim has 2 hats and 8 caps"}, {"equation", "x = 2 + 8"}}.dump());
  ASSERT_EQ(added.status, 201) << added.body;
  const auto body = json::parse(added.body);
  EXPECT_EQ(body["id"], "q4");
  EXPECT_EQ(body["indexed"], true);
  EXPECT_EQ(body["signature"], "VAR VAR OP:+");

  const auto got = service.get_problem("q4");
  ASSERT_EQ(got.status, 200);
  const auto rec = json::parse(got.body);
  EXPECT_EQ(rec["text"], "Kim has 2 hats and 8 caps");
  EXPECT_EQ(rec["textNumbers"], json::array({2.0, 8.0}));
  EXPECT_EQ(rec["indexed"], true);

  expect_api_error(service.add_problem(json{{"id", "q4"}, {"text", "again"}}.dump()), 409, "DUPLICATE_ID");
  expect_api_error(service.get_problem("nope"), 404, "NOT_FOUND");
  expect_api_error(service.add_problem(R"({"id":"q9"})"), 400, "BAD_REQUEST");

  const auto failed = json::parse(
      service.add_problem(json{{"id", "q5"}, {"text", "t 1"}, {"equation", "x = ("}}.dump()).body);
  EXPECT_EQ(failed["indexed"], false);
  EXPECT_TRUE(failed["failure"].is_string());

  const auto stats = json::parse(service.stats().body);
  EXPECT_EQ(stats, (json{{"total", 5}, {"indexed", 4}, {"failed", 1}, {"buckets", 2}, {"largestBucket", 3}}));
}

TEST(ServiceRemote, GeneratorPaths) {
  test::StubGenerator stub;
  Repository repo(fixture());
  Service ok(repo, {RemoteEndpoint{stub.url("/generate"), 2000}, "*"});
  const auto r = ok.query(json{{"text", kJohnMary}, {"provider", "remote"}}.dump());
  ASSERT_EQ(r.status, 200) << r.body;
  const auto body = json::parse(r.body);
  EXPECT_EQ(body["provider"], "remote");
  EXPECT_EQ(body["equation"], "x = N0 + N1");
  EXPECT_EQ(body["results"].size(), 2u);

  Service bad(repo, {RemoteEndpoint{stub.url("/schema"), 2000}, "*"});
  expect_api_error(bad.query(json{{"text", kJohnMary}, {"provider", "remote"}}.dump()), 502,
                   "PROVIDER_ERROR");

  const int port = test::closed_port();
  Service down(repo, {RemoteEndpoint{"http://127.0.0.1:" + std::to_string(port) + "/g", 500}, "*"});
  const auto d = down.query(json{{"text", kJohnMary}, {"provider", "remote"}}.dump());
  expect_api_error(d, 502, "PROVIDER_ERROR");
  EXPECT_EQ(json::parse(d.body)["error"]["detail"]["kind"], "ConnectionFailed");
}

TEST(ServiceHttp, LiveEndpoints) {
  Repository repo(fixture());
  Service service(repo, {});
  HttpServer server(service);
  const int port = server.bind("127.0.0.1", 0);
  ASSERT_GT(port, 0);
  std::thread t([&] { server.serve(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  auto q = client.Post("/api/query", json{{"equation", "x = 5 + 6"}, {"text", kJohnMary}}.dump(),
                       "application/json");
  ASSERT_TRUE(q);
  EXPECT_EQ(q->status, 200);
  EXPECT_EQ(q->get_header_value(std::string(kSchemaVersionHeader)), "1");
  EXPECT_EQ(q->get_header_value("Access-Control-Allow-Origin"), "*");
  EXPECT_EQ(q->get_header_value("Content-Type"), "application/json");

  auto s = client.Get("/api/stats");
  ASSERT_TRUE(s);
  EXPECT_EQ(json::parse(s->body)["buckets"], 2);

  auto g = client.Get("/api/problems/q3");
  ASSERT_TRUE(g);
  EXPECT_EQ(json::parse(g->body)["signature"], "VAR VAR OP:*");

  auto missing = client.Get("/api/problems/zzz");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);

  auto nowhere = client.Get("/api/nothing-here");
  ASSERT_TRUE(nowhere);
  EXPECT_EQ(nowhere->status, 404);
  EXPECT_EQ(json::parse(nowhere->body)["error"]["code"], "NOT_FOUND");

  auto opts = client.Options("/api/query");
  ASSERT_TRUE(opts);
  EXPECT_EQ(opts->status, 204);

  server.stop();
  t.join();
}

// Queries racing adds see the bucket grow monotonically and never mix
// signatures.
TEST(ServiceHttp, ConcurrentQueriesDuringAdds) {
  Repository repo(fixture());
  Service service(repo, {});
  std::atomic<bool> done{false};
  std::atomic<int> bad{0};
  std::thread reader([&] {
    std::size_t last = 0;
    while (!done) {
      const auto body = json::parse(
          service.query(json{{"equation", "x = 1 + 2"}, {"text", "adds 1 and 2"}, {"k", 1000}}.dump()).body);
      const std::size_t n = body["results"].size();
      if (n < 2 || n < last) ++bad;
      last = n;
      for (const auto& m : body["results"]) {
        if (m["signature"] != "VAR VAR OP:+") ++bad;
      }
    }
  });
  for (int i = 0; i < 100; ++i) {
    service.add_problem(json{{"id", "n" + std::to_string(i)}, {"text", "adds 3 and 4"}, {"equation", "x = 3 + 4"}}.dump());
  }
  done = true;
  reader.join();
  EXPECT_EQ(bad.load(), 0);
}

TEST(ServeSettings, Environment) {
  setenv("MWPR_PORT", "9123", 1);
  setenv("MWPR_GENERATOR_URL", "http://gen:1/x", 1);
  setenv("MWPR_GENERATOR_TIMEOUT_MS", "250", 1);
  const auto s = settings_from_env();
  EXPECT_EQ(s.port, 9123);
  EXPECT_EQ(s.generator_url, "http://gen:1/x");
  EXPECT_EQ(s.generator_timeout_ms, 250);
  setenv("MWPR_PORT", "abc", 1);
  EXPECT_THROW(settings_from_env(), mwpr::Error);
  unsetenv("MWPR_PORT");
  unsetenv("MWPR_GENERATOR_URL");
  unsetenv("MWPR_GENERATOR_TIMEOUT_MS");
}
