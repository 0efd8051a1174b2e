// mwpranker: command-line front end.
//
// Exit status: 0 success, 1 usage error, 2 data error.

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mwpr/bench.hpp"
#include "mwpr/corpus.hpp"
#include "mwpr/error.hpp"
#include "mwpr/eval.hpp"
#include "mwpr/provider.hpp"
#include "mwpr/retrieval.hpp"
#include "mwpr/service.hpp"
#include "mwpr/synth.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool g_json_errors = false;

int report_failure(int code, const std::string& kind, const std::string& message) {
  if (g_json_errors) {
    std::cerr << json{{"error", {{"kind", kind}, {"message", message}, {"exit", code}}}}
                     .dump()
              << "\n";
  } else {
    std::cerr << "mwpranker: " << message << "\n";
  }
  return code;
}

std::string env_or(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return (v != nullptr && *v != '\0') ? std::string(v) : fallback;
}

void write_text(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw mwpr::Error(mwpr::ErrorCode::IoError, "cannot write '" + path + "'");
  out << content;
}

mwpr::IndexedCorpus load_corpus_or_index(const std::string& index,
                                         const std::string& corpus) {
  if (!index.empty()) return mwpr::load_index(index);
  if (!corpus.empty()) return mwpr::build_index(mwpr::import_jsonl(corpus));
  throw UsageError("an --index (or MWPR_INDEX) or --corpus is required");
}

// ---------------------------------------------------------------------------

struct ImportArgs {
  std::string in, format = "jsonl", out;
};

int run_import(const ImportArgs& a) {
  const auto records = mwpr::import_corpus(a.in, a.format);
  std::string body;
  for (const auto& r : records) body += mwpr::to_jsonl_line(r) + "\n";
  write_text(a.out, body);
  std::cerr << "imported " << records.size() << " records\n";
  return kExitOk;
}

struct IndexArgs {
  std::string corpus, out;
};

int run_index(const IndexArgs& a) {
  const auto corpus = mwpr::build_index(mwpr::import_jsonl(a.corpus));
  mwpr::save_index(corpus, a.out);
  const auto s = corpus.stats();
  std::cout << "indexed " << s.indexed << ", failed " << s.failed << ", buckets "
            << s.buckets << "\n";
  return kExitOk;
}

struct QueryArgs {
  std::string index, corpus, equation, text, exclude, generator_url;
  int generator_timeout_ms = 2000;
  std::size_t k = mwpr::kDefaultTopK;
  bool json_out = false;
};

int run_query(QueryArgs a) {
  if (a.equation.empty() && a.text.empty()) {
    throw UsageError("query needs --equation and/or --text");
  }
  if (a.k == 0) throw UsageError("-k must be at least 1");
  a.index = a.index.empty() ? env_or("MWPR_INDEX", "") : a.index;
  a.generator_url =
      a.generator_url.empty() ? env_or("MWPR_GENERATOR_URL", "") : a.generator_url;

  std::string equation = a.equation;
  std::string provider = "gold";
  if (equation.empty()) {
    if (a.generator_url.empty()) {
      throw UsageError("no --equation given and no --generator-url to derive one");
    }
    auto resp = mwpr::provide_remote({a.text, mwpr::extract_numbers(a.text)},
                                     {a.generator_url, a.generator_timeout_ms});
    equation = resp.equation;
    provider = resp.provider_name;
  }

  const auto corpus = load_corpus_or_index(a.index, a.corpus);
  mwpr::QueryOptions opts;
  opts.k = a.k;
  if (!a.text.empty()) opts.query_text = a.text;
  if (!a.exclude.empty()) opts.exclude_id = a.exclude;
  const auto res = mwpr::query_raw(corpus, equation, opts);

  if (a.json_out) {
    json results = json::array();
    for (const auto& m : res.results) {
      results.push_back({{"problemId", m.problem_id},
                         {"rank", m.rank},
                         {"lexScore", m.lex_score},
                         {"signature", m.signature},
                         {"text", corpus.find(m.problem_id)->text}});
    }
    std::cout << json{{"signature", res.signature.canonical},
                      {"parsedExpression", mwpr::to_string(res.parsed.postfix)},
                      {"provider", provider},
                      {"results", std::move(results)}}
                     .dump()
              << "\n";
    return kExitOk;
  }
  std::cout << "signature:  " << res.signature.canonical << "\n"
            << "expression: " << mwpr::to_string(res.parsed.postfix) << "\n";
  if (res.results.empty()) std::cout << "no matching problems\n";
  for (const auto& m : res.results) {
    char score[16];
    std::snprintf(score, sizeof score, "%.3f", m.lex_score);
    std::cout << m.rank << ". [" << m.problem_id << "] (lex " << score << ") "
              << corpus.find(m.problem_id)->text << "\n";
  }
  return kExitOk;
}

mwpr::HttpServer* g_server = nullptr;

void on_signal(int) {
  if (g_server != nullptr) g_server->stop();
}

struct ServeArgs {
  std::string index, corpus, host = "0.0.0.0", generator_url, cors_origin = "*";
  int port = 0;
  int generator_timeout_ms = 0;
};

int run_serve(const ServeArgs& a) {
  mwpr::ServeSettings s = mwpr::settings_from_env();
  if (!a.index.empty()) s.index = a.index;
  if (!a.corpus.empty()) s.corpus = a.corpus;
  if (a.port != 0) s.port = a.port;
  if (!a.generator_url.empty()) s.generator_url = a.generator_url;
  if (a.generator_timeout_ms > 0) s.generator_timeout_ms = a.generator_timeout_ms;
  s.host = a.host;
  s.cors_origin = a.cors_origin;

  mwpr::Repository repo(load_corpus_or_index(s.index, s.corpus));
  mwpr::ServiceConfig config;
  if (s.generator_url) config.generator = mwpr::RemoteEndpoint{*s.generator_url, s.generator_timeout_ms};
  config.cors_origin = s.cors_origin;
  mwpr::Service service(repo, config);
  mwpr::HttpServer server(service);
  const int port = server.bind(s.host, s.port);
  if (port < 0) {
    throw mwpr::Error(mwpr::ErrorCode::IoError,
                      "cannot bind " + s.host + ":" + std::to_string(s.port));
  }
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  const auto st = repo.snapshot()->stats();
  std::cerr << "serving " << st.total << " problems (" << st.buckets
            << " buckets) on http://" << s.host << ":" << port << "\n";
  server.serve();
  g_server = nullptr;
  return kExitOk;
}

struct EvalArgs {
  std::string index, corpus, queries, systems = "tree,vectorsim", out, oracle_out;
  std::size_t k = 3;
};

int run_eval(const EvalArgs& a) {
  if (a.queries.empty()) throw UsageError("eval needs --queries");
  const auto corpus = load_corpus_or_index(
      a.index.empty() ? env_or("MWPR_INDEX", "") : a.index, a.corpus);
  const auto queries = mwpr::import_jsonl(a.queries);
  mwpr::ProtocolOptions opts;
  opts.systems = mwpr::parse_systems(a.systems);
  opts.k = a.k;
  const auto rows = mwpr::run_protocol(corpus, queries, opts);
  write_text(a.out, mwpr::transcript_to_jsonl(rows));
  if (!a.oracle_out.empty()) {
    const auto set = mwpr::oracle_annotations(corpus, queries, rows);
    write_text(a.oracle_out, mwpr::annotations_to_csv(set));
  }
  std::cerr << "wrote " << rows.size() << " transcript rows for " << queries.size()
            << " queries\n";
  return kExitOk;
}

struct ScoreArgs {
  std::string annotations, dataset = "corpus", label_source = "consensus", report;
  bool json_out = false;
};

int run_score(const ScoreArgs& a) {
  const auto set = mwpr::load_annotations_csv(a.annotations);
  auto report = mwpr::make_report(set, a.dataset);
  if (a.label_source == "A") report.headline = mwpr::LabelSource::A;
  else if (a.label_source == "B") report.headline = mwpr::LabelSource::B;
  else if (a.label_source == "consensus") report.headline = mwpr::LabelSource::Consensus;
  else throw UsageError("--label-source must be A, B or consensus");
  if (!a.report.empty()) write_text(a.report, mwpr::report_to_json(report) + "\n");
  if (a.json_out) {
    std::cout << mwpr::report_to_json(report) << "\n";
  } else {
    std::cout << mwpr::report_to_table(report);
  }
  return kExitOk;
}

struct SynthArgs {
  mwpr::SynthOptions opts;
  std::string out, queries_out;
};

int run_gen_synth(const SynthArgs& a) {
  const auto synth = mwpr::generate_synthetic(a.opts);
  std::string body;
  for (const auto& r : synth.records) body += mwpr::to_jsonl_line(r) + "\n";
  write_text(a.out, body);
  if (!a.queries_out.empty()) {
    std::string seeds;
    for (const auto& r : synth.records) {
      if (std::find(synth.seed_ids.begin(), synth.seed_ids.end(), r.id) !=
          synth.seed_ids.end()) {
        seeds += mwpr::to_jsonl_line(r) + "\n";
      }
    }
    write_text(a.queries_out, seeds);
  }
  return kExitOk;
}

struct BenchArgs {
  std::string index, corpus;
  std::size_t queries = 1000;
  std::uint64_t seed = 1;
  std::size_t k = 3;
  bool json_out = false;
};

int run_bench(const BenchArgs& a) {
  const auto build_start = std::chrono::steady_clock::now();
  const auto corpus = load_corpus_or_index(
      a.index.empty() ? env_or("MWPR_INDEX", "") : a.index, a.corpus);
  const double load_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - build_start)
                             .count();
  const auto r = mwpr::run_latency_bench(corpus, a.queries, a.seed, a.k);
  if (a.json_out) {
    std::cout << json{{"records", corpus.size()},
                      {"loadMs", load_ms},
                      {"queries", r.queries},
                      {"meanMs", r.mean_ms},
                      {"p50Ms", r.p50_ms},
                      {"p90Ms", r.p90_ms},
                      {"p99Ms", r.p99_ms},
                      {"maxMs", r.max_ms}}
                     .dump()
              << "\n";
    return kExitOk;
  }
  std::printf("records %zu, load %.1f ms\n", corpus.size(), load_ms);
  std::printf("queries %zu  mean %.4f ms  p50 %.4f ms  p90 %.4f ms  p99 %.4f ms  max %.4f ms\n",
              r.queries, r.mean_ms, r.p50_ms, r.p90_ms, r.p99_ms, r.max_ms);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Retrieve math word problems that share a problem model"};
  app.require_subcommand(1);
  app.add_flag("--json", g_json_errors, "Machine-readable JSON errors on stderr");

  ImportArgs import_args;
  auto* import_cmd = app.add_subcommand("import", "Convert a dataset to native JSONL");
  import_cmd->add_option("--in", import_args.in, "Input dataset")->required();
  import_cmd->add_option("--format", import_args.format, "mawps or jsonl")
      ->check(CLI::IsMember({"mawps", "jsonl"}));
  import_cmd->add_option("--out", import_args.out, "Output JSONL (default stdout)");

  IndexArgs index_args;
  auto* index_cmd = app.add_subcommand("index", "Build and persist the signature index");
  index_cmd->add_option("--corpus", index_args.corpus, "Native JSONL corpus")->required();
  index_cmd->add_option("--out", index_args.out, "Index file")->required();

  QueryArgs query_args;
  auto* query_cmd = app.add_subcommand("query", "Find problems with the same problem model");
  query_cmd->add_option("--index", query_args.index, "Index file (env MWPR_INDEX)");
  query_cmd->add_option("--corpus", query_args.corpus, "JSONL corpus to index on the fly");
  query_cmd->add_option("--equation", query_args.equation, "Query equation, e.g. \"x = 5 + 6\"");
  query_cmd->add_option("--text", query_args.text, "Query problem text");
  query_cmd->add_option("-k", query_args.k, "Number of results")->capture_default_str();
  query_cmd->add_option("--exclude", query_args.exclude, "Problem id to leave out");
  query_cmd->add_option("--generator-url", query_args.generator_url,
                        "Expression generator endpoint (env MWPR_GENERATOR_URL)");
  query_cmd->add_option("--generator-timeout-ms", query_args.generator_timeout_ms);
  query_cmd->add_flag("--json", query_args.json_out, "Print results as JSON");

  ServeArgs serve_args;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  serve_cmd->add_option("--index", serve_args.index, "Index file (env MWPR_INDEX)");
  serve_cmd->add_option("--corpus", serve_args.corpus, "JSONL corpus (env MWPR_CORPUS)");
  serve_cmd->add_option("--port", serve_args.port, "Port (env MWPR_PORT, default 8080)");
  serve_cmd->add_option("--host", serve_args.host)->capture_default_str();
  serve_cmd->add_option("--generator-url", serve_args.generator_url,
                        "Expression generator endpoint (env MWPR_GENERATOR_URL)");
  serve_cmd->add_option("--generator-timeout-ms", serve_args.generator_timeout_ms,
                        "env MWPR_GENERATOR_TIMEOUT_MS");
  serve_cmd->add_option("--cors-origin", serve_args.cors_origin)->capture_default_str();

  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand("eval", "Run the retrieval evaluation protocol");
  eval_cmd->require_subcommand(0, 1);
  eval_cmd->add_option("--index", eval_args.index, "Index file (env MWPR_INDEX)");
  eval_cmd->add_option("--corpus", eval_args.corpus, "JSONL corpus");
  eval_cmd->add_option("--queries", eval_args.queries, "Query records (JSONL)");
  eval_cmd->add_option("--systems", eval_args.systems, "Comma list of tree,vectorsim")
      ->capture_default_str();
  eval_cmd->add_option("-k", eval_args.k)->capture_default_str();
  eval_cmd->add_option("--out", eval_args.out, "Transcript JSONL (default stdout)");
  eval_cmd->add_option("--oracle-annotations", eval_args.oracle_out,
                       "Also write signature-oracle labels as annotation CSV");

  ScoreArgs score_args;
  auto* score_cmd = eval_cmd->add_subcommand("score", "Score an annotation CSV");
  score_cmd->add_option("--annotations", score_args.annotations, "Annotation CSV")->required();
  score_cmd->add_option("--dataset", score_args.dataset, "Dataset label")->capture_default_str();
  score_cmd->add_option("--label-source", score_args.label_source, "A, B or consensus")
      ->capture_default_str();
  score_cmd->add_option("--report", score_args.report, "Write the JSON report here");
  score_cmd->add_flag("--json", score_args.json_out, "Print the JSON report");

  SynthArgs synth_args;
  auto* synth_cmd = app.add_subcommand("gen-synth", "Emit a planted-duplicate corpus");
  synth_cmd->add_option("--n", synth_args.opts.n, "Total problems")->capture_default_str();
  synth_cmd->add_option("--duplicates", synth_args.opts.duplicates)->capture_default_str();
  synth_cmd->add_option("--distractors", synth_args.opts.distractors)->capture_default_str();
  synth_cmd->add_option("--seed", synth_args.opts.seed)->capture_default_str();
  synth_cmd->add_option("--out", synth_args.out, "Output JSONL (default stdout)");
  synth_cmd->add_option("--queries-out", synth_args.queries_out,
                        "Write the family seed problems here");

  BenchArgs bench_args;
  auto* bench_cmd = app.add_subcommand("bench", "Measure query latency");
  bench_cmd->add_option("--index", bench_args.index, "Index file (env MWPR_INDEX)");
  bench_cmd->add_option("--corpus", bench_args.corpus, "JSONL corpus");
  bench_cmd->add_option("--queries", bench_args.queries)->capture_default_str();
  bench_cmd->add_option("--seed", bench_args.seed)->capture_default_str();
  bench_cmd->add_option("-k", bench_args.k)->capture_default_str();
  bench_cmd->add_flag("--json", bench_args.json_out, "Print JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return report_failure(kExitUsage, "usage", e.what());
  }
  // A subcommand-level --json also switches errors to JSON.
  if (query_args.json_out || bench_args.json_out || score_args.json_out) {
    g_json_errors = true;
  }

  try {
    if (*import_cmd) return run_import(import_args);
    if (*index_cmd) return run_index(index_args);
    if (*query_cmd) return run_query(query_args);
    if (*serve_cmd) return run_serve(serve_args);
    if (*score_cmd) return run_score(score_args);
    if (*eval_cmd) return run_eval(eval_args);
    if (*synth_cmd) return run_gen_synth(synth_args);
    if (*bench_cmd) return run_bench(bench_args);
  } catch (const UsageError& e) {
    return report_failure(kExitUsage, "usage", e.what());
  } catch (const mwpr::Error& e) {
    return report_failure(kExitData, std::string(mwpr::to_string(e.code())), e.what());
  } catch (const std::exception& e) {
    return report_failure(kExitData, "internal", e.what());
  }
  return kExitUsage;
}
