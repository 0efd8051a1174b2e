#include "mwpr/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "mwpr/error.hpp"
#include "mwpr/retrieval.hpp"
#include "mwpr/synth.hpp"

namespace mwpr {

double percentile(std::vector<double> samples, double p) {
  if (samples.empty()) return 0.0;
  std::sort(samples.begin(), samples.end());
  const double rank = std::ceil(p / 100.0 * static_cast<double>(samples.size()));
  const std::size_t idx =
      rank <= 1.0 ? 0 : std::min(samples.size(), static_cast<std::size_t>(rank)) - 1;
  return samples[idx];
}

LatencyReport run_latency_bench(const IndexedCorpus& corpus,
                                std::size_t queries, std::uint64_t seed,
                                std::size_t k) {
  std::vector<std::size_t> parseable;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (corpus.signature_at(i)) parseable.push_back(i);
  }
  if (parseable.empty()) {
    throw Error(ErrorCode::EmptyCorpus, "no parseable records to query",
                "bench");
  }
  Rng rng(seed);
  std::vector<double> samples;
  samples.reserve(queries);
  std::size_t sink = 0;
  for (std::size_t q = 0; q < queries; ++q) {
    const MWPRecord& r = corpus.record_at(parseable[rng.below(parseable.size())]);
    const auto start = std::chrono::steady_clock::now();
    auto res = query_raw(corpus, r.equation, QueryOptions{k, r.text, std::nullopt});
    const auto stop = std::chrono::steady_clock::now();
    sink += res.results.size();
    samples.push_back(
        std::chrono::duration<double, std::milli>(stop - start).count());
  }
  LatencyReport report;
  report.queries = queries;
  if (queries == 0 || sink == static_cast<std::size_t>(-1)) return report;
  report.mean_ms =
      std::accumulate(samples.begin(), samples.end(), 0.0) / samples.size();
  report.p50_ms = percentile(samples, 50);
  report.p90_ms = percentile(samples, 90);
  report.p99_ms = percentile(samples, 99);
  report.max_ms = *std::max_element(samples.begin(), samples.end());
  return report;
}

}  // namespace mwpr
