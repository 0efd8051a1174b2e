#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mwpr/corpus.hpp"

namespace mwpr {

struct LatencyReport {
  std::size_t queries = 0;
  double mean_ms = 0.0;
  double p50_ms = 0.0;
  double p90_ms = 0.0;
  double p99_ms = 0.0;
  double max_ms = 0.0;
};

/// Nearest-rank percentile of an unsorted sample (p in [0, 100]).
double percentile(std::vector<double> samples, double p);

/// Times `queries` end-to-end raw queries (parse + lookup + rank) whose
/// equation and text are drawn, with replacement, from the corpus's
/// parseable records using a seeded Rng.
LatencyReport run_latency_bench(const IndexedCorpus& corpus,
                                std::size_t queries, std::uint64_t seed,
                                std::size_t k = 3);

}  // namespace mwpr
