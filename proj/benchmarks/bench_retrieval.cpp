#include <benchmark/benchmark.h>

#include <map>

#include "mwpr/matcher.hpp"
#include "mwpr/retrieval.hpp"
#include "mwpr/synth.hpp"

namespace {

const mwpr::SynthCorpus& synth(std::size_t n) {
  static std::map<std::size_t, mwpr::SynthCorpus> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, mwpr::generate_synthetic({n, 2, 2, 42})).first;
  return it->second;
}

void BM_BuildIndex(benchmark::State& state) {
  const auto& records = synth(static_cast<std::size_t>(state.range(0))).records;
  for (auto _ : state) benchmark::DoNotOptimize(mwpr::build_index(records));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BuildIndex)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_QueryRaw(benchmark::State& state) {
  const auto corpus = mwpr::build_index(synth(static_cast<std::size_t>(state.range(0))).records);
  mwpr::Rng rng(7);
  for (auto _ : state) {
    const auto& r = corpus.record_at(rng.below(corpus.size()));
    benchmark::DoNotOptimize(mwpr::query_raw(corpus, r.equation, {3, r.text, std::nullopt}));
  }
}
BENCHMARK(BM_QueryRaw)->Arg(1000)->Arg(10000)->Unit(benchmark::kMicrosecond);

void BM_ParseProblem(benchmark::State& state) {
  const auto& records = synth(1000).records;
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mwpr::parse_problem(records[i++ % records.size()]));
  }
}
BENCHMARK(BM_ParseProblem);

void BM_Signature(benchmark::State& state) {
  const auto& records = synth(1000).records;
  std::vector<mwpr::ExprTree> trees;
  for (const auto& r : records) trees.push_back(mwpr::parse_problem(r));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(mwpr::signature(trees[i++ % trees.size()]));
}
BENCHMARK(BM_Signature);

}  // namespace

BENCHMARK_MAIN();
