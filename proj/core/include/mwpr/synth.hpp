#pragma once

// Seeded generator for planted-duplicate evaluation corpora.
//
// Each family holds one seed problem, `duplicates` problems that reuse the
// seed's operation chain with different names, nouns and quantities, and
// `distractors` that copy the seed's wording but flip exactly one operator.

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "mwpr/record.hpp"

namespace mwpr {

/// mt19937_64 with modulo-rejection bounded draws, so a seed yields the same
/// stream on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi);
  /// Uniform in [0, 1).
  double unit();
  /// Fair coin.
  bool coin() { return (next() >> 63) != 0; }

  template <typename T>
  const T& pick(std::span<const T> items) {
    return items[below(items.size())];
  }

 private:
  std::mt19937_64 engine_;
};

struct SynthOptions {
  std::size_t n = 500;  // total problems
  std::size_t duplicates = 2;
  std::size_t distractors = 2;
  std::uint64_t seed = 42;
};

struct SynthCorpus {
  std::vector<MWPRecord> records;
  std::vector<std::string> seed_ids;
};

SynthCorpus generate_synthetic(const SynthOptions& options);

/// |words(seed) ∩ words(other)| / |words(seed)|.
double word_overlap(std::string_view seed, std::string_view other);

}  // namespace mwpr
