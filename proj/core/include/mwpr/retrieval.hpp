#pragma once

#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mwpr/corpus.hpp"
#include "mwpr/expr.hpp"

namespace mwpr {

inline constexpr std::size_t kDefaultTopK = 3;

struct MatchResult {
  std::string problem_id;
  std::size_t rank = 0;  // 1-based
  double lex_score = 0.0;
  std::string signature;

  friend bool operator==(const MatchResult&, const MatchResult&) = default;
};

struct QueryOptions {
  std::size_t k = kDefaultTopK;
  std::optional<std::string> query_text;
  std::optional<std::string> exclude_id;
};

/// Records sharing the query tree's signature, ordered by word-set Jaccard
/// against `query_text` (descending) and then by ingestion order.
std::vector<MatchResult> query(const IndexedCorpus& corpus,
                               const ExprTree& query_tree,
                               const QueryOptions& options);

struct RawQueryResult {
  ParsedEquation parsed;
  Signature signature;
  std::vector<MatchResult> results;
};

/// Parses `equation` against the numbers found in `text` and runs query().
RawQueryResult query_raw(const IndexedCorpus& corpus, std::string_view equation,
                         const QueryOptions& options);

AddOutcome add_problem(IndexedCorpus& corpus, MWPRecord record);

/// Single-writer / many-reader holder for an IndexedCorpus. Readers take an
/// immutable snapshot; add() copies, mutates and republishes, so a reader
/// never sees a half-applied insert.
class Repository {
 public:
  explicit Repository(IndexedCorpus corpus = {});

  std::shared_ptr<const IndexedCorpus> snapshot() const;
  AddOutcome add(MWPRecord record);

 private:
  mutable std::mutex publish_mu_;  // guards current_ pointer swaps only
  std::mutex writer_mu_;           // serializes writers
  std::shared_ptr<const IndexedCorpus> current_;
};

}  // namespace mwpr
