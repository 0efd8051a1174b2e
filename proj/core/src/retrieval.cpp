#include "mwpr/retrieval.hpp"

#include <algorithm>

#include "mwpr/error.hpp"
#include "mwpr/matcher.hpp"

namespace mwpr {

namespace {

struct Candidate {
  std::size_t ordinal;
  double score;
};

std::vector<MatchResult> rank_bucket(const IndexedCorpus& corpus,
                                     const Signature& sig,
                                     const QueryOptions& options) {
  if (options.k == 0) {
    throw Error(ErrorCode::InvalidArgument, "k must be at least 1", "query");
  }
  std::vector<MatchResult> out;
  const auto* bucket = corpus.bucket(sig);
  if (bucket == nullptr) return out;

  std::vector<std::string> query_words;
  if (options.query_text) query_words = word_set(*options.query_text);

  std::vector<Candidate> candidates;
  candidates.reserve(bucket->size());
  for (std::size_t ordinal : *bucket) {
    if (options.exclude_id &&
        corpus.record_at(ordinal).id == *options.exclude_id) {
      continue;
    }
    const double score =
        options.query_text ? jaccard(query_words, corpus.words_at(ordinal))
                           : 0.0;
    candidates.push_back({ordinal, score});
  }
  const std::size_t take = std::min(options.k, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + take,
                    candidates.end(),
                    [](const Candidate& a, const Candidate& b) {
                      if (a.score != b.score) return a.score > b.score;
                      return a.ordinal < b.ordinal;
                    });
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) {
    out.push_back(MatchResult{corpus.record_at(candidates[i].ordinal).id,
                              i + 1, candidates[i].score, sig.canonical});
  }
  return out;
}

}  // namespace

std::vector<MatchResult> query(const IndexedCorpus& corpus,
                               const ExprTree& query_tree,
                               const QueryOptions& options) {
  return rank_bucket(corpus, signature(query_tree), options);
}

RawQueryResult query_raw(const IndexedCorpus& corpus, std::string_view equation,
                         const QueryOptions& options) {
  MWPRecord transient;
  transient.id = "query";
  transient.equation = std::string(equation);
  if (options.query_text) {
    transient.text = *options.query_text;
    transient.text_numbers = extract_numbers(transient.text);
  }
  ParsedEquation parsed =
      parse_equation(transient.equation, transient.text_numbers);
  Signature sig = signature(parsed.tree);
  auto results = rank_bucket(corpus, sig, options);
  return RawQueryResult{std::move(parsed), std::move(sig), std::move(results)};
}

AddOutcome add_problem(IndexedCorpus& corpus, MWPRecord record) {
  return corpus.add(std::move(record));
}

Repository::Repository(IndexedCorpus corpus)
    : current_(std::make_shared<const IndexedCorpus>(std::move(corpus))) {}

std::shared_ptr<const IndexedCorpus> Repository::snapshot() const {
  std::lock_guard lock(publish_mu_);
  return current_;
}

AddOutcome Repository::add(MWPRecord record) {
  std::lock_guard writer(writer_mu_);
  auto base = snapshot();
  if (base->contains(record.id)) {
    throw Error(ErrorCode::DuplicateId, "id '" + record.id + "' already present");
  }
  auto next = std::make_shared<IndexedCorpus>(*base);
  AddOutcome outcome = next->add(std::move(record));
  {
    std::lock_guard lock(publish_mu_);
    current_ = std::move(next);
  }
  return outcome;
}

}  // namespace mwpr
