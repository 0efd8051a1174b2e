#pragma once

// Lexical baseline: TF-IDF vectors with cosine similarity.
//
//   tf(t, d) = raw count,  idf(t) = ln(N / df(t)) + 1,  vectors L2-normalized.

#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mwpr {

struct TfidfOptions {
  bool remove_stopwords = false;
  bool stem = false;  // plural-stripping "S" stemmer
};

struct ScoredDoc {
  std::string id;
  double score = 0.0;

  friend bool operator==(const ScoredDoc&, const ScoredDoc&) = default;
};

using SparseVector = std::vector<std::pair<int, double>>;  // sorted by term

class TfidfModel {
 public:
  static TfidfModel fit(const std::vector<std::pair<std::string, std::string>>& docs,
                        TfidfOptions options = {});

  std::size_t document_count() const noexcept { return ids_.size(); }
  std::size_t vocabulary_size() const noexcept { return vocabulary_.size(); }
  /// idf of a (post-analysis) term; 0 for unseen terms.
  double idf(std::string_view term) const;
  std::size_t document_frequency(std::string_view term) const;

  std::vector<std::string> analyze(std::string_view text) const;
  /// L2-normalized query vector; unseen terms dropped.
  SparseVector vectorize(std::string_view text) const;
  const SparseVector& document_vector(std::size_t ordinal) const {
    return vectors_.at(ordinal);
  }
  const std::string& document_id(std::size_t ordinal) const {
    return ids_.at(ordinal);
  }

  /// Top-k by cosine, ties broken by fit order.
  std::vector<ScoredDoc> query(std::string_view text, std::size_t k) const;

 private:
  TfidfOptions options_;
  std::vector<std::string> ids_;
  std::unordered_map<std::string, int> vocabulary_;
  std::vector<double> idf_;
  std::vector<std::size_t> df_;
  std::vector<SparseVector> vectors_;
  std::vector<std::vector<std::pair<std::size_t, double>>> postings_;
};

double cosine(const SparseVector& a, const SparseVector& b);

std::string s_stem(std::string word);
bool is_stopword(std::string_view word);

}  // namespace mwpr
