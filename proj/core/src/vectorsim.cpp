#include "mwpr/vectorsim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "mwpr/error.hpp"
#include "mwpr/record.hpp"

namespace mwpr {

namespace {

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void l2_normalize(SparseVector& v) {
  double norm = 0.0;
  for (const auto& [t, w] : v) norm += w * w;
  if (norm <= 0.0) return;
  norm = std::sqrt(norm);
  for (auto& [t, w] : v) w /= norm;
}

}  // namespace

std::string s_stem(std::string word) {
  if (ends_with(word, "ies") && !ends_with(word, "eies") &&
      !ends_with(word, "aies")) {
    word.replace(word.size() - 3, 3, "y");
  } else if (ends_with(word, "es") && !ends_with(word, "aes") &&
             !ends_with(word, "ees") && !ends_with(word, "oes")) {
    word.pop_back();
  } else if (ends_with(word, "s") && !ends_with(word, "us") &&
             !ends_with(word, "ss") && word.size() > 1) {
    word.pop_back();
  }
  return word;
}

bool is_stopword(std::string_view word) {
  static constexpr std::array<std::string_view, 40> kStopwords = {
      "a",    "an",   "and",  "are",  "as",   "at",   "be",   "by",
      "did",  "do",   "does", "for",  "from", "had",  "has",  "have",
      "he",   "her",  "his",  "how",  "if",   "in",   "is",   "it",
      "its",  "of",   "on",   "or",   "she",  "that", "the",  "their",
      "them", "then", "they", "this", "to",   "was",  "were", "with"};
  return std::binary_search(kStopwords.begin(), kStopwords.end(), word);
}

std::vector<std::string> TfidfModel::analyze(std::string_view text) const {
  std::vector<std::string> out;
  for (auto& w : word_tokens(text)) {
    if (options_.remove_stopwords && is_stopword(w)) continue;
    out.push_back(options_.stem ? s_stem(std::move(w)) : std::move(w));
  }
  return out;
}

TfidfModel TfidfModel::fit(
    const std::vector<std::pair<std::string, std::string>>& docs,
    TfidfOptions options) {
  if (docs.empty()) {
    throw Error(ErrorCode::EmptyCorpus, "cannot fit on zero documents",
                "vectorsim");
  }
  TfidfModel m;
  m.options_ = options;
  std::vector<std::map<int, std::size_t>> counts;
  counts.reserve(docs.size());
  for (const auto& [id, text] : docs) {
    m.ids_.push_back(id);
    std::map<int, std::size_t> tf;
    for (auto& term : m.analyze(text)) {
      auto [it, inserted] = m.vocabulary_.try_emplace(
          std::move(term), static_cast<int>(m.vocabulary_.size()));
      if (inserted) m.df_.push_back(0);
      ++tf[it->second];
    }
    for (const auto& [t, c] : tf) ++m.df_[t];
    counts.push_back(std::move(tf));
  }
  const double n = static_cast<double>(docs.size());
  m.idf_.resize(m.df_.size());
  for (std::size_t t = 0; t < m.df_.size(); ++t) {
    m.idf_[t] = std::log(n / static_cast<double>(m.df_[t])) + 1.0;
  }
  m.postings_.resize(m.df_.size());
  m.vectors_.reserve(counts.size());
  for (std::size_t d = 0; d < counts.size(); ++d) {
    SparseVector v;
    v.reserve(counts[d].size());
    for (const auto& [t, c] : counts[d]) {
      v.emplace_back(t, static_cast<double>(c) * m.idf_[t]);
    }
    l2_normalize(v);
    for (const auto& [t, w] : v) m.postings_[t].emplace_back(d, w);
    m.vectors_.push_back(std::move(v));
  }
  return m;
}

double TfidfModel::idf(std::string_view term) const {
  auto it = vocabulary_.find(std::string(term));
  return it == vocabulary_.end() ? 0.0 : idf_[it->second];
}

std::size_t TfidfModel::document_frequency(std::string_view term) const {
  auto it = vocabulary_.find(std::string(term));
  return it == vocabulary_.end() ? 0 : df_[it->second];
}

SparseVector TfidfModel::vectorize(std::string_view text) const {
  std::map<int, std::size_t> tf;
  for (const auto& term : analyze(text)) {
    if (auto it = vocabulary_.find(term); it != vocabulary_.end()) {
      ++tf[it->second];
    }
  }
  SparseVector v;
  v.reserve(tf.size());
  for (const auto& [t, c] : tf) {
    v.emplace_back(t, static_cast<double>(c) * idf_[t]);
  }
  l2_normalize(v);
  return v;
}

std::vector<ScoredDoc> TfidfModel::query(std::string_view text,
                                         std::size_t k) const {
  if (k == 0) {
    throw Error(ErrorCode::InvalidArgument, "k must be at least 1",
                "vectorsim");
  }
  const SparseVector q = vectorize(text);
  std::vector<double> scores(ids_.size(), 0.0);
  for (const auto& [t, w] : q) {
    for (const auto& [d, dw] : postings_[t]) scores[d] += w * dw;
  }
  std::vector<std::size_t> order(ids_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const std::size_t take = std::min(k, order.size());
  std::partial_sort(order.begin(), order.begin() + take, order.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (scores[a] != scores[b]) return scores[a] > scores[b];
                      return a < b;
                    });
  std::vector<ScoredDoc> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) {
    // Clamp float noise so self-similarity reads as exactly 1.
    const double s = std::clamp(scores[order[i]], 0.0, 1.0);
    out.push_back({ids_[order[i]], s});
  }
  return out;
}

double cosine(const SparseVector& a, const SparseVector& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (const auto& [t, w] : a) na += w * w;
  for (const auto& [t, w] : b) nb += w * w;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      dot += ia->second * ib->second;
      ++ia;
      ++ib;
    }
  }
  if (na <= 0.0 || nb <= 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace mwpr
