#pragma once

// Problem repository: dataset ingestion, signature buckets and the
// persisted index file.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mwpr/matcher.hpp"
#include "mwpr/record.hpp"

namespace mwpr {

inline constexpr int kIndexFormatVersion = 1;

struct IndexFailure {
  std::string id;
  std::string message;

  friend bool operator==(const IndexFailure&, const IndexFailure&) = default;
};

struct IndexStats {
  std::size_t total = 0;
  std::size_t indexed = 0;
  std::size_t failed = 0;
  std::size_t buckets = 0;
  std::size_t largest_bucket = 0;

  friend bool operator==(const IndexStats&, const IndexStats&) = default;
};

struct AddOutcome {
  bool indexed = false;
  std::optional<Signature> signature;
  std::optional<std::string> failure;
};

/// Records keyed by id plus signature -> ids buckets. Every stored record
/// is either in exactly one bucket or listed in failures().
class IndexedCorpus {
 public:
  /// Ids in each bucket are kept in ingestion order.
  using BucketMap = std::unordered_map<std::string, std::vector<std::string>>;

  std::size_t size() const noexcept { return entries_.size(); }
  bool contains(std::string_view id) const;
  const MWPRecord* find(std::string_view id) const;
  /// Position of `id` in ingestion order.
  std::optional<std::size_t> ordinal(std::string_view id) const;
  const MWPRecord& record_at(std::size_t ordinal) const {
    return entries_.at(ordinal).record;
  }
  const std::vector<std::string>& words_at(std::size_t ordinal) const {
    return entries_.at(ordinal).words;
  }
  const std::optional<Signature>& signature_at(std::size_t ordinal) const {
    return entries_.at(ordinal).signature;
  }

  /// Ordinals of the records in the bucket for `sig`, or nullptr.
  const std::vector<std::size_t>* bucket(const Signature& sig) const;
  BucketMap buckets() const;
  const std::vector<IndexFailure>& failures() const noexcept {
    return failures_;
  }
  IndexStats stats() const;

  /// Parses and buckets `record` (or records the parse failure).
  /// Throws DuplicateId when the id is already present.
  AddOutcome add(MWPRecord record);

  /// Inserts a record with an already-known outcome (used by load_index).
  void insert_loaded(MWPRecord record, std::optional<Signature> sig);
  void append_failure(IndexFailure failure) {
    failures_.push_back(std::move(failure));
  }

  friend bool operator==(const IndexedCorpus& a, const IndexedCorpus& b);

 private:
  struct Entry {
    MWPRecord record;
    std::optional<Signature> signature;
    std::vector<std::string> words;
  };

  std::size_t push_entry(MWPRecord record, std::optional<Signature> sig);

  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::size_t> by_id_;
  std::unordered_map<std::string, std::vector<std::size_t>> buckets_;
  std::vector<IndexFailure> failures_;
};

IndexedCorpus build_index(const std::vector<MWPRecord>& records);

/// MAWPS / ASDIV-a style JSON array (sQuestion/lEquations/lSolutions,
/// Body+Question/Formula/Answer, original_text/equation/ans).
std::vector<MWPRecord> import_mawps(const std::filesystem::path& file);
/// Native one-record-per-line format.
std::vector<MWPRecord> import_jsonl(const std::filesystem::path& file);
std::vector<MWPRecord> parse_jsonl(std::string_view content);
/// Dispatches on "mawps" or "jsonl".
std::vector<MWPRecord> import_corpus(const std::filesystem::path& file,
                                     std::string_view format);

std::string to_jsonl_line(const MWPRecord& record);
void write_jsonl(const std::filesystem::path& file,
                 const std::vector<MWPRecord>& records);

std::string serialize_index(const IndexedCorpus& corpus);
IndexedCorpus deserialize_index(std::string_view content);
void save_index(const IndexedCorpus& corpus, const std::filesystem::path& file);
IndexedCorpus load_index(const std::filesystem::path& file);

}  // namespace mwpr
