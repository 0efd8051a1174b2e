#pragma once

// Retrieval evaluation: run both systems over a query set, collect
// annotations (human CSV or signature-oracle labels) and score them.

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "mwpr/corpus.hpp"
#include "mwpr/vectorsim.hpp"

namespace mwpr {

enum class System { Tree, VectorSim };

std::string_view to_string(System s) noexcept;
System parse_system(std::string_view name);
/// "tree,vectorsim" -> {Tree, VectorSim}
std::vector<System> parse_systems(std::string_view csv);

struct TranscriptRow {
  std::string query_id;
  System system = System::Tree;
  std::size_t rank = 0;  // 0 on skip rows
  std::optional<std::string> result_id;
  std::optional<double> score;
  std::optional<std::string> skipped;  // reason, when the system could not run

  friend bool operator==(const TranscriptRow&, const TranscriptRow&) = default;
};

struct ProtocolOptions {
  std::vector<System> systems = {System::Tree, System::VectorSim};
  std::size_t k = 3;
  TfidfOptions tfidf;
};

/// Fits the baseline over every stored record, then asks each system for
/// the top-k of each query with the query itself excluded. Rows follow
/// query order, then system order, then rank.
std::vector<TranscriptRow> run_protocol(const IndexedCorpus& corpus,
                                        const std::vector<MWPRecord>& queries,
                                        const ProtocolOptions& options);

std::string transcript_to_jsonl(const std::vector<TranscriptRow>& rows);
std::vector<TranscriptRow> transcript_from_jsonl(std::string_view content);

struct AnnotationEntry {
  std::string query_id;
  std::string result_id;
  std::string system;
  int label_a = 0;
  int label_b = 0;

  friend bool operator==(const AnnotationEntry&, const AnnotationEntry&) = default;
};

class AnnotationSet {
 public:
  /// Throws InvalidArgument on non-binary labels or a repeated
  /// (queryId, resultId, system) key.
  void add(AnnotationEntry entry);
  const std::vector<AnnotationEntry>& entries() const noexcept {
    return entries_;
  }
  std::size_t size() const noexcept { return entries_.size(); }
  std::vector<std::string> systems() const;

 private:
  std::vector<AnnotationEntry> entries_;
  std::set<std::tuple<std::string, std::string, std::string>> keys_;
};

/// CSV with header queryId,resultId,system,labelA,labelB.
AnnotationSet parse_annotations_csv(std::string_view content);
AnnotationSet load_annotations_csv(const std::filesystem::path& file);
std::string annotations_to_csv(const AnnotationSet& set);

/// Labels every non-skip row 1 iff the result's signature equals the
/// query's (both annotators get the oracle label).
AnnotationSet oracle_annotations(const IndexedCorpus& corpus,
                                 const std::vector<MWPRecord>& queries,
                                 const std::vector<TranscriptRow>& rows);

enum class LabelSource { A, B, Consensus };
std::string_view to_string(LabelSource s) noexcept;

/// Percentage of positive labels among the entries of `system`.
double accuracy(const AnnotationSet& set, std::string_view system,
                LabelSource source);

/// 2x2 agreement table, rows = annotator A label, cols = annotator B label.
using AgreementTable = std::array<std::array<std::size_t, 2>, 2>;

AgreementTable agreement_table(const AnnotationSet& set);
double cohens_kappa(const AgreementTable& table);
double cohens_kappa(const AnnotationSet& set);

struct SystemScore {
  std::string system;
  std::size_t entries = 0;
  std::size_t positives_a = 0;
  std::size_t positives_b = 0;
  std::size_t positives_consensus = 0;
  double accuracy_a = 0.0;
  double accuracy_b = 0.0;
  double accuracy_consensus = 0.0;
};

struct EvalReport {
  std::string dataset;  // free-form label for the table
  LabelSource headline = LabelSource::Consensus;
  std::vector<SystemScore> systems;
  std::optional<double> kappa;  // absent with fewer than two entries
  AgreementTable table{};
};

EvalReport make_report(const AnnotationSet& set, std::string dataset = "corpus");
std::string report_to_json(const EvalReport& report);
/// Dataset | Method | Accuracy (%) layout.
std::string report_to_table(const EvalReport& report);

}  // namespace mwpr
