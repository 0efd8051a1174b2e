#include "mwpr/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "json_io.hpp"
#include "mwpr/error.hpp"
#include "mwpr/retrieval.hpp"

namespace mwpr {

using detail::json;

std::string_view to_string(System s) noexcept {
  return s == System::Tree ? "tree" : "vectorsim";
}

System parse_system(std::string_view name) {
  if (name == "tree") return System::Tree;
  if (name == "vectorsim") return System::VectorSim;
  throw Error(ErrorCode::InvalidArgument,
              "unknown system '" + std::string(name) + "'");
}

std::vector<System> parse_systems(std::string_view csv) {
  std::vector<System> out;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    auto comma = csv.find(',', pos);
    if (comma == std::string_view::npos) comma = csv.size();
    auto part = csv.substr(pos, comma - pos);
    while (!part.empty() && part.front() == ' ') part.remove_prefix(1);
    while (!part.empty() && part.back() == ' ') part.remove_suffix(1);
    if (!part.empty()) {
      const System s = parse_system(part);
      if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    }
    pos = comma + 1;
  }
  if (out.empty()) {
    throw Error(ErrorCode::InvalidArgument, "no systems selected");
  }
  return out;
}

std::string_view to_string(LabelSource s) noexcept {
  switch (s) {
    case LabelSource::A: return "A";
    case LabelSource::B: return "B";
    case LabelSource::Consensus: return "consensus";
  }
  return "consensus";
}

// ---------------------------------------------------------------------------
// Protocol

std::vector<TranscriptRow> run_protocol(const IndexedCorpus& corpus,
                                        const std::vector<MWPRecord>& queries,
                                        const ProtocolOptions& options) {
  if (queries.empty()) {
    throw Error(ErrorCode::InvalidArgument, "no queries", "eval");
  }
  if (options.k == 0) {
    throw Error(ErrorCode::InvalidArgument, "k must be at least 1", "eval");
  }
  const bool want_vectorsim =
      std::find(options.systems.begin(), options.systems.end(),
                System::VectorSim) != options.systems.end();
  std::optional<TfidfModel> model;
  if (want_vectorsim && corpus.size() > 0) {
    std::vector<std::pair<std::string, std::string>> docs;
    docs.reserve(corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      docs.emplace_back(corpus.record_at(i).id, corpus.record_at(i).text);
    }
    model = TfidfModel::fit(docs, options.tfidf);
  }

  std::vector<TranscriptRow> rows;
  for (const auto& q : queries) {
    for (System system : options.systems) {
      if (system == System::Tree) {
        std::vector<MatchResult> results;
        try {
          const ExprTree tree = parse_problem(q);
          results = query(corpus, tree, QueryOptions{options.k, q.text, q.id});
        } catch (const Error& e) {
          rows.push_back({q.id, system, 0, std::nullopt, std::nullopt, e.what()});
          continue;
        }
        for (const auto& r : results) {
          rows.push_back({q.id, system, r.rank, r.problem_id, r.lex_score,
                          std::nullopt});
        }
      } else {
        if (!model) continue;
        std::size_t rank = 0;
        for (const auto& hit : model->query(q.text, options.k + 1)) {
          if (hit.id == q.id) continue;
          if (rank == options.k) break;
          rows.push_back({q.id, system, ++rank, hit.id, hit.score, std::nullopt});
        }
      }
    }
  }
  return rows;
}

std::string transcript_to_jsonl(const std::vector<TranscriptRow>& rows) {
  std::string out;
  for (const auto& r : rows) {
    json j = {{"queryId", r.query_id},
              {"system", std::string(to_string(r.system))},
              {"rank", r.rank},
              {"resultId", r.result_id ? json(*r.result_id) : json(nullptr)},
              {"score", r.score ? json(*r.score) : json(nullptr)}};
    if (r.skipped) j["skipped"] = *r.skipped;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<TranscriptRow> transcript_from_jsonl(std::string_view content) {
  std::vector<TranscriptRow> rows;
  std::istringstream in{std::string(content)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      TranscriptRow r;
      r.query_id = j.at("queryId").get<std::string>();
      r.system = parse_system(j.at("system").get<std::string>());
      r.rank = j.at("rank").get<std::size_t>();
      if (!j.at("resultId").is_null()) r.result_id = j["resultId"].get<std::string>();
      if (!j.at("score").is_null()) r.score = j["score"].get<double>();
      if (j.contains("skipped")) r.skipped = j["skipped"].get<std::string>();
      rows.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::MalformedJson, e.what(),
                  "transcript line " + std::to_string(line_no));
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Annotations

void AnnotationSet::add(AnnotationEntry entry) {
  auto binary = [](int v) { return v == 0 || v == 1; };
  if (!binary(entry.label_a) || !binary(entry.label_b)) {
    throw Error(ErrorCode::InvalidArgument, "labels must be 0 or 1");
  }
  if (!keys_.emplace(entry.query_id, entry.result_id, entry.system).second) {
    throw Error(ErrorCode::InvalidArgument,
                "duplicate annotation for (" + entry.query_id + ", " +
                    entry.result_id + ", " + entry.system + ")");
  }
  entries_.push_back(std::move(entry));
}

std::vector<std::string> AnnotationSet::systems() const {
  std::vector<std::string> out;
  for (const auto& e : entries_) {
    if (std::find(out.begin(), out.end(), e.system) == out.end()) {
      out.push_back(e.system);
    }
  }
  return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

int parse_label(const std::string& s, std::size_t line_no) {
  if (s == "0") return 0;
  if (s == "1") return 1;
  throw Error(ErrorCode::InvalidArgument, "label '" + s + "' is not 0/1",
              "annotations line " + std::to_string(line_no));
}

}  // namespace

AnnotationSet parse_annotations_csv(std::string_view content) {
  AnnotationSet set;
  std::istringstream in{std::string(content)};
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto fields = split_csv_line(line);
    if (!header_seen) {
      header_seen = true;
      const std::vector<std::string> expected = {"queryId", "resultId", "system",
                                                 "labelA", "labelB"};
      if (fields != expected) {
        throw Error(ErrorCode::InvalidArgument,
                    "expected header queryId,resultId,system,labelA,labelB",
                    "annotations");
      }
      continue;
    }
    if (fields.size() != 5) {
      throw Error(ErrorCode::InvalidArgument, "expected 5 fields",
                  "annotations line " + std::to_string(line_no));
    }
    set.add({fields[0], fields[1], fields[2], parse_label(fields[3], line_no),
             parse_label(fields[4], line_no)});
  }
  return set;
}

AnnotationSet load_annotations_csv(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::FileNotFound, "cannot open '" + file.string() + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_annotations_csv(ss.str());
}

std::string annotations_to_csv(const AnnotationSet& set) {
  std::string out = "queryId,resultId,system,labelA,labelB\n";
  for (const auto& e : set.entries()) {
    out += csv_field(e.query_id) + "," + csv_field(e.result_id) + "," +
           csv_field(e.system) + "," + std::to_string(e.label_a) + "," +
           std::to_string(e.label_b) + "\n";
  }
  return out;
}

AnnotationSet oracle_annotations(const IndexedCorpus& corpus,
                                 const std::vector<MWPRecord>& queries,
                                 const std::vector<TranscriptRow>& rows) {
  std::unordered_map<std::string, std::optional<Signature>> query_sig;
  for (const auto& q : queries) {
    std::optional<Signature> sig;
    try {
      sig = signature(parse_problem(q));
    } catch (const Error&) {
    }
    query_sig.emplace(q.id, std::move(sig));
  }
  AnnotationSet set;
  for (const auto& row : rows) {
    if (!row.result_id) continue;
    int label = 0;
    auto qs = query_sig.find(row.query_id);
    const auto ordinal = corpus.ordinal(*row.result_id);
    if (qs != query_sig.end() && qs->second && ordinal) {
      const auto& rs = corpus.signature_at(*ordinal);
      label = (rs && *rs == *qs->second) ? 1 : 0;
    }
    set.add({row.query_id, *row.result_id, std::string(to_string(row.system)),
             label, label});
  }
  return set;
}

// ---------------------------------------------------------------------------
// Metrics

double accuracy(const AnnotationSet& set, std::string_view system,
                LabelSource source) {
  std::size_t total = 0;
  std::size_t positive = 0;
  for (const auto& e : set.entries()) {
    if (e.system != system) continue;
    ++total;
    switch (source) {
      case LabelSource::A: positive += e.label_a; break;
      case LabelSource::B: positive += e.label_b; break;
      case LabelSource::Consensus:
        positive += (e.label_a == 1 && e.label_b == 1) ? 1 : 0;
        break;
    }
  }
  if (total == 0) {
    throw Error(ErrorCode::NoEntries,
                "no annotations for system '" + std::string(system) + "'");
  }
  return 100.0 * static_cast<double>(positive) / static_cast<double>(total);
}

AgreementTable agreement_table(const AnnotationSet& set) {
  AgreementTable t{};
  for (const auto& e : set.entries()) ++t[e.label_a][e.label_b];
  return t;
}

double cohens_kappa(const AgreementTable& t) {
  const double n =
      static_cast<double>(t[0][0] + t[0][1] + t[1][0] + t[1][1]);
  if (n < 2) {
    throw Error(ErrorCode::InsufficientData,
                "kappa needs at least two annotated items");
  }
  const double p_o = static_cast<double>(t[0][0] + t[1][1]) / n;
  const double a1 = static_cast<double>(t[1][0] + t[1][1]) / n;
  const double b1 = static_cast<double>(t[0][1] + t[1][1]) / n;
  const double p_e = a1 * b1 + (1.0 - a1) * (1.0 - b1);
  if (p_e == 1.0) return 1.0;  // both annotators used one label throughout
  return (p_o - p_e) / (1.0 - p_e);
}

double cohens_kappa(const AnnotationSet& set) {
  return cohens_kappa(agreement_table(set));
}

EvalReport make_report(const AnnotationSet& set, std::string dataset) {
  EvalReport report;
  report.dataset = std::move(dataset);
  for (const auto& name : set.systems()) {
    SystemScore s;
    s.system = name;
    for (const auto& e : set.entries()) {
      if (e.system != name) continue;
      ++s.entries;
      s.positives_a += e.label_a;
      s.positives_b += e.label_b;
      s.positives_consensus += (e.label_a == 1 && e.label_b == 1) ? 1 : 0;
    }
    s.accuracy_a = accuracy(set, name, LabelSource::A);
    s.accuracy_b = accuracy(set, name, LabelSource::B);
    s.accuracy_consensus = accuracy(set, name, LabelSource::Consensus);
    report.systems.push_back(std::move(s));
  }
  report.table = agreement_table(set);
  if (set.size() >= 2) report.kappa = cohens_kappa(report.table);
  return report;
}

std::string report_to_json(const EvalReport& report) {
  json systems = json::array();
  for (const auto& s : report.systems) {
    systems.push_back({{"system", s.system},
                       {"entries", s.entries},
                       {"accuracy",
                        {{"A", s.accuracy_a},
                         {"B", s.accuracy_b},
                         {"consensus", s.accuracy_consensus}}},
                       {"positives",
                        {{"A", s.positives_a},
                         {"B", s.positives_b},
                         {"consensus", s.positives_consensus}}}});
  }
  json j = {{"dataset", report.dataset},
            {"headline", std::string(to_string(report.headline))},
            {"systems", std::move(systems)},
            {"kappa", report.kappa ? json(*report.kappa) : json(nullptr)},
            {"agreement",
             {{report.table[0][0], report.table[0][1]},
              {report.table[1][0], report.table[1][1]}}}};
  return j.dump(2);
}

std::string report_to_table(const EvalReport& report) {
  auto headline = [&](const SystemScore& s) {
    switch (report.headline) {
      case LabelSource::A: return s.accuracy_a;
      case LabelSource::B: return s.accuracy_b;
      case LabelSource::Consensus: return s.accuracy_consensus;
    }
    return s.accuracy_consensus;
  };
  std::size_t w_data = std::max<std::size_t>(7, report.dataset.size());
  std::size_t w_method = 6;
  for (const auto& s : report.systems) w_method = std::max(w_method, s.system.size());
  const std::string acc_head =
      "Accuracy (%, " + std::string(to_string(report.headline)) + ")";

  auto pad = [](std::string s, std::size_t w) {
    s.resize(std::max(w, s.size()), ' ');
    return s;
  };
  std::string out = pad("Dataset", w_data) + " | " + pad("Method", w_method) +
                    " | " + acc_head + "\n";
  out += std::string(w_data, '-') + "-+-" + std::string(w_method, '-') + "-+-" +
         std::string(acc_head.size(), '-') + "\n";
  bool first = true;
  for (const auto& s : report.systems) {
    char acc[32];
    std::snprintf(acc, sizeof acc, "%.2f", headline(s));
    out += pad(first ? report.dataset : "", w_data) + " | " +
           pad(s.system, w_method) + " | " + acc + "\n";
    first = false;
  }
  if (report.kappa) {
    char k[48];
    std::snprintf(k, sizeof k, "Cohen's kappa: %.3f\n", *report.kappa);
    out += k;
  }
  return out;
}

}  // namespace mwpr
