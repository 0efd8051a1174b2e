#include "mwpr/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "json_io.hpp"
#include "mwpr/error.hpp"

namespace mwpr {

using detail::json;

namespace detail {

json record_to_json(const MWPRecord& r, bool with_numbers) {
  json j = {{"id", r.id},
            {"text", r.text},
            {"equation", r.equation},
            {"source", r.source},
            {"solution", r.solution ? json(*r.solution) : json(nullptr)}};
  if (with_numbers) j["textNumbers"] = r.text_numbers;
  return j;
}

MWPRecord record_from_json(const json& j) {
  if (!j.is_object()) {
    throw Error(ErrorCode::InvalidRecord, "record must be a JSON object");
  }
  auto text_field = [&](const char* key, bool required) -> std::string {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) {
      if (required) {
        throw Error(ErrorCode::InvalidRecord,
                    std::string("missing field '") + key + "'");
      }
      return {};
    }
    if (!it->is_string()) {
      throw Error(ErrorCode::InvalidRecord,
                  std::string("field '") + key + "' must be a string");
    }
    return it->get<std::string>();
  };
  MWPRecord r;
  r.id = text_field("id", true);
  r.text = text_field("text", true);
  r.equation = text_field("equation", false);
  r.source = text_field("source", false);
  if (r.id.empty()) throw Error(ErrorCode::InvalidRecord, "empty id");
  if (r.text.empty()) {
    throw Error(ErrorCode::InvalidRecord, "record '" + r.id + "' has empty text");
  }
  if (r.source.empty()) r.source = "user";
  if (auto it = j.find("solution"); it != j.end() && !it->is_null()) {
    if (!it->is_number()) {
      throw Error(ErrorCode::InvalidRecord, "field 'solution' must be a number");
    }
    r.solution = it->get<double>();
  }
  if (auto it = j.find("textNumbers"); it != j.end()) {
    if (!it->is_array()) {
      throw Error(ErrorCode::InvalidRecord, "'textNumbers' must be an array");
    }
    for (const auto& v : *it) {
      if (!v.is_number()) {
        throw Error(ErrorCode::InvalidRecord, "'textNumbers' must hold numbers");
      }
      r.text_numbers.push_back(v.get<double>());
    }
  } else {
    r.text_numbers = extract_numbers(r.text);
  }
  return r;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// IndexedCorpus

bool IndexedCorpus::contains(std::string_view id) const {
  return by_id_.find(std::string(id)) != by_id_.end();
}

const MWPRecord* IndexedCorpus::find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  return it == by_id_.end() ? nullptr : &entries_[it->second].record;
}

std::optional<std::size_t> IndexedCorpus::ordinal(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

const std::vector<std::size_t>* IndexedCorpus::bucket(
    const Signature& sig) const {
  auto it = buckets_.find(sig.canonical);
  return it == buckets_.end() ? nullptr : &it->second;
}

IndexedCorpus::BucketMap IndexedCorpus::buckets() const {
  BucketMap out;
  for (const auto& [sig, ordinals] : buckets_) {
    auto& ids = out[sig];
    ids.reserve(ordinals.size());
    for (std::size_t o : ordinals) ids.push_back(entries_[o].record.id);
  }
  return out;
}

IndexStats IndexedCorpus::stats() const {
  IndexStats s;
  s.total = entries_.size();
  s.failed = failures_.size();
  s.indexed = s.total - s.failed;
  s.buckets = buckets_.size();
  for (const auto& [sig, ordinals] : buckets_) {
    s.largest_bucket = std::max(s.largest_bucket, ordinals.size());
  }
  return s;
}

std::size_t IndexedCorpus::push_entry(MWPRecord record,
                                      std::optional<Signature> sig) {
  if (contains(record.id)) {
    throw Error(ErrorCode::DuplicateId, "id '" + record.id + "' already present");
  }
  const std::size_t ordinal = entries_.size();
  by_id_.emplace(record.id, ordinal);
  if (sig) buckets_[sig->canonical].push_back(ordinal);
  auto words = word_set(record.text);
  entries_.push_back(Entry{std::move(record), std::move(sig), std::move(words)});
  return ordinal;
}

AddOutcome IndexedCorpus::add(MWPRecord record) {
  if (contains(record.id)) {
    throw Error(ErrorCode::DuplicateId, "id '" + record.id + "' already present");
  }
  AddOutcome outcome;
  try {
    outcome.signature = signature(parse_problem(record));
    outcome.indexed = true;
  } catch (const Error& e) {
    outcome.failure = e.what();
  }
  if (outcome.failure) failures_.push_back({record.id, *outcome.failure});
  push_entry(std::move(record), outcome.signature);
  return outcome;
}

void IndexedCorpus::insert_loaded(MWPRecord record,
                                  std::optional<Signature> sig) {
  push_entry(std::move(record), std::move(sig));
}

bool operator==(const IndexedCorpus& a, const IndexedCorpus& b) {
  if (a.entries_.size() != b.entries_.size()) return false;
  for (std::size_t i = 0; i < a.entries_.size(); ++i) {
    if (a.entries_[i].record != b.entries_[i].record) return false;
    if (a.entries_[i].signature != b.entries_[i].signature) return false;
  }
  return a.buckets_ == b.buckets_ && a.failures_ == b.failures_;
}

IndexedCorpus build_index(const std::vector<MWPRecord>& records) {
  IndexedCorpus corpus;
  for (const auto& r : records) corpus.add(r);
  return corpus;
}

// ---------------------------------------------------------------------------
// Import

namespace {

std::string read_file(const std::filesystem::path& file, ErrorCode missing) {
  std::ifstream in(file, std::ios::binary);
  if (!in) {
    throw Error(missing, "cannot open '" + file.string() + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::IoError, "read failed: " + file.string());
  return ss.str();
}

// "11 (apples)" -> 11
std::optional<double> leading_number(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_array() && !v.empty()) return leading_number(v.front());
  if (!v.is_string()) return std::nullopt;
  const auto nums = extract_numbers(v.get<std::string>());
  if (nums.empty()) return std::nullopt;
  return nums.front();
}

std::string id_string(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  return v.dump();
}

// ASDIV-a formulas carry the answer: "5+6=11".
std::string drop_answer_suffix(const std::string& formula) {
  const auto eq = formula.rfind('=');
  if (eq == std::string::npos || formula.find('=') != eq) return formula;
  std::string rhs = formula.substr(eq + 1);
  rhs.erase(std::remove_if(rhs.begin(), rhs.end(),
                           [](unsigned char c) { return std::isspace(c); }),
            rhs.end());
  if (rhs.empty()) return formula;
  double v = 0;
  auto res = std::from_chars(rhs.data(), rhs.data() + rhs.size(), v);
  if (res.ec != std::errc{} || res.ptr != rhs.data() + rhs.size()) {
    return formula;
  }
  return formula.substr(0, eq);
}

MWPRecord from_mawps_object(const json& obj, std::size_t position) {
  if (!obj.is_object()) {
    throw Error(ErrorCode::MalformedJson,
                "entry " + std::to_string(position) + " is not an object");
  }
  auto get = [&](std::initializer_list<const char*> keys) -> const json* {
    for (const char* k : keys) {
      auto it = obj.find(k);
      if (it != obj.end() && !it->is_null()) return &*it;
    }
    return nullptr;
  };

  MWPRecord r;
  std::string source = "mawps";
  if (const json* id = get({"id", "iIndex", "@ID", "ID", "Id"})) {
    r.id = id_string(*id);
  } else {
    r.id = "mawps-" + std::to_string(position);
  }

  if (const json* q = get({"text", "sQuestion", "original_text", "question"})) {
    if (q->is_string()) r.text = q->get<std::string>();
  } else {
    std::string body, question;
    if (const json* b = get({"Body"}); b && b->is_string()) {
      body = b->get<std::string>();
    }
    if (const json* q2 = get({"Question"}); q2 && q2->is_string()) {
      question = q2->get<std::string>();
    }
    r.text = body.empty() ? question
                          : (question.empty() ? body : body + " " + question);
    source = "asdiv-a";
  }
  if (r.text.empty()) {
    throw Error(ErrorCode::InvalidRecord,
                "record '" + r.id + "' has no problem text");
  }

  if (const json* eq = get({"equation", "lEquations", "Equation"})) {
    if (eq->is_array() && !eq->empty() && eq->front().is_string()) {
      r.equation = eq->front().get<std::string>();
    } else if (eq->is_string()) {
      r.equation = eq->get<std::string>();
    }
  } else if (const json* f = get({"Formula"})) {
    if (f->is_string()) r.equation = drop_answer_suffix(f->get<std::string>());
    source = "asdiv-a";
  }

  if (const json* sol = get({"solution", "lSolutions", "ans", "Answer"})) {
    r.solution = leading_number(*sol);
  }
  if (const json* src = get({"source"}); src && src->is_string()) {
    source = src->get<std::string>();
  }
  r.source = source;
  r.text_numbers = extract_numbers(r.text);
  return r;
}

void reject_duplicates(const std::vector<MWPRecord>& records) {
  std::unordered_set<std::string> seen;
  for (const auto& r : records) {
    if (!seen.insert(r.id).second) {
      throw Error(ErrorCode::DuplicateId, "id '" + r.id + "' appears twice");
    }
  }
}

}  // namespace

std::vector<MWPRecord> import_mawps(const std::filesystem::path& file) {
  const std::string content = read_file(file, ErrorCode::FileNotFound);
  json doc;
  try {
    doc = json::parse(content);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::MalformedJson, e.what(), file.string());
  }
  if (!doc.is_array()) {
    throw Error(ErrorCode::MalformedJson, "expected a JSON array",
                file.string());
  }
  std::vector<MWPRecord> out;
  out.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    out.push_back(from_mawps_object(doc[i], i));
  }
  reject_duplicates(out);
  return out;
}

std::vector<MWPRecord> parse_jsonl(std::string_view content) {
  std::vector<MWPRecord> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    auto end = content.find('\n', pos);
    if (end == std::string_view::npos) end = content.size();
    std::string_view line = content.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::MalformedJson, e.what(),
                  "line " + std::to_string(line_no));
    }
    try {
      auto r = detail::record_from_json(j);
      out.push_back(std::move(r));
    } catch (const Error& e) {
      throw Error(e.code(), e.message(), "line " + std::to_string(line_no));
    }
  }
  reject_duplicates(out);
  return out;
}

std::vector<MWPRecord> import_jsonl(const std::filesystem::path& file) {
  return parse_jsonl(read_file(file, ErrorCode::FileNotFound));
}

std::vector<MWPRecord> import_corpus(const std::filesystem::path& file,
                                     std::string_view format) {
  if (format == "mawps") return import_mawps(file);
  if (format == "jsonl") return import_jsonl(file);
  throw Error(ErrorCode::InvalidArgument,
              "unknown format '" + std::string(format) + "'");
}

std::string to_jsonl_line(const MWPRecord& record) {
  return detail::record_to_json(record).dump();
}

void write_jsonl(const std::filesystem::path& file,
                 const std::vector<MWPRecord>& records) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + file.string() + "'");
  for (const auto& r : records) out << to_jsonl_line(r) << '\n';
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + file.string());
}

// ---------------------------------------------------------------------------
// Index file

std::string serialize_index(const IndexedCorpus& corpus) {
  json records = json::array();
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    records.push_back(detail::record_to_json(corpus.record_at(i), true));
  }
  json buckets = json::object();
  for (const auto& [sig, ids] : corpus.buckets()) buckets[sig] = ids;
  json failures = json::array();
  for (const auto& f : corpus.failures()) {
    failures.push_back(json::array({f.id, f.message}));
  }
  json doc = {{"version", kIndexFormatVersion},
              {"records", std::move(records)},
              {"buckets", std::move(buckets)},
              {"failures", std::move(failures)}};
  return doc.dump();
}

IndexedCorpus deserialize_index(std::string_view content) {
  auto malformed = [](const std::string& why) {
    return Error(ErrorCode::MalformedIndexFile, why);
  };
  json doc;
  try {
    doc = json::parse(content);
  } catch (const json::parse_error& e) {
    throw malformed(e.what());
  }
  if (!doc.is_object()) throw malformed("top level is not an object");
  auto version = doc.find("version");
  if (version == doc.end() || !version->is_number_integer()) {
    throw malformed("missing version field");
  }
  if (version->get<long long>() != kIndexFormatVersion) {
    throw Error(ErrorCode::VersionMismatch,
                "index version " + version->dump() + ", expected " +
                    std::to_string(kIndexFormatVersion));
  }
  const auto records = doc.find("records");
  const auto buckets = doc.find("buckets");
  const auto failures = doc.find("failures");
  if (records == doc.end() || !records->is_array() || buckets == doc.end() ||
      !buckets->is_object() || failures == doc.end() ||
      !failures->is_array()) {
    throw malformed("records/buckets/failures missing or mistyped");
  }

  // id -> signature, and per-signature expected order.
  std::unordered_map<std::string, std::string> sig_of;
  for (const auto& [sig, ids] : buckets->items()) {
    if (!is_valid_signature(sig)) throw malformed("bad signature '" + sig + "'");
    if (!ids.is_array()) throw malformed("bucket is not an array");
    for (const auto& id : ids) {
      if (!id.is_string()) throw malformed("bucket id is not a string");
      if (!sig_of.emplace(id.get<std::string>(), sig).second) {
        throw malformed("id in two buckets: " + id.get<std::string>());
      }
    }
  }

  IndexedCorpus corpus;
  try {
    for (const auto& rj : *records) {
      MWPRecord r = detail::record_from_json(rj);
      std::optional<Signature> sig;
      if (auto it = sig_of.find(r.id); it != sig_of.end()) {
        sig = Signature{it->second};
      }
      corpus.insert_loaded(std::move(r), std::move(sig));
    }
  } catch (const Error& e) {
    throw malformed(e.what());
  }
  for (const auto& [id, sig] : sig_of) {
    if (!corpus.contains(id)) throw malformed("bucket references unknown id " + id);
  }
  for (const auto& f : *failures) {
    if (!f.is_array() || f.size() != 2 || !f[0].is_string() ||
        !f[1].is_string()) {
      throw malformed("failure entry must be [id, message]");
    }
    corpus.append_failure({f[0].get<std::string>(), f[1].get<std::string>()});
  }
  // Bucket order in the file must agree with ingestion order.
  const auto rebuilt = corpus.buckets();
  for (const auto& [sig, ids] : buckets->items()) {
    auto it = rebuilt.find(sig);
    if (it == rebuilt.end() || json(it->second) != ids) {
      throw malformed("bucket order disagrees with record order for " + sig);
    }
  }
  return corpus;
}

void save_index(const IndexedCorpus& corpus, const std::filesystem::path& file) {
  const std::string body = serialize_index(corpus);
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + file.string() + "'");
  out << body << '\n';
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + file.string());
}

IndexedCorpus load_index(const std::filesystem::path& file) {
  return deserialize_index(read_file(file, ErrorCode::IoError));
}

}  // namespace mwpr
