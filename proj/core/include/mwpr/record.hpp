#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mwpr {

/// One math word problem.
struct MWPRecord {
  std::string id;
  std::string text;
  std::string equation;
  std::vector<double> text_numbers;  // in order of appearance in `text`
  std::string source;
  std::optional<double> solution;

  friend bool operator==(const MWPRecord&, const MWPRecord&) = default;
};

/// Builds a record with `text_numbers` extracted from `text`.
MWPRecord make_record(std::string id, std::string text, std::string equation,
                      std::string source = "user",
                      std::optional<double> solution = std::nullopt);

/// Decimal numerals in `text`, left to right. Thousands separators
/// ("1,200") are folded; a trailing sentence period is not part of the
/// numeral.
std::vector<double> extract_numbers(std::string_view text);

/// Lowercased alphanumeric words, in order, duplicates kept.
std::vector<std::string> word_tokens(std::string_view text);

/// Sorted unique lowercased alphanumeric words.
std::vector<std::string> word_set(std::string_view text);

/// |A ∩ B| / |A ∪ B| over sorted unique word sets; 0 when both are empty.
double jaccard(const std::vector<std::string>& a,
               const std::vector<std::string>& b);

}  // namespace mwpr
