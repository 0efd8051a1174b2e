#include "mwpr/record.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace mwpr {

namespace {

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }
bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)); }

}  // namespace

MWPRecord make_record(std::string id, std::string text, std::string equation,
                      std::string source, std::optional<double> solution) {
  MWPRecord r;
  r.id = std::move(id);
  r.text = std::move(text);
  r.equation = std::move(equation);
  r.text_numbers = extract_numbers(r.text);
  r.source = std::move(source);
  r.solution = solution;
  return r;
}

std::vector<double> extract_numbers(std::string_view text) {
  std::vector<double> out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    const bool leading_dot =
        text[i] == '.' && i + 1 < n && is_digit(text[i + 1]) &&
        (i == 0 || !is_alnum(text[i - 1]));
    if (!is_digit(text[i]) && !leading_dot) {
      ++i;
      continue;
    }
    // Digits glued to letters (e.g. "N0", "3rd") are not quantities.
    if (i > 0 && std::isalpha(static_cast<unsigned char>(text[i - 1]))) {
      while (i < n && is_alnum(text[i])) ++i;
      continue;
    }
    std::string digits;
    bool seen_dot = false;
    while (i < n) {
      const char c = text[i];
      if (is_digit(c)) {
        digits += c;
        ++i;
      } else if (c == ',' && !seen_dot && i + 3 < n && is_digit(text[i + 1]) &&
                 is_digit(text[i + 2]) && is_digit(text[i + 3]) &&
                 (i + 4 >= n || !is_digit(text[i + 4]))) {
        i += 1;  // thousands separator
      } else if (c == '.' && !seen_dot && i + 1 < n && is_digit(text[i + 1])) {
        seen_dot = true;
        digits += c;
        ++i;
      } else {
        break;
      }
    }
    if (digits.front() == '.') digits.insert(digits.begin(), '0');
    double value = 0.0;
    std::from_chars(digits.data(), digits.data() + digits.size(), value);
    out.push_back(value);
  }
  return out;
}

std::vector<std::string> word_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (is_alnum(c)) {
      cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::vector<std::string> word_set(std::string_view text) {
  auto words = word_tokens(text);
  std::sort(words.begin(), words.end());
  words.erase(std::unique(words.begin(), words.end()), words.end());
  return words;
}

double jaccard(const std::vector<std::string>& a,
               const std::vector<std::string>& b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t common = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++common;
      ++ia;
      ++ib;
    }
  }
  const std::size_t unite = a.size() + b.size() - common;
  return static_cast<double>(common) / static_cast<double>(unite);
}

}  // namespace mwpr
