#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "mwpr/record.hpp"
#include "mwpr/synth.hpp"

using namespace mwpr;

using Numbers = std::vector<double>;

TEST(ExtractNumbers, Basic) {
  EXPECT_EQ(extract_numbers("John had 5 apples, and Mary had 6 oranges."), (Numbers{5, 6}));
  EXPECT_EQ(extract_numbers("no numbers here"), Numbers{});
  EXPECT_EQ(extract_numbers(""), Numbers{});
}

TEST(ExtractNumbers, DecimalsAndSentencePeriods) {
  EXPECT_EQ(extract_numbers("It costs 2.50 dollars. Then 3."), (Numbers{2.5, 3}));
  EXPECT_EQ(extract_numbers("add .5 cups"), (Numbers{0.5}));
}

TEST(ExtractNumbers, ThousandsSeparators) {
  EXPECT_EQ(extract_numbers("a town of 1,200 people"), (Numbers{1200}));
  EXPECT_EQ(extract_numbers("1,234,567 stars"), (Numbers{1234567}));
  EXPECT_EQ(extract_numbers("pick 3,4 and 5"), (Numbers{3, 4, 5}));
}

TEST(ExtractNumbers, GluedToLetters) {
  EXPECT_EQ(extract_numbers("the day, N0 and x2 but 7"), (Numbers{7}));
}

TEST(WordTokens, LowercaseAlphanumeric) {
  EXPECT_EQ(word_tokens("Sam has 3 pens; Sam's pens!"),
            (std::vector<std::string>{"sam", "has", "3", "pens", "sam", "s", "pens"}));
  EXPECT_EQ(word_set("b a B a"), (std::vector<std::string>{"a", "b"}));
}

TEST(Jaccard, HandComputed) {
  EXPECT_DOUBLE_EQ(jaccard(word_set("a b c"), word_set("b c d")), 2.0 / 4.0);
  EXPECT_DOUBLE_EQ(jaccard(word_set("a b"), word_set("a b")), 1.0);
  EXPECT_DOUBLE_EQ(jaccard(word_set("a"), word_set("b")), 0.0);
  EXPECT_DOUBLE_EQ(jaccard({}, {}), 0.0);
  EXPECT_DOUBLE_EQ(jaccard(word_set("a"), {}), 0.0);
}

// Set-based oracle over random word bags.
TEST(Jaccard, MatchesSetOracle) {
  Rng rng(5);
  const std::vector<std::string> vocab = {"a", "b", "c", "d", "e", "f", "g", "h"};
  for (int i = 0; i < 500; ++i) {
    std::string x, y;
    std::set<std::string> sx, sy;
    for (int j = 0, n = static_cast<int>(rng.below(6)); j < n; ++j) {
      const auto& w = vocab[rng.below(vocab.size())];
      x += w + " ";
      sx.insert(w);
    }
    for (int j = 0, n = static_cast<int>(rng.below(6)); j < n; ++j) {
      const auto& w = vocab[rng.below(vocab.size())];
      y += w + " ";
      sy.insert(w);
    }
    std::set<std::string> inter, uni;
    std::set_intersection(sx.begin(), sx.end(), sy.begin(), sy.end(),
                          std::inserter(inter, inter.end()));
    std::set_union(sx.begin(), sx.end(), sy.begin(), sy.end(),
                   std::inserter(uni, uni.end()));
    const double expected =
        uni.empty() ? 0.0 : static_cast<double>(inter.size()) / static_cast<double>(uni.size());
    EXPECT_DOUBLE_EQ(jaccard(word_set(x), word_set(y)), expected);
    EXPECT_DOUBLE_EQ(jaccard(word_set(x), word_set(y)), jaccard(word_set(y), word_set(x)));
  }
}

TEST(MakeRecord, ExtractsNumbers) {
  const auto r = make_record("id", "Tom has 4 and 9", "x = 4 + 9", "mawps", 13.0);
  EXPECT_EQ(r.text_numbers, (Numbers{4, 9}));
  EXPECT_EQ(r.source, "mawps");
  ASSERT_TRUE(r.solution.has_value());
  EXPECT_DOUBLE_EQ(*r.solution, 13.0);
}
