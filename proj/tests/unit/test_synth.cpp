#include <gtest/gtest.h>

#include <map>
#include <set>

#include "mwpr/corpus.hpp"
#include "mwpr/matcher.hpp"
#include "mwpr/synth.hpp"

using namespace mwpr;

namespace {

std::string family_of(const std::string& id) { return id.substr(0, id.find('-')); }
std::string role_of(const std::string& id) { return id.substr(id.find('-') + 1, 3); }

}  // namespace

TEST(Rng, Deterministic) {
  Rng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    EXPECT_EQ(x, b.next());
    (void)c;
  }
  EXPECT_NE(Rng(42).next(), Rng(43).next());
}

TEST(Rng, BoundedDraws) {
  Rng rng(1);
  std::vector<int> counts(6, 0);
  for (int i = 0; i < 60000; ++i) {
    const auto v = rng.below(6);
    ASSERT_LT(v, 6u);
    ++counts[v];
    const auto w = rng.between(-3, 3);
    ASSERT_GE(w, -3);
    ASSERT_LE(w, 3);
    const double u = rng.unit();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
  for (int c : counts) EXPECT_NEAR(c, 10000, 500);
}

TEST(Synth, SizeAndIds) {
  const auto s = generate_synthetic({500, 2, 2, 42});
  ASSERT_EQ(s.records.size(), 500u);
  EXPECT_EQ(s.seed_ids.size(), 100u);
  std::set<std::string> ids;
  for (const auto& r : s.records) {
    EXPECT_TRUE(ids.insert(r.id).second) << r.id;
    EXPECT_EQ(r.source, "synthetic");
    EXPECT_TRUE(r.solution.has_value());
  }
  EXPECT_EQ(s.records[0].id, s.seed_ids[0]);
  EXPECT_EQ(role_of(s.records[1].id), "dup");
  EXPECT_EQ(role_of(s.records[3].id), "dis");
}

TEST(Synth, TruncatesLastFamily) {
  EXPECT_EQ(generate_synthetic({7, 2, 2, 1}).records.size(), 7u);
  EXPECT_TRUE(generate_synthetic({0, 2, 2, 1}).records.empty());
  EXPECT_EQ(generate_synthetic({10, 0, 0, 1}).seed_ids.size(), 10u);
}

TEST(Synth, SeedReproducible) {
  const auto a = generate_synthetic({300, 2, 2, 77});
  const auto b = generate_synthetic({300, 2, 2, 77});
  const auto c = generate_synthetic({300, 2, 2, 78});
  EXPECT_EQ(a.records, b.records);
  EXPECT_NE(a.records, c.records);
}

TEST(Synth, PlantedStructure) {
  const auto s = generate_synthetic({500, 2, 2, 42});
  const auto index = build_index(s.records);
  ASSERT_TRUE(index.failures().empty());
  std::map<std::string, Signature> seed_sig;
  std::map<std::string, std::string> seed_text;
  for (std::size_t i = 0; i < index.size(); ++i) {
    const auto& r = index.record_at(i);
    if (role_of(r.id) == "see") {
      seed_sig[family_of(r.id)] = *index.signature_at(i);
      seed_text[family_of(r.id)] = r.text;
    }
  }
  for (std::size_t i = 0; i < index.size(); ++i) {
    const auto& r = index.record_at(i);
    const std::string fam = family_of(r.id);
    const std::string role = role_of(r.id);
    if (role == "dup") {
      EXPECT_EQ(*index.signature_at(i), seed_sig[fam]) << r.id;
      EXPECT_NE(r.text, seed_text[fam]);
    } else if (role == "dis") {
      EXPECT_NE(*index.signature_at(i), seed_sig[fam]) << r.id;
      EXPECT_GE(word_overlap(seed_text[fam], r.text), 0.8) << r.id;
    }
  }
}

TEST(Synth, DistractorsAreLexicallyCloserThanDuplicates) {
  const auto s = generate_synthetic({500, 2, 2, 42});
  std::map<std::string, std::string> seed_text;
  for (const auto& r : s.records) {
    if (role_of(r.id) == "see") seed_text[family_of(r.id)] = r.text;
  }
  double dup_sum = 0, dis_sum = 0;
  int dups = 0, dis = 0;
  for (const auto& r : s.records) {
    const auto role = role_of(r.id);
    const double o = word_overlap(seed_text[family_of(r.id)], r.text);
    if (role == "dup") dup_sum += o, ++dups;
    if (role == "dis") dis_sum += o, ++dis;
  }
  EXPECT_GT(dis_sum / dis, dup_sum / dups);
}

TEST(Synth, SolutionsEvaluate) {
  for (const auto& r : generate_synthetic({50, 1, 1, 3}).records) {
    ASSERT_TRUE(r.solution.has_value());
    EXPECT_TRUE(std::isfinite(*r.solution)) << r.id;
  }
}

TEST(WordOverlap, Definition) {
  EXPECT_DOUBLE_EQ(word_overlap("a b c d", "a b c x y z"), 0.75);
  EXPECT_DOUBLE_EQ(word_overlap("a a b", "b"), 0.5);
}
