#include <gtest/gtest.h>

#include <set>

#include "support.hpp"

using namespace anthroreg;

TEST(Lexicon, CompilesWithReferenceCounts) {
  const auto lex = compile_lexicon();
  EXPECT_EQ(lex.size(), 82u);
  EXPECT_EQ(lex.count(RuleId::R2), 17u);
  const std::array<std::size_t, 7> want = {11, 17, 11, 10, 10, 9, 14};
  EXPECT_EQ(lex.per_rule_counts(), want);
}

TEST(Lexicon, FirstPersonContentsAndHelloExcluded) {
  const auto lex = compile_lexicon();
  std::set<std::string> r1;
  for (const auto& p : patterns_for(RuleId::R1, lex)) r1.insert(p.surface);
  EXPECT_TRUE(r1.count("let's"));
  EXPECT_TRUE(r1.count("I"));
  for (const auto& p : lex.patterns()) EXPECT_NE(p.surface, "hello");
}

TEST(Lexicon, PatternsForRule) {
  const auto lex = compile_lexicon();
  const auto r6 = patterns_for(RuleId::R6, lex);
  ASSERT_EQ(r6.size(), 9u);
  EXPECT_EQ(r6.front().surface, "so the issue is");
  std::set<std::string> r4;
  for (const auto& p : patterns_for(RuleId::R4, lex)) r4.insert(p.surface);
  EXPECT_TRUE(r4.count("recommend"));
  EXPECT_TRUE(r4.count("suggest"));
}

TEST(Lexicon, RulesPartitionThePatterns) {
  const auto lex = compile_lexicon();
  std::set<std::string> all;
  std::size_t sum = 0;
  for (RuleId r : kAllRules) {
    for (const auto& p : patterns_for(r, lex)) {
      EXPECT_EQ(p.rule, r);
      all.insert(p.surface);
      ++sum;
    }
  }
  EXPECT_EQ(sum, 82u);
  EXPECT_EQ(all.size(), 82u);
}

TEST(Lexicon, OnlyStandaloneIIsCaseSensitive) {
  const auto lex = compile_lexicon();
  for (const auto& p : lex.patterns()) {
    EXPECT_EQ(p.case_sensitive, p.surface == "I") << p.surface;
    EXPECT_TRUE(p.boundary_anchored);
  }
}

TEST(Lexicon, CompilationIsDeterministic) {
  const auto a = compile_lexicon();
  const auto b = compile_lexicon();
  EXPECT_EQ(a.source_sha256(), b.source_sha256());
  for (const auto& s : testing_support::detector_strings()) {
    const auto ha = scan(std::string_view(s), a);
    const auto hb = scan(std::string_view(s), b);
    ASSERT_EQ(ha.size(), hb.size());
    for (std::size_t i = 0; i < ha.size(); ++i) {
      EXPECT_EQ(ha[i].span, hb[i].span);
      EXPECT_EQ(ha[i].pattern, hb[i].pattern);
    }
  }
}

TEST(Lexicon, StrictModeRejectsWrongCounts) {
  EXPECT_THROW(compile_lexicon("R1\tme\t0\n"), LexiconError);
  const auto lenient = compile_lexicon("R1\tme\t0\nR7\tgood luck\t0\n", LexiconCheck::Lenient);
  EXPECT_EQ(lenient.size(), 2u);
  EXPECT_EQ(lenient.count(RuleId::R7), 1u);
}

TEST(Lexicon, MalformedRecordsAreErrors) {
  EXPECT_THROW(compile_lexicon("R9\tme\t0\n", LexiconCheck::Lenient), LexiconError);
  EXPECT_THROW(compile_lexicon("R1\tme\tyes\n", LexiconCheck::Lenient), LexiconError);
  EXPECT_THROW(compile_lexicon("R1\tme\t0\nR1\tme\t0\n", LexiconCheck::Lenient), LexiconError);
  EXPECT_THROW(compile_lexicon("R1\t\t0\n", LexiconCheck::Lenient), LexiconError);
}

TEST(Lexicon, LoadsAlternativeAssetFromFile) {
  testing_support::TempDir dir;
  testing_support::write_file(dir / "lex.tsv", "# test\nR2\thello\t0\n");
  const auto lex = load_lexicon_file((dir / "lex.tsv").string());
  EXPECT_EQ(lex.size(), 1u);
  EXPECT_EQ(count_by_rule(scan(std::string_view("Hello, hello."), lex))[RuleId::R2], 2u);
  EXPECT_THROW(load_lexicon_file((dir / "missing.tsv").string()), LexiconError);
}

TEST(Lexicon, RuleNamesRoundTrip) {
  for (RuleId r : kAllRules) {
    EXPECT_EQ(parse_rule(rule_name(r)), r);
    EXPECT_FALSE(rule_description(r).empty());
  }
  EXPECT_EQ(parse_rule("r3"), RuleId::R3);
  EXPECT_EQ(parse_rule("5"), RuleId::R5);
  EXPECT_FALSE(parse_rule("R8").has_value());
}
