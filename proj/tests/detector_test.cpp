#include <gtest/gtest.h>

#include "oracle/naive_scanner.hpp"
#include "support.hpp"

using namespace anthroreg;

namespace {

const Lexicon& lex() {
  static const Lexicon l = compile_lexicon();
  return l;
}

MarkerCounts counts(std::string_view s, const ScanOptions& o = {}) {
  return count_by_rule(scan(strip_code(s), lex(), o));
}

std::vector<oracle::Hit> as_oracle(const std::vector<MarkerHit>& hits) {
  std::vector<oracle::Hit> out;
  for (const auto& h : hits) {
    out.push_back({std::string(rule_name(h.rule)), h.pattern, h.span.begin, h.span.end});
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(Detector, SpecExamples) {
  const auto h = scan(std::string_view("Let me read the file."), lex());
  ASSERT_EQ(h.size(), 1u);
  EXPECT_EQ(h[0].rule, RuleId::R1);
  EXPECT_EQ(h[0].pattern, "me");

  const auto u = scan(std::string_view("Unfortunately, the test fails."), lex());
  ASSERT_EQ(u.size(), 1u);
  EXPECT_EQ(u[0].rule, RuleId::R2);
  EXPECT_EQ(u[0].matched, "Unfortunately");

  EXPECT_TRUE(scan(std::string_view("The test fails."), lex()).empty());

  const auto s = scan(std::string_view("It seems like it might be."), lex());
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].pattern, "it seems");
  EXPECT_EQ(s[1].pattern, "might be");
}

TEST(Detector, CaseAndBoundaries) {
  EXPECT_EQ(counts("it is fine")[RuleId::R1], 0u);
  EXPECT_EQ(counts("I am")[RuleId::R1], 1u);
  EXPECT_EQ(counts("menu")[RuleId::R1], 0u);
  EXPECT_EQ(counts("tell me")[RuleId::R1], 1u);
  EXPECT_EQ(counts("_me me2 me")[RuleId::R1], 1u);
}

TEST(Detector, CurlyApostropheMatchesEveryApostrophePattern) {
  for (const auto& p : lex().patterns()) {
    if (!p.has_apostrophe()) continue;
    std::string curly;
    for (char c : p.surface) {
      if (c == '\'') {
        curly += "\xE2\x80\x99";
      } else {
        curly.push_back(c);
      }
    }
    const std::string a = "x " + p.surface + " y";
    const std::string b = "x " + curly + " y";
    EXPECT_EQ(counts(a), counts(b)) << p.surface;
  }
  ScanOptions ascii_only;
  ascii_only.curly_apostrophe = false;
  EXPECT_EQ(counts("Let\xE2\x80\x99s go", ascii_only)[RuleId::R1], 0u);
}

TEST(Detector, GreatBangHasLeftBoundaryOnly) {
  EXPECT_EQ(counts("great!")[RuleId::R2], 1u);
  EXPECT_EQ(counts("great!!")[RuleId::R2], 1u);
  EXPECT_EQ(counts("so great!x")[RuleId::R2], 1u);
  EXPECT_EQ(counts("ungreat!")[RuleId::R2], 0u);
  ScanOptions literal;
  literal.edges = EdgeBoundary::RegexLiteral;
  // A \b after '!' needs a word character next.
  EXPECT_EQ(counts("great! ", literal)[RuleId::R2], 0u);
  EXPECT_EQ(counts("great!x", literal)[RuleId::R2], 1u);
}

TEST(Detector, TwoTurnConversation) {
  // "let me know" also contains the R1 pattern "me": patterns match independently.
  Conversation c;
  c.turns = {{Role::User, "task"}, {Role::Assistant, "I'll check."}, {Role::User, "OK."},
             {Role::Assistant, "Let me know."}};
  const auto s = scan_conversation(c, lex());
  EXPECT_EQ(s.counts[RuleId::R1], 2u);
  EXPECT_EQ(s.counts[RuleId::R7], 1u);
  EXPECT_FALSE(s.verdict.compliant);
  EXPECT_EQ(s.verdict.violated_rules, (std::vector<RuleId>{RuleId::R1, RuleId::R7}));
}

TEST(Detector, CleanConversation) {
  Conversation c;
  c.turns = {{Role::User, "task"}, {Role::Assistant, "The test fails."}, {Role::User, "OK."},
             {Role::Assistant, "The test fails."}};
  const auto s = scan_conversation(c, lex());
  EXPECT_EQ(s.counts.total(), 0u);
  EXPECT_TRUE(s.verdict.compliant);
  EXPECT_EQ(s.words, 6u);
}

TEST(Detector, SeparatorBlocksCrossTurnMatches) {
  Conversation c;
  c.turns = {{Role::User, "t"}, {Role::Assistant, "Have a"}, {Role::User, "OK."},
             {Role::Assistant, "good day"}};
  EXPECT_EQ(scan_conversation(c, lex()).counts.total(), 0u);
}

TEST(Detector, VerdictFollowsCounts) {
  EXPECT_TRUE(verdict(MarkerCounts{}).compliant);
  MarkerCounts c;
  c[RuleId::R3] = 2;
  const auto v = verdict(c);
  EXPECT_FALSE(v.compliant);
  EXPECT_EQ(v.violated_rules, std::vector<RuleId>{RuleId::R3});
  EXPECT_EQ(count_by_rule({}).total(), 0u);
}

TEST(Detector, SpaceModes) {
  EXPECT_EQ(counts("so  the issue is")[RuleId::R6], 0u);
  EXPECT_EQ(counts("let me\nknow")[RuleId::R7], 0u);
  ScanOptions horiz;
  horiz.spaces = SpaceMode::HorizontalRun;
  EXPECT_EQ(counts("so  the issue is", horiz)[RuleId::R6], 1u);
  EXPECT_EQ(counts("let me\nknow", horiz)[RuleId::R7], 0u);
  ScanOptions any;
  any.spaces = SpaceMode::AnyWhitespace;
  EXPECT_EQ(counts("let me\nknow", any)[RuleId::R7], 1u);
}

TEST(Detector, OverlapPolicies) {
  const std::string s = "Happy to help.";
  EXPECT_EQ(counts(s)[RuleId::R2], 1u);  // "happy to"
  EXPECT_EQ(counts(s)[RuleId::R7], 1u);  // "happy to help"
  ScanOptions contained;
  contained.overlap = OverlapPolicy::SuppressContained;
  EXPECT_EQ(counts(s, contained)[RuleId::R2], 0u);
  EXPECT_EQ(counts(s, contained)[RuleId::R7], 1u);

  // No two patterns of one rule overlap on real text, so the per-rule
  // alternation reading agrees with independent matching.
  ScanOptions alt;
  alt.overlap = OverlapPolicy::PerRuleAlternation;
  for (const auto& str : testing_support::detector_strings()) EXPECT_EQ(counts(str, alt), counts(str)) << str;
  EXPECT_EQ(counts("it might be worth it", alt)[RuleId::R3], 1u);
  EXPECT_EQ(counts("it might be worth it", alt)[RuleId::R4], 1u);
}

TEST(Detector, UnicodeWordCharacters) {
  EXPECT_EQ(counts("r\xC3\xA9me")[RuleId::R1], 0u);  // accented letter is a word character
  ScanOptions ascii;
  ascii.unicode_word_chars = false;
  EXPECT_EQ(counts("\xC3\xA9me", ascii)[RuleId::R1], 1u);
  EXPECT_EQ(counts("\xE2\x80\x94me\xE2\x80\x94")[RuleId::R1], 1u);  // em dashes are not
}

TEST(Detector, HitsAreSortedAndSelfDisjoint) {
  for (const auto& s : testing_support::detector_strings()) {
    const auto hits = scan(std::string_view(s), lex());
    for (std::size_t i = 1; i < hits.size(); ++i) {
      EXPECT_LE(hits[i - 1].span.begin, hits[i].span.begin);
      for (std::size_t j = 0; j < i; ++j) {
        if (hits[j].pattern_index == hits[i].pattern_index) {
          EXPECT_LE(hits[j].span.end, hits[i].span.begin);
        }
      }
    }
    for (const auto& h : hits) EXPECT_EQ(s.substr(h.span.begin, h.span.size()), h.matched);
  }
}

TEST(DetectorOracle, FixtureSuiteMatchesNaiveScanner) {
  const auto strings = testing_support::detector_strings();
  ASSERT_EQ(strings.size(), 50u);
  for (const auto& s : strings) {
    const auto doc = strip_code(s);
    EXPECT_EQ(as_oracle(scan(doc, lex())), oracle::scan(doc.prose)) << s;
  }
}

TEST(DetectorOracle, TableOneDefaultColumnIsFlagged) {
  // Frozen from the oracle: every default-register example violates its rule.
  const std::vector<std::pair<std::string, RuleId>> rows = {
      {"I'll look into that error for you.", RuleId::R1},
      {"Great question! Unfortunately, the test fails.", RuleId::R2},
      {"It seems like the issue might be a race condition.", RuleId::R3},
      {"I think it would be better to use a hash map.", RuleId::R4},
      {"As I mentioned earlier, the config needs updating.", RuleId::R5},
      {"So the issue is the parser can't handle depth > 3.", RuleId::R6},
      {"Hello! Happy to help! Let's dive in!", RuleId::R7},
  };
  for (const auto& [s, r] : rows) EXPECT_GT(counts(s)[r], 0u) << s;
  EXPECT_EQ(counts("Great question! Unfortunately, the test fails.")[RuleId::R2], 2u);
  EXPECT_EQ(counts("Hello! Happy to help! Let's dive in!").total(), 3u);
}
