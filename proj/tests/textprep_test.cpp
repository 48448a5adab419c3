#include <gtest/gtest.h>

#include "support.hpp"

using namespace anthroreg;

TEST(StripCode, InlineSpan) {
  const auto d = strip_code("Use `print(\"hello\")` here.");
  EXPECT_EQ(d.prose, "Use  here.");
  ASSERT_EQ(d.excluded_spans.size(), 1u);
  EXPECT_EQ(d.excluded_spans[0], (Span{4, 20}));
}

TEST(StripCode, FencedBlockNeverReachesDetector) {
  const auto d = strip_code("```rust\nlet x = 1; // I think\n```\nDone.");
  EXPECT_EQ(d.prose, "Done.");
  EXPECT_EQ(count_by_rule(scan(d, compile_lexicon()))[RuleId::R1], 0u);
}

TEST(StripCode, HelloInsideCodeIsRemoved) {
  const auto d = strip_code("Call `String::from(\"hello\")` first.\n\n```rust\nlet s = String::from(\"hello\");\n```\n");
  EXPECT_EQ(d.prose.find("hello"), std::string::npos);
}

TEST(StripCode, TildeFencesIndentedFencesAndUnterminatedFences) {
  EXPECT_EQ(strip_code("A.\n~~~\nI code\n~~~\nB.").prose, "A.\nB.");
  EXPECT_EQ(strip_code("- item\n  ```\n  I code\n  ```\nB.").prose, "- item\nB.");
  EXPECT_EQ(strip_code("Text.\n```\nI never close").prose, "Text.\n");
}

TEST(StripCode, LongerFenceNeedsMatchingCloser) {
  const auto d = strip_code("````\n```\nI inner\n```\n````\nAfter.");
  EXPECT_EQ(d.prose, "After.");
}

TEST(StripCode, BacktickRunsMustMatch) {
  EXPECT_EQ(strip_code("a ``x ` y`` b").prose, "a  b");
  // An unmatched opener is literal text.
  EXPECT_EQ(strip_code("a ` b").prose, "a ` b");
}

TEST(StripCode, InlineSpanDoesNotCrossBlankLine) {
  EXPECT_EQ(strip_code("a `b\n\nc` d").prose, "a `b\n\nc` d");
}

TEST(StripCode, ProseAndExcludedSpansRecoverRaw) {
  for (const auto& raw : {std::string("x `a` y ```\nz\n``` w"), std::string("```\n`a`\n```\n`b`c"),
                          std::string("plain text")}) {
    const auto d = strip_code(raw);
    std::string rebuilt;
    std::size_t pos = 0, prose_pos = 0;
    for (const auto& sp : d.excluded_spans) {
      rebuilt += d.prose.substr(prose_pos, sp.begin - pos);
      prose_pos += sp.begin - pos;
      rebuilt += raw.substr(sp.begin, sp.size());
      pos = sp.end;
    }
    rebuilt += d.prose.substr(prose_pos);
    EXPECT_EQ(rebuilt, raw);
  }
}

TEST(StripCode, ToRawMapsProseOffsets) {
  const std::string raw = "Use `code` then I stop.";
  const auto d = strip_code(raw);
  const auto p = d.prose.find("I stop");
  EXPECT_EQ(raw.substr(d.to_raw(p), 6), "I stop");
}

TEST(Sentences, TerminalPunctuation) {
  EXPECT_EQ(segment_sentences("Parser fails. Unverified."),
            (std::vector<std::string>{"Parser fails.", "Unverified."}));
}

TEST(Sentences, ListItems) {
  EXPECT_EQ(segment_sentences("- item one\n- item two").size(), 2u);
  EXPECT_EQ(segment_sentences("1. first\n2) second\n* third").size(), 3u);
}

TEST(Sentences, AbbreviationGuard) {
  // Frozen from the reference segmenter.
  EXPECT_EQ(segment_sentences("e.g. the config"), (std::vector<std::string>{"e.g. the config"}));
  EXPECT_EQ(segment_sentences("Use a pool, i.e. a cache. Done.").size(), 2u);
}

TEST(Sentences, BlankLinesAndHeadings) {
  EXPECT_EQ(segment_sentences("# Title\nBody text\n\nNext part"),
            (std::vector<std::string>{"# Title", "Body text", "Next part"}));
}

TEST(Sentences, ClosingQuotesStayWithSentence) {
  EXPECT_EQ(segment_sentences("He said \"stop.\" Then left."),
            (std::vector<std::string>{"He said \"stop.\"", "Then left."}));
}

TEST(WordCount, Basics) {
  EXPECT_EQ(word_count("The test fails."), 3u);
  EXPECT_EQ(word_count(""), 0u);
  EXPECT_EQ(word_count("  a\tb\nc \xE2\x80\x83 d  "), 4u);  // em space separates
  EXPECT_EQ(word_count("a\xC2\xA0" "b"), 2u);              // NBSP separates, as str.split
  EXPECT_EQ(word_count(strip_code("Run `ls -la` now")), 2u);
}
