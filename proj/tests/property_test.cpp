// Randomised invariants over generated Markdown and difference vectors.

#include <gtest/gtest.h>

#include <random>

#include "oracle/naive_scanner.hpp"
#include "support.hpp"

using namespace anthroreg;

namespace {

std::string random_markdown(std::mt19937_64& rng) {
  static const std::vector<std::string> pieces = {
      "I think", " ", "\n", "\n\n", "`", "``", "```", "~~~", "```python\n", "code()", "let me know",
      "Let\xE2\x80\x99s", "great!", ". ", "e.g. ", "- item", "# Head", "\t", "menu", "we",
      "happy to help", "so the issue is", "\xC3\xA9", "\xE2\x80\x94", "x", "Done.", "  ", "1. "};
  std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
  std::uniform_int_distribution<int> len(0, 40);
  std::string s;
  for (int i = len(rng); i > 0; --i) s += pieces[pick(rng)];
  return s;
}

std::string non_ws(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (!utf8::is_space(c)) out.push_back(c);
  }
  return out;
}

}  // namespace

TEST(Properties, StripCodeIsIdempotentAndMonotone) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    const auto raw = random_markdown(rng);
    const auto d = strip_code(raw);
    EXPECT_EQ(strip_code(d.prose).prose, d.prose) << raw;
    EXPECT_LE(word_count(d), word_count(raw)) << raw;
    for (std::size_t k = 1; k < d.excluded_spans.size(); ++k) {
      EXPECT_LT(d.excluded_spans[k - 1].end, d.excluded_spans[k].begin);
    }
    std::size_t excluded = 0;
    for (const auto& sp : d.excluded_spans) excluded += sp.size();
    EXPECT_EQ(excluded + d.prose.size(), raw.size()) << raw;
  }
}

TEST(Properties, SentencesPreserveNonWhitespace) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    const auto d = strip_code(random_markdown(rng));
    std::string joined;
    for (const auto& s : d.sentences) {
      EXPECT_FALSE(s.empty());
      joined += s + " ";
    }
    EXPECT_EQ(non_ws(joined), non_ws(d.prose)) << d.prose;
  }
}

TEST(Properties, DetectorAgreesWithOracleOnRandomText) {
  const auto lex = compile_lexicon();
  std::mt19937_64 rng(13);
  for (int i = 0; i < 2000; ++i) {
    const auto text = random_markdown(rng);
    std::vector<oracle::Hit> got;
    for (const auto& h : scan(std::string_view(text), lex)) {
      got.push_back({std::string(rule_name(h.rule)), h.pattern, h.span.begin, h.span.end});
    }
    std::sort(got.begin(), got.end());
    EXPECT_EQ(got, oracle::scan(text)) << text;
  }
}

TEST(Properties, WilcoxonRankSumAndSymmetry) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> len(1, 40);
  std::uniform_int_distribution<int> val(-5, 5);
  for (int i = 0; i < 500; ++i) {
    std::vector<PairedSample> p, neg;
    for (int k = len(rng); k > 0; --k) {
      const double d = val(rng);
      p.push_back({"t" + std::to_string(k), d, 0.0});
      neg.push_back({"t" + std::to_string(k), 0.0, d});
    }
    const auto w = wilcoxon_one_sided(p);
    const auto m = wilcoxon_one_sided(neg);
    const double n = static_cast<double>(w.n_effective);
    EXPECT_DOUBLE_EQ(w.w_plus + w.w_minus, n * (n + 1) / 2);
    EXPECT_DOUBLE_EQ(w.w_plus, m.w_minus);
    EXPECT_DOUBLE_EQ(w.r_rb, -m.r_rb);
    bool all_pos = n > 0;
    for (const auto& s : p) {
      if (s.default_mean < 0) all_pos = false;
    }
    EXPECT_EQ(w.r_rb == 1.0, all_pos);
    EXPECT_GE(w.p_one_sided, 0.0);
    EXPECT_LE(w.p_one_sided, 1.0);
  }
}

TEST(Properties, BonferroniClampsAndIsMonotone) {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = u(rng), b = u(rng);
    const double lo = std::min(a, b), hi = std::max(a, b);
    for (int m = 1; m <= 10; ++m) {
      EXPECT_LE(bonferroni(hi, m), 1.0);
      EXPECT_LE(bonferroni(lo, m), bonferroni(hi, m));
      EXPECT_LE(bonferroni(lo, m), bonferroni(lo, m + 1));
      EXPECT_GE(bonferroni(lo, m), lo);
    }
  }
}
