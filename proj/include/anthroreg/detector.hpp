#pragma once

// Marker detection over prose. Every pattern is matched independently and
// non-overlapping against itself; matches of distinct patterns may overlap.

#include <algorithm>
#include <array>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "anthroreg/conversation.hpp"
#include "anthroreg/lexicon.hpp"
#include "anthroreg/rule.hpp"
#include "anthroreg/textprep.hpp"
#include "anthroreg/utf8.hpp"

namespace anthroreg {

/// How hits from different patterns interact.
enum class OverlapPolicy {
  Independent,        // every pattern counted on its own
  PerRuleAlternation, // one ordered alternation per rule: no overlaps inside a rule
  SuppressContained,  // drop a hit lying inside a longer hit of any rule
};

/// What a space inside a multi-word pattern matches.
enum class SpaceMode {
  Single,         // exactly one U+0020
  HorizontalRun,  // one or more spaces or tabs
  AnyWhitespace,  // one or more whitespace characters, newlines included
};

/// Boundary rule at the pattern edges.
enum class EdgeBoundary {
  WordEdges,     // check a boundary only where the pattern edge is a word char
  RegexLiteral,  // \b on both sides, as in a literal \bpattern\b regex
};

/// Sensitivity switches. Defaults are the reference measurement convention.
struct ScanOptions {
  OverlapPolicy overlap = OverlapPolicy::Independent;
  SpaceMode spaces = SpaceMode::Single;
  EdgeBoundary edges = EdgeBoundary::WordEdges;
  bool curly_apostrophe = true;
  bool unicode_word_chars = true;
  bool strip_code = true;
  std::string turn_separator = std::string(kTurnSeparator);
};

struct MarkerHit {
  RuleId rule = RuleId::R1;
  std::size_t pattern_index = 0;  // index into Lexicon::patterns()
  std::string pattern;            // surface text
  Span span;                      // offsets into the scanned text
  std::string matched;
};

struct MarkerCounts {
  std::array<std::size_t, kRuleCount> per_rule{};

  std::size_t operator[](RuleId r) const noexcept { return per_rule[index_of(r)]; }
  std::size_t& operator[](RuleId r) noexcept { return per_rule[index_of(r)]; }
  std::size_t total() const noexcept {
    return std::accumulate(per_rule.begin(), per_rule.end(), std::size_t{0});
  }
  MarkerCounts& operator+=(const MarkerCounts& o) noexcept {
    for (std::size_t i = 0; i < kRuleCount; ++i) per_rule[i] += o.per_rule[i];
    return *this;
  }
  friend bool operator==(const MarkerCounts&, const MarkerCounts&) = default;
};

struct ComplianceVerdict {
  bool compliant = true;
  std::vector<RuleId> violated_rules;  // ascending
  friend bool operator==(const ComplianceVerdict&, const ComplianceVerdict&) = default;
};

namespace detector_detail {

inline std::size_t match_space(std::string_view text, std::size_t pos, SpaceMode mode) {
  if (pos >= text.size()) return 0;
  switch (mode) {
    case SpaceMode::Single:
      return text[pos] == ' ' ? 1 : 0;
    case SpaceMode::HorizontalRun: {
      std::size_t n = 0;
      while (pos + n < text.size() && (text[pos + n] == ' ' || text[pos + n] == '\t')) ++n;
      return n;
    }
    case SpaceMode::AnyWhitespace: {
      std::size_t n = 0;
      while (pos + n < text.size() && utf8::is_space(text[pos + n])) ++n;
      return n;
    }
  }
  return 0;
}

/// End offset of a match of `p` starting at `pos`, if any.
inline std::optional<std::size_t> match_at(const MarkerPattern& p, std::string_view text,
                                           std::size_t pos, const ScanOptions& opt) {
  std::size_t i = pos;
  for (const auto& u : p.units) {
    switch (u.kind) {
      case PatternUnit::Kind::Literal: {
        if (i >= text.size()) return std::nullopt;
        const char c = p.case_sensitive ? text[i] : utf8::ascii_lower(text[i]);
        if (c != u.ch) return std::nullopt;
        ++i;
        break;
      }
      case PatternUnit::Kind::Apostrophe:
        if (i < text.size() && text[i] == '\'') {
          ++i;
        } else if (opt.curly_apostrophe && text.substr(i, 3) == utf8::kRightSingleQuote) {
          i += 3;
        } else {
          return std::nullopt;
        }
        break;
      case PatternUnit::Kind::Space: {
        const auto n = match_space(text, i, opt.spaces);
        if (n == 0) return std::nullopt;
        i += n;
        break;
      }
    }
  }
  if (p.boundary_anchored) {
    const bool uni = opt.unicode_word_chars;
    const bool first_word = p.starts_with_word_char();
    const bool last_word = p.ends_with_word_char();
    if (opt.edges == EdgeBoundary::WordEdges) {
      if (first_word && utf8::word_before(text, pos, uni)) return std::nullopt;
      if (last_word && utf8::word_at(text, i, uni)) return std::nullopt;
    } else {
      if (utf8::word_before(text, pos, uni) == first_word) return std::nullopt;
      if (utf8::word_at(text, i, uni) == last_word) return std::nullopt;
    }
  }
  return i;
}

inline void find_pattern(const MarkerPattern& p, std::size_t index, std::string_view text,
                         const ScanOptions& opt, std::vector<MarkerHit>& out) {
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (auto end = match_at(p, text, pos, opt)) {
      out.push_back({p.rule, index, p.surface, {pos, *end},
                     std::string(text.substr(pos, *end - pos))});
      pos = *end;
    } else {
      ++pos;
    }
  }
}

inline bool hit_order(const MarkerHit& a, const MarkerHit& b) {
  if (a.span.begin != b.span.begin) return a.span.begin < b.span.begin;
  return a.pattern_index < b.pattern_index;
}

}  // namespace detector_detail

/// Every match of every lexicon pattern in `text`, ordered by span start
/// (then by table order).
inline std::vector<MarkerHit> scan(std::string_view text, const Lexicon& lexicon,
                                   const ScanOptions& opt = {}) {
  using namespace detector_detail;
  std::vector<MarkerHit> hits;
  const auto& pats = lexicon.patterns();
  for (std::size_t i = 0; i < pats.size(); ++i) find_pattern(pats[i], i, text, opt, hits);
  std::sort(hits.begin(), hits.end(), hit_order);

  if (opt.overlap == OverlapPolicy::PerRuleAlternation) {
    // Leftmost match wins; at one start position the earlier table entry wins,
    // as with an ordered regex alternation.
    std::vector<MarkerHit> kept;
    std::array<std::size_t, kRuleCount> rule_end{};
    for (auto& h : hits) {
      auto& end = rule_end[index_of(h.rule)];
      if (h.span.begin < end) continue;
      end = h.span.end;
      kept.push_back(std::move(h));
    }
    hits = std::move(kept);
  } else if (opt.overlap == OverlapPolicy::SuppressContained) {
    std::vector<bool> drop(hits.size(), false);
    for (std::size_t i = 0; i < hits.size(); ++i) {
      for (std::size_t j = 0; j < hits.size() && hits[j].span.begin <= hits[i].span.begin; ++j) {
        if (i != j && hits[j].span.end >= hits[i].span.end &&
            hits[j].span.size() > hits[i].span.size()) {
          drop[i] = true;
          break;
        }
      }
    }
    std::vector<MarkerHit> kept;
    for (std::size_t i = 0; i < hits.size(); ++i) {
      if (!drop[i]) kept.push_back(std::move(hits[i]));
    }
    hits = std::move(kept);
  }
  return hits;
}

inline std::vector<MarkerHit> scan(const ProseDocument& doc, const Lexicon& lexicon,
                                   const ScanOptions& opt = {}) {
  return scan(std::string_view(doc.prose), lexicon, opt);
}

inline MarkerCounts count_by_rule(const std::vector<MarkerHit>& hits) {
  MarkerCounts c;
  for (const auto& h : hits) ++c[h.rule];
  return c;
}

inline ComplianceVerdict verdict(const MarkerCounts& counts) {
  ComplianceVerdict v;
  for (RuleId r : kAllRules) {
    if (counts[r] > 0) v.violated_rules.push_back(r);
  }
  v.compliant = v.violated_rules.empty();
  return v;
}

struct ConversationScan {
  MarkerCounts counts;
  ComplianceVerdict verdict;
  std::size_t words = 0;      // prose (post-strip) word count
  std::size_t words_raw = 0;  // word count of the unstripped assistant text
  bool empty_output = false;  // no assistant text at all
};

/// Joins the assistant turns, strips code, scans and tallies.
inline ConversationScan scan_conversation(const Conversation& conv, const Lexicon& lexicon,
                                          const ScanOptions& opt = {}) {
  ConversationScan out;
  const std::string text = conv.assistant_text(opt.turn_separator);
  out.words_raw = word_count(text);
  out.empty_output = std::all_of(text.begin(), text.end(),
                                 [](char c) { return utf8::is_space(c); });
  if (opt.strip_code) {
    const auto doc = strip_code(text);
    out.counts = count_by_rule(scan(doc, lexicon, opt));
    out.words = word_count(doc);
  } else {
    out.counts = count_by_rule(scan(std::string_view(text), lexicon, opt));
    out.words = out.words_raw;
  }
  out.verdict = verdict(out.counts);
  return out;
}

}  // namespace anthroreg
