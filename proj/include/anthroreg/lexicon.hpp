#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "anthroreg/lexicon_asset.hpp"
#include "anthroreg/rule.hpp"
#include "anthroreg/sha256.hpp"
#include "anthroreg/utf8.hpp"

namespace anthroreg {

/// Published pattern counts per rule; the embedded asset must reproduce them.
inline constexpr std::array<std::size_t, kRuleCount> kExpectedRuleCounts = {
    11, 17, 11, 10, 10, 9, 14};
inline constexpr std::size_t kExpectedPatternCount = 82;

class LexiconError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One element of a compiled pattern.
struct PatternUnit {
  enum class Kind { Literal, Apostrophe, Space };
  Kind kind = Kind::Literal;
  char ch = 0;  // lowercased unless the pattern is case-sensitive

  friend bool operator==(const PatternUnit&, const PatternUnit&) = default;
};

struct MarkerPattern {
  RuleId rule = RuleId::R1;
  std::string surface;
  bool case_sensitive = false;
  bool boundary_anchored = true;
  std::vector<PatternUnit> units;

  bool has_apostrophe() const {
    return std::any_of(units.begin(), units.end(), [](const PatternUnit& u) {
      return u.kind == PatternUnit::Kind::Apostrophe;
    });
  }
  bool starts_with_word_char() const {
    return !units.empty() && units.front().kind == PatternUnit::Kind::Literal &&
           utf8::is_ascii_word(static_cast<unsigned char>(units.front().ch));
  }
  bool ends_with_word_char() const {
    return !units.empty() && units.back().kind == PatternUnit::Kind::Literal &&
           utf8::is_ascii_word(static_cast<unsigned char>(units.back().ch));
  }
};

enum class LexiconCheck {
  Strict,   // enforce the published per-rule counts
  Lenient,  // any non-empty table (experimentation with --lexicon)
};

/// Immutable, rule-tagged pattern table. Safe to share across threads.
class Lexicon {
 public:
  const std::vector<MarkerPattern>& patterns() const noexcept { return patterns_; }
  std::size_t size() const noexcept { return patterns_.size(); }
  std::size_t count(RuleId r) const noexcept { return per_rule_[index_of(r)]; }
  const std::array<std::size_t, kRuleCount>& per_rule_counts() const noexcept {
    return per_rule_;
  }
  /// SHA-256 of the asset text the lexicon was compiled from.
  const std::string& source_sha256() const noexcept { return sha256_; }

 private:
  friend Lexicon compile_lexicon(std::string_view, LexiconCheck);
  std::vector<MarkerPattern> patterns_;
  std::array<std::size_t, kRuleCount> per_rule_{};
  std::string sha256_;
};

namespace detail {

inline std::vector<PatternUnit> compile_surface(std::string_view surface,
                                                bool case_sensitive) {
  std::vector<PatternUnit> units;
  std::size_t i = 0;
  while (i < surface.size()) {
    if (surface.substr(i, 3) == utf8::kRightSingleQuote) {
      units.push_back({PatternUnit::Kind::Apostrophe, '\''});
      i += 3;
      continue;
    }
    const char c = surface[i];
    if (static_cast<unsigned char>(c) >= 0x80) {
      throw LexiconError("lexicon: non-ASCII character in pattern '" +
                         std::string(surface) + "'");
    }
    if (c == '\'') {
      units.push_back({PatternUnit::Kind::Apostrophe, '\''});
    } else if (c == ' ') {
      if (units.empty() || units.back().kind == PatternUnit::Kind::Space) {
        throw LexiconError("lexicon: stray space in pattern '" +
                           std::string(surface) + "'");
      }
      units.push_back({PatternUnit::Kind::Space, ' '});
    } else {
      units.push_back({PatternUnit::Kind::Literal,
                       case_sensitive ? c : utf8::ascii_lower(c)});
    }
    ++i;
  }
  if (units.empty() || units.back().kind == PatternUnit::Kind::Space) {
    throw LexiconError("lexicon: empty or space-terminated pattern '" +
                       std::string(surface) + "'");
  }
  return units;
}

inline std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return out;
}

}  // namespace detail

/// Parses and validates a lexicon asset. Throws LexiconError on malformed
/// records or, under LexiconCheck::Strict, on any deviation from the
/// published per-rule counts.
inline Lexicon compile_lexicon(std::string_view asset = assets::kLexiconTsv,
                               LexiconCheck check = LexiconCheck::Strict) {
  Lexicon lex;
  lex.sha256_ = sha256_hex(asset);
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= asset.size()) {
    auto nl = asset.find('\n', pos);
    if (nl == std::string_view::npos) nl = asset.size();
    std::string_view line = asset.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;

    const auto fields = detail::split_tabs(line);
    if (fields.size() < 2 || fields.size() > 4) {
      throw LexiconError("lexicon line " + std::to_string(line_no) +
                         ": expected rule<TAB>surface<TAB>case_sensitive");
    }
    const auto rule = parse_rule(fields[0]);
    if (!rule) {
      throw LexiconError("lexicon line " + std::to_string(line_no) +
                         ": unknown rule '" + std::string(fields[0]) + "'");
    }
    MarkerPattern p;
    p.rule = *rule;
    p.surface = std::string(fields[1]);
    if (fields.size() >= 3) {
      if (fields[2] != "0" && fields[2] != "1") {
        throw LexiconError("lexicon line " + std::to_string(line_no) +
                           ": case_sensitive must be 0 or 1");
      }
      p.case_sensitive = fields[2] == "1";
    }
    if (fields.size() == 4) p.boundary_anchored = fields[3] != "0";
    try {
      p.units = detail::compile_surface(p.surface, p.case_sensitive);
    } catch (const LexiconError& e) {
      throw LexiconError("lexicon line " + std::to_string(line_no) + ": " +
                         e.what());
    }
    ++lex.per_rule_[index_of(p.rule)];
    lex.patterns_.push_back(std::move(p));
  }

  if (lex.patterns_.empty()) throw LexiconError("lexicon: no patterns");
  // Stable order by rule keeps per-rule table order and makes patterns_for a
  // contiguous slice.
  std::stable_sort(lex.patterns_.begin(), lex.patterns_.end(),
                   [](const MarkerPattern& a, const MarkerPattern& b) {
                     return index_of(a.rule) < index_of(b.rule);
                   });
  for (std::size_t i = 0; i < lex.patterns_.size(); ++i) {
    for (std::size_t j = i + 1; j < lex.patterns_.size(); ++j) {
      const auto& a = lex.patterns_[i];
      const auto& b = lex.patterns_[j];
      if (a.units == b.units && a.case_sensitive == b.case_sensitive) {
        throw LexiconError("lexicon: duplicate pattern '" + b.surface + "'");
      }
    }
  }

  if (check == LexiconCheck::Strict) {
    if (lex.patterns_.size() != kExpectedPatternCount) {
      throw LexiconError("lexicon: expected " +
                         std::to_string(kExpectedPatternCount) +
                         " patterns, found " +
                         std::to_string(lex.patterns_.size()));
    }
    for (RuleId r : kAllRules) {
      if (lex.count(r) != kExpectedRuleCounts[index_of(r)]) {
        throw LexiconError("lexicon: " + std::string(rule_name(r)) +
                           " expected " +
                           std::to_string(kExpectedRuleCounts[index_of(r)]) +
                           " patterns, found " + std::to_string(lex.count(r)));
      }
    }
  }
  return lex;
}

inline Lexicon load_lexicon_file(const std::string& path,
                                 LexiconCheck check = LexiconCheck::Lenient) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LexiconError("lexicon: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return compile_lexicon(ss.str(), check);
}

/// The patterns of one rule, in table order.
inline std::vector<MarkerPattern> patterns_for(RuleId rule, const Lexicon& lexicon) {
  std::vector<MarkerPattern> out;
  for (const auto& p : lexicon.patterns()) {
    if (p.rule == rule) out.push_back(p);
  }
  return out;
}

}  // namespace anthroreg
