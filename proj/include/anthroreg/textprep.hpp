#pragma once

// Markdown preprocessing: code stripping, sentence segmentation, word counts.

#include <algorithm>
#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "anthroreg/utf8.hpp"

namespace anthroreg {

/// Half-open byte range [begin, end).
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - begin; }
  friend bool operator==(const Span&, const Span&) = default;
};

/// A contiguous piece of prose and where it came from in the raw text.
struct ProseSegment {
  std::size_t prose_begin = 0;
  std::size_t raw_begin = 0;
  std::size_t length = 0;
};

struct ProseDocument {
  std::string raw;
  std::string prose;
  std::vector<Span> excluded_spans;  // sorted, disjoint, offsets into raw
  std::vector<ProseSegment> segments;
  std::vector<std::string> sentences;

  /// Maps an offset into prose back to the raw text. An offset at the end of
  /// a segment maps to the end of that segment in raw.
  std::size_t to_raw(std::size_t prose_pos) const noexcept {
    if (segments.empty()) return prose_pos;
    auto it = std::upper_bound(
        segments.begin(), segments.end(), prose_pos,
        [](std::size_t p, const ProseSegment& s) { return p < s.prose_begin; });
    if (it != segments.begin()) --it;
    return it->raw_begin + (prose_pos - it->prose_begin);
  }
};

namespace textprep_detail {

struct Line {
  std::size_t begin;    // first byte
  std::size_t end;      // one past last content byte (excluding '\n')
  std::size_t next;     // start of next line
};

inline std::vector<Line> split_lines(std::string_view s) {
  std::vector<Line> lines;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const auto nl = s.find('\n', pos);
    if (nl == std::string_view::npos) {
      lines.push_back({pos, s.size(), s.size()});
      break;
    }
    lines.push_back({pos, nl, nl + 1});
    pos = nl + 1;
  }
  return lines;
}

inline std::size_t skip_indent(std::string_view s, std::size_t pos, std::size_t end) {
  while (pos < end && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  return pos;
}

inline std::size_t run_length(std::string_view s, std::size_t pos, std::size_t end, char c) {
  std::size_t n = 0;
  while (pos + n < end && s[pos + n] == c) ++n;
  return n;
}

struct Fence {
  char ch;
  std::size_t len;
};

// A fence opener is a line whose first non-blank characters are three or
// more backticks or tildes. Backtick fences may not carry a backtick in the
// info string (that is an inline span instead).
inline bool fence_opener(std::string_view s, const Line& ln, Fence& out) {
  const auto p = skip_indent(s, ln.begin, ln.end);
  if (p >= ln.end || (s[p] != '`' && s[p] != '~')) return false;
  const char c = s[p];
  const auto n = run_length(s, p, ln.end, c);
  if (n < 3) return false;
  if (c == '`' && s.substr(p + n, ln.end - p - n).find('`') != std::string_view::npos) {
    return false;
  }
  out = {c, n};
  return true;
}

inline bool fence_closer(std::string_view s, const Line& ln, const Fence& f) {
  auto p = skip_indent(s, ln.begin, ln.end);
  const auto n = run_length(s, p, ln.end, f.ch);
  if (n < f.len) return false;
  p += n;
  while (p < ln.end && utf8::is_space(s[p])) ++p;
  return p == ln.end;
}

inline bool has_blank_line(std::string_view s) {
  std::size_t pos = 0;
  while (true) {
    const auto nl = s.find('\n', pos);
    if (nl == std::string_view::npos) return false;
    auto p = nl + 1;
    while (p < s.size() && s[p] != '\n' && utf8::is_space(s[p])) ++p;
    if (p < s.size() && s[p] == '\n') return true;
    pos = nl + 1;
  }
}

inline void inline_spans(std::string_view s, std::size_t begin, std::size_t end,
                         std::vector<Span>& out) {
  std::size_t i = begin;
  while (i < end) {
    if (s[i] != '`') {
      ++i;
      continue;
    }
    const auto n = run_length(s, i, end, '`');
    std::size_t j = i + n;
    bool closed = false;
    while (j < end) {
      if (s[j] != '`') {
        ++j;
        continue;
      }
      const auto m = run_length(s, j, end, '`');
      if (m == n) {
        if (!has_blank_line(s.substr(i + n, j - i - n))) {
          out.push_back({i, j + m});
          i = j + m;
          closed = true;
        }
        break;
      }
      j += m;
    }
    if (!closed) i += n;  // unmatched run is literal text
  }
}

// One pass of fence and inline-span detection over `s`.
inline std::vector<Span> code_spans(std::string_view s) {
  std::vector<Span> spans;
  const auto lines = split_lines(s);
  std::size_t region_start = 0;
  std::size_t i = 0;
  while (i < lines.size()) {
    Fence f{};
    if (!fence_opener(s, lines[i], f)) {
      ++i;
      continue;
    }
    inline_spans(s, region_start, lines[i].begin, spans);
    std::size_t j = i + 1;
    while (j < lines.size() && !fence_closer(s, lines[j], f)) ++j;
    const std::size_t stop = j < lines.size() ? lines[j].next : s.size();
    spans.push_back({lines[i].begin, stop});
    region_start = stop;
    i = j + 1;
  }
  inline_spans(s, region_start, s.size(), spans);
  std::sort(spans.begin(), spans.end(),
            [](const Span& a, const Span& b) { return a.begin < b.begin; });
  return spans;
}

inline bool is_list_item(std::string_view line) {
  std::size_t p = 0;
  while (p < line.size() && (line[p] == ' ' || line[p] == '\t')) ++p;
  if (p >= line.size()) return false;
  const char c = line[p];
  if (c == '-' || c == '*' || c == '+') {
    return p + 1 < line.size() && (line[p + 1] == ' ' || line[p + 1] == '\t');
  }
  std::size_t d = 0;
  while (p + d < line.size() && line[p + d] >= '0' && line[p + d] <= '9') ++d;
  if (d == 0 || d > 9 || p + d >= line.size()) return false;
  const char m = line[p + d];
  return (m == '.' || m == ')') &&
         (p + d + 1 == line.size() || line[p + d + 1] == ' ' || line[p + d + 1] == '\t');
}

inline bool is_heading(std::string_view line) {
  std::size_t p = 0;
  while (p < line.size() && line[p] == ' ' && p < 3) ++p;
  const auto n = run_length(line, p, line.size(), '#');
  return n >= 1 && n <= 6 &&
         (p + n == line.size() || line[p + n] == ' ' || line[p + n] == '\t');
}

inline bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](char c) { return utf8::is_space(c); });
}

inline constexpr std::array<std::string_view, 17> kAbbreviations = {
    "e.g.", "i.e.", "vs.",   "cf.",  "approx.", "mr.",  "mrs.", "ms.", "dr.",
    "prof.", "st.", "no.",   "fig.", "eq.",     "al.",  "incl.", "resp."};

inline bool ends_with_abbreviation(std::string_view text, std::size_t dot) {
  std::size_t start = dot;
  while (start > 0 && !utf8::is_space(text[start - 1])) --start;
  std::string token;
  for (std::size_t k = start; k <= dot; ++k) token.push_back(utf8::ascii_lower(text[k]));
  while (!token.empty() && (token.front() == '(' || token.front() == '[' ||
                            token.front() == '"' || token.front() == '\'')) {
    token.erase(token.begin());
  }
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), token) !=
         kAbbreviations.end();
}

// "1." opening a piece is an ordered-list marker, not a sentence end.
inline bool is_list_ordinal(std::string_view piece, std::size_t start, std::size_t dot) {
  std::size_t k = start;
  while (k < dot && utf8::is_space(piece[k])) ++k;
  if (k == dot) return false;
  for (std::size_t m = k; m < dot; ++m) {
    if (piece[m] < '0' || piece[m] > '9') return false;
  }
  return true;
}

inline bool is_closer(std::string_view s, std::size_t pos, std::size_t& len) {
  const char c = s[pos];
  if (c == ')' || c == ']' || c == '"' || c == '\'' || c == '*' || c == '_') {
    len = 1;
    return true;
  }
  // U+2019 and U+201D
  if (s.substr(pos, 3) == "\xE2\x80\x99" || s.substr(pos, 3) == "\xE2\x80\x9D") {
    len = 3;
    return true;
  }
  return false;
}

inline void push_normalized(std::string_view piece, std::vector<std::string>& out) {
  std::string s;
  bool pending_space = false;
  for (char c : piece) {
    if (utf8::is_space(c)) {
      pending_space = !s.empty();
      continue;
    }
    if (pending_space) s.push_back(' ');
    pending_space = false;
    s.push_back(c);
  }
  if (!s.empty()) out.push_back(std::move(s));
}

inline void split_terminal(std::string_view piece, std::vector<std::string>& out) {
  std::size_t start = 0;
  std::size_t i = 0;
  while (i < piece.size()) {
    const char c = piece[i];
    if (c != '.' && c != '!' && c != '?') {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < piece.size() && (piece[j] == '.' || piece[j] == '!' || piece[j] == '?')) ++j;
    std::size_t len = 0;
    while (j < piece.size() && is_closer(piece, j, len)) j += len;
    const bool at_break = j == piece.size() || utf8::is_space(piece[j]);
    const bool abbrev = c == '.' && j == i + 1 &&
                        (ends_with_abbreviation(piece, i) || is_list_ordinal(piece, start, i));
    if (at_break && !abbrev) {
      push_normalized(piece.substr(start, j - start), out);
      start = j;
    }
    i = j;
  }
  push_normalized(piece.substr(start), out);
}

}  // namespace textprep_detail

/// Segments prose into sentences: terminal punctuation followed by
/// whitespace, blank lines, list items and headings all end a sentence.
/// Whitespace inside a sentence is collapsed to single spaces.
inline std::vector<std::string> segment_sentences(std::string_view prose) {
  using namespace textprep_detail;
  std::vector<std::string> out;
  std::string piece;
  auto flush = [&] {
    split_terminal(piece, out);
    piece.clear();
  };
  for (const auto& ln : split_lines(prose)) {
    const auto line = prose.substr(ln.begin, ln.end - ln.begin);
    if (is_blank(line)) {
      flush();
    } else if (is_heading(line)) {
      flush();
      piece.assign(line);
      flush();
    } else {
      if (is_list_item(line)) flush();
      if (!piece.empty()) piece.push_back('\n');
      piece.append(line);
    }
  }
  flush();
  return out;
}

inline std::vector<std::string> segment_sentences(const ProseDocument& doc) {
  return segment_sentences(doc.prose);
}

/// Removes fenced code blocks (``` or ~~~, unterminated fences run to the end)
/// and backtick code spans. Everything else is prose. Stripping is repeated
/// until the prose is stable, so strip_code(prose) leaves prose unchanged.
inline ProseDocument strip_code(std::string_view raw) {
  ProseDocument doc;
  doc.raw.assign(raw);
  doc.segments.push_back({0, 0, raw.size()});
  std::string current(raw);

  for (;;) {
    const auto spans = textprep_detail::code_spans(current);
    if (spans.empty()) break;

    // Map the excluded prose ranges back to raw through the current segments.
    for (const auto& sp : spans) {
      for (const auto& seg : doc.segments) {
        const auto lo = std::max(sp.begin, seg.prose_begin);
        const auto hi = std::min(sp.end, seg.prose_begin + seg.length);
        if (lo < hi) {
          doc.excluded_spans.push_back({seg.raw_begin + (lo - seg.prose_begin),
                                        seg.raw_begin + (hi - seg.prose_begin)});
        }
      }
    }

    std::vector<ProseSegment> next_segments;
    std::string next;
    std::size_t k = 0;
    for (const auto& seg : doc.segments) {
      std::size_t p = seg.prose_begin;
      const std::size_t seg_end = seg.prose_begin + seg.length;
      while (p < seg_end) {
        while (k < spans.size() && spans[k].end <= p) ++k;
        std::size_t stop = seg_end;
        if (k < spans.size() && spans[k].begin <= p) {
          p = std::min(seg_end, spans[k].end);
          continue;
        }
        if (k < spans.size()) stop = std::min(seg_end, spans[k].begin);
        const std::size_t raw_p = seg.raw_begin + (p - seg.prose_begin);
        if (!next_segments.empty() &&
            next_segments.back().raw_begin + next_segments.back().length == raw_p) {
          next_segments.back().length += stop - p;
        } else {
          next_segments.push_back({next.size(), raw_p, stop - p});
        }
        next.append(current, p, stop - p);
        p = stop;
      }
    }
    doc.segments = std::move(next_segments);
    current = std::move(next);
  }

  std::sort(doc.excluded_spans.begin(), doc.excluded_spans.end(),
            [](const Span& a, const Span& b) { return a.begin < b.begin; });
  std::vector<Span> merged;
  for (const auto& sp : doc.excluded_spans) {
    if (!merged.empty() && merged.back().end >= sp.begin) {
      merged.back().end = std::max(merged.back().end, sp.end);
    } else {
      merged.push_back(sp);
    }
  }
  doc.excluded_spans = std::move(merged);
  if (doc.segments.empty()) doc.segments.push_back({0, raw.size(), 0});
  doc.prose = std::move(current);
  doc.sentences = segment_sentences(doc.prose);
  return doc;
}

namespace textprep_detail {

// Whitespace as understood by Python's str.split(): ASCII whitespace, the
// information separators 0x1C-0x1F, and the Unicode space separators.
inline std::size_t whitespace_length(std::string_view s, std::size_t pos) {
  const auto b = static_cast<unsigned char>(s[pos]);
  if (b < 0x80) {
    return (utf8::is_space(s[pos]) || (b >= 0x1C && b <= 0x1F)) ? 1 : 0;
  }
  const auto d = utf8::decode_at(s, pos);
  switch (d.cp) {
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return d.length;
    default:
      return (d.cp >= 0x2000 && d.cp <= 0x200A) ? d.length : 0;
  }
}

}  // namespace textprep_detail

/// Number of maximal whitespace-delimited tokens.
inline std::size_t word_count(std::string_view text) {
  std::size_t words = 0;
  bool in_word = false;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto ws = textprep_detail::whitespace_length(text, i);
    if (ws > 0) {
      in_word = false;
      i += ws;
      continue;
    }
    if (!in_word) ++words;
    in_word = true;
    ++i;
  }
  return words;
}

inline std::size_t word_count(const ProseDocument& doc) { return word_count(doc.prose); }

}  // namespace anthroreg
