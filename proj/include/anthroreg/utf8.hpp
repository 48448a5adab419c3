#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace anthroreg::utf8 {

inline constexpr std::string_view kRightSingleQuote = "\xE2\x80\x99";  // U+2019

struct Decoded {
  char32_t cp;
  std::size_t length;  // bytes consumed; 1 for invalid sequences
};

inline constexpr char32_t kInvalid = 0xFFFFFFFF;

/// Decodes the code point starting at `pos`. Malformed input yields kInvalid
/// with length 1 so callers always make progress.
inline Decoded decode_at(std::string_view s, std::size_t pos) noexcept {
  const auto b0 = static_cast<unsigned char>(s[pos]);
  if (b0 < 0x80) return {b0, 1};
  std::size_t len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return {kInvalid, 1};
  }
  if (pos + len > s.size()) return {kInvalid, 1};
  for (std::size_t i = 1; i < len; ++i) {
    const auto b = static_cast<unsigned char>(s[pos + i]);
    if ((b & 0xC0) != 0x80) return {kInvalid, 1};
    cp = (cp << 6) | (b & 0x3F);
  }
  return {cp, len};
}

/// Decodes the code point that ends immediately before `pos`.
inline Decoded decode_before(std::string_view s, std::size_t pos) noexcept {
  std::size_t start = pos - 1;
  std::size_t back = 0;
  while (start > 0 && back < 3 &&
         (static_cast<unsigned char>(s[start]) & 0xC0) == 0x80) {
    --start;
    ++back;
  }
  const Decoded d = decode_at(s, start);
  if (d.cp == kInvalid || start + d.length != pos) return {kInvalid, 1};
  return d;
}

constexpr bool is_ascii_word(char32_t cp) noexcept {
  return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') ||
         (cp >= '0' && cp <= '9') || cp == '_';
}

/// Approximates Unicode \w for non-ASCII code points without a property
/// database: letters and digits from every script count as word characters;
/// punctuation, symbol, space, combining-mark and emoji blocks do not.
constexpr bool is_unicode_word(char32_t cp) noexcept {
  if (cp < 0x80) return is_ascii_word(cp);
  if (cp == kInvalid) return false;
  if (cp <= 0xBF) return cp == 0xAA || cp == 0xB5 || cp == 0xBA;
  if (cp == 0xD7 || cp == 0xF7) return false;
  if (cp >= 0x0300 && cp <= 0x036F) return false;  // combining diacritics
  if (cp >= 0x2000 && cp <= 0x2BFF) return false;  // punctuation .. symbols
  if (cp >= 0x2E00 && cp <= 0x2E7F) return false;
  if (cp >= 0x3000 && cp <= 0x303F) return false;
  if (cp >= 0xE000 && cp <= 0xF8FF) return false;  // private use
  if (cp >= 0xFE00 && cp <= 0xFE6F) return false;
  if (cp >= 0xFF00 && cp <= 0xFF0F) return false;
  if (cp >= 0xFF1A && cp <= 0xFF20) return false;
  if (cp >= 0xFF3B && cp <= 0xFF40) return false;
  if (cp >= 0xFF5B && cp <= 0xFF65) return false;
  if (cp == 0xFEFF || cp == 0xFFFD) return false;
  if (cp >= 0x1F000 && cp <= 0x1FAFF) return false;  // emoji, pictographs
  return true;
}

constexpr bool is_word(char32_t cp, bool unicode) noexcept {
  return unicode ? is_unicode_word(cp) : is_ascii_word(cp);
}

inline bool word_before(std::string_view s, std::size_t pos, bool unicode) noexcept {
  if (pos == 0) return false;
  return is_word(decode_before(s, pos).cp, unicode);
}

inline bool word_at(std::string_view s, std::size_t pos, bool unicode) noexcept {
  if (pos >= s.size()) return false;
  return is_word(decode_at(s, pos).cp, unicode);
}

constexpr char ascii_lower(char c) noexcept {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

constexpr bool is_space(char c) noexcept {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

}  // namespace anthroreg::utf8
