#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace anthroreg {

/// The seven output-register rules. Values are dense so they can index arrays.
enum class RuleId : std::size_t { R1 = 0, R2, R3, R4, R5, R6, R7 };

inline constexpr std::size_t kRuleCount = 7;

inline constexpr std::array<RuleId, kRuleCount> kAllRules = {
    RuleId::R1, RuleId::R2, RuleId::R3, RuleId::R4,
    RuleId::R5, RuleId::R6, RuleId::R7};

constexpr std::size_t index_of(RuleId r) noexcept {
  return static_cast<std::size_t>(r);
}

constexpr std::string_view rule_name(RuleId r) noexcept {
  constexpr std::array<std::string_view, kRuleCount> names = {
      "R1", "R2", "R3", "R4", "R5", "R6", "R7"};
  return names[index_of(r)];
}

constexpr std::string_view rule_description(RuleId r) noexcept {
  constexpr std::array<std::string_view, kRuleCount> text = {
      "No first person",
      "No affect leakage",
      "No pronoun-free hedging",
      "No pronoun-free preference",
      "No implicit continuity",
      "No conversational framing",
      "No social performance"};
  return text[index_of(r)];
}

/// Accepts "R3", "r3" or "3".
inline std::optional<RuleId> parse_rule(std::string_view s) {
  if (!s.empty() && (s.front() == 'R' || s.front() == 'r')) s.remove_prefix(1);
  if (s.size() != 1 || s[0] < '1' || s[0] > '7') return std::nullopt;
  return static_cast<RuleId>(static_cast<std::size_t>(s[0] - '1'));
}

}  // namespace anthroreg
