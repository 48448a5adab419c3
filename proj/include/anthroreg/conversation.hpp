#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "anthroreg/utf8.hpp"

namespace anthroreg {

enum class Category {
  ErrorDiagnosis,
  CodeReview,
  Refactoring,
  Architecture,
  Debugging,
  Explanation
};

inline constexpr std::size_t kCategoryCount = 6;
inline constexpr std::size_t kTasksPerCategory = 5;

inline constexpr std::array<Category, kCategoryCount> kAllCategories = {
    Category::ErrorDiagnosis, Category::CodeReview,  Category::Refactoring,
    Category::Architecture,   Category::Debugging,   Category::Explanation};

constexpr std::string_view category_name(Category c) noexcept {
  constexpr std::array<std::string_view, kCategoryCount> names = {
      "error diagnosis", "code review", "refactoring",
      "architecture",    "debugging",   "explanation"};
  return names[static_cast<std::size_t>(c)];
}

/// Accepts the display name with spaces, underscores or hyphens, any case.
inline std::optional<Category> parse_category(std::string_view s) {
  std::string norm;
  for (char c : s) norm.push_back(c == '_' || c == '-' ? ' ' : utf8::ascii_lower(c));
  for (Category c : kAllCategories) {
    if (category_name(c) == norm) return c;
  }
  return std::nullopt;
}

enum class Condition { Default, Constrained };

inline constexpr std::array<Condition, 2> kAllConditions = {Condition::Default,
                                                            Condition::Constrained};

constexpr std::string_view condition_name(Condition c) noexcept {
  return c == Condition::Default ? "default" : "constrained";
}

inline std::optional<Condition> parse_condition(std::string_view s) {
  std::string norm;
  for (char c : s) norm.push_back(utf8::ascii_lower(c));
  if (norm == "default" || norm == "baseline" || norm == "unconstrained") {
    return Condition::Default;
  }
  if (norm == "constrained" || norm == "voice_model" || norm == "voice-model") {
    return Condition::Constrained;
  }
  return std::nullopt;
}

enum class Role { User, Assistant };

constexpr std::string_view role_name(Role r) noexcept {
  return r == Role::User ? "user" : "assistant";
}

inline std::optional<Role> parse_role(std::string_view s) {
  if (s == "user") return Role::User;
  if (s == "assistant") return Role::Assistant;
  return std::nullopt;
}

struct TaskSpec {
  std::string task_id;
  Category category = Category::ErrorDiagnosis;
  std::string prompt;
};

struct Turn {
  Role role = Role::User;
  std::string content;
  bool truncated = false;  // assistant turns only: generation hit max_tokens
  std::string stop_reason;
};

struct RequestParams {
  double temperature = 1.0;
  int max_tokens = 2048;
};

/// Identity of one experiment cell.
struct CellKey {
  std::string task_id;
  Condition condition = Condition::Default;
  int replicate = 0;

  friend auto operator<=>(const CellKey&, const CellKey&) = default;
  friend bool operator==(const CellKey&, const CellKey&) = default;
};

inline std::string to_string(const CellKey& k) {
  return k.task_id + "/" + std::string(condition_name(k.condition)) + "/r" +
         std::to_string(k.replicate);
}

inline constexpr std::string_view kTurnSeparator = "\n\n";

struct Conversation {
  std::string task_id;
  Category category = Category::ErrorDiagnosis;
  Condition condition = Condition::Default;
  int replicate = 0;
  std::string model_id;
  std::vector<Turn> turns;
  RequestParams params;
  std::optional<std::string> system_prompt_sha256;

  CellKey key() const { return {task_id, condition, replicate}; }

  std::vector<const Turn*> assistant_turns() const {
    std::vector<const Turn*> out;
    for (const auto& t : turns) {
      if (t.role == Role::Assistant) out.push_back(&t);
    }
    return out;
  }

  /// Assistant turns joined by `separator`.
  std::string assistant_text(std::string_view separator = kTurnSeparator) const {
    std::string out;
    bool first = true;
    for (const auto* t : assistant_turns()) {
      if (!first) out.append(separator);
      out.append(t->content);
      first = false;
    }
    return out;
  }

  std::size_t truncated_turns() const {
    return static_cast<std::size_t>(std::count_if(
        turns.begin(), turns.end(),
        [](const Turn& t) { return t.role == Role::Assistant && t.truncated; }));
  }
};

}  // namespace anthroreg
