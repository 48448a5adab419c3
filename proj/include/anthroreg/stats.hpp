#pragma once

// Task-level paired statistics: replicate averaging, one-sided Wilcoxon
// signed-rank test (exact for small samples), rank-biserial effect size and
// Bonferroni correction.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "anthroreg/corpus.hpp"
#include "anthroreg/rule.hpp"

namespace anthroreg {

class StatsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class MetricKind { TotalMarkers, RuleMarkers, Words, WordsRaw, AnthroScore };

struct Metric {
  MetricKind kind = MetricKind::TotalMarkers;
  RuleId rule = RuleId::R1;  // RuleMarkers only

  static Metric total() { return {MetricKind::TotalMarkers, RuleId::R1}; }
  static Metric of_rule(RuleId r) { return {MetricKind::RuleMarkers, r}; }
  static Metric words() { return {MetricKind::Words, RuleId::R1}; }
  static Metric words_raw() { return {MetricKind::WordsRaw, RuleId::R1}; }
  static Metric anthroscore() { return {MetricKind::AnthroScore, RuleId::R1}; }
};

inline std::string metric_name(const Metric& m) {
  switch (m.kind) {
    case MetricKind::TotalMarkers: return "total";
    case MetricKind::RuleMarkers: return std::string(rule_name(m.rule));
    case MetricKind::Words: return "words";
    case MetricKind::WordsRaw: return "words_raw";
    case MetricKind::AnthroScore: return "anthroscore";
  }
  return "?";
}

inline std::optional<Metric> parse_metric(std::string_view s) {
  if (s == "total" || s == "markers") return Metric::total();
  if (s == "words") return Metric::words();
  if (s == "words_raw" || s == "words-raw") return Metric::words_raw();
  if (s == "anthroscore") return Metric::anthroscore();
  if (auto r = parse_rule(s)) return Metric::of_rule(*r);
  return std::nullopt;
}

/// Value of `m` for one conversation; nullopt when the metric was not
/// measured (AnthroScore not run, or the conversation was unscoreable).
inline std::optional<double> metric_value(const ConversationResult& r, const Metric& m) {
  switch (m.kind) {
    case MetricKind::TotalMarkers: return static_cast<double>(r.counts.total());
    case MetricKind::RuleMarkers: return static_cast<double>(r.counts[m.rule]);
    case MetricKind::Words: return static_cast<double>(r.words);
    case MetricKind::WordsRaw: return static_cast<double>(r.words_raw);
    case MetricKind::AnthroScore: return r.anthroscore;
  }
  return std::nullopt;
}

struct PairedSample {
  std::string task_id;
  double default_mean = 0.0;
  double constrained_mean = 0.0;
};

/// One PairedSample per task (sorted by task id): the metric averaged over
/// that task's replicates in each condition.
inline std::vector<PairedSample> aggregate_task_means(
    const std::vector<ConversationResult>& results, const Metric& metric) {
  struct Acc {
    double sum[2] = {0.0, 0.0};
    std::size_t n[2] = {0, 0};
    bool seen[2] = {false, false};
  };
  std::map<std::string, Acc> by_task;
  for (const auto& r : results) {
    auto& acc = by_task[r.key.task_id];
    const auto c = static_cast<std::size_t>(r.key.condition);
    acc.seen[c] = true;
    if (auto v = metric_value(r, metric)) {
      acc.sum[c] += *v;
      ++acc.n[c];
    }
  }
  std::vector<PairedSample> out;
  for (const auto& [task, acc] : by_task) {
    for (Condition c : kAllConditions) {
      const auto i = static_cast<std::size_t>(c);
      if (acc.n[i] == 0) {
        throw StatsError("task '" + task + "' has no " + metric_name(metric) + " values in the " +
                         std::string(condition_name(c)) + " condition" +
                         (acc.seen[i] ? "" : " (condition missing)"));
      }
    }
    out.push_back({task, acc.sum[0] / static_cast<double>(acc.n[0]),
                   acc.sum[1] / static_cast<double>(acc.n[1])});
  }
  return out;
}

struct WilcoxonResult {
  double w_plus = 0.0;
  double w_minus = 0.0;
  std::size_t n_pairs = 0;
  std::size_t n_effective = 0;  // pairs with a nonzero difference
  double p_one_sided = 1.0;     // P(W+ >= observed) under the null
  double r_rb = 0.0;
  bool degenerate = false;      // no nonzero differences
  bool exact = true;            // false when the normal approximation was used
};

/// Largest effective sample evaluated with the exact null distribution.
inline constexpr std::size_t kExactWilcoxonLimit = 64;

namespace stats_detail {

inline bool nearly_equal(double a, double b) {
  const double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
  return std::fabs(a - b) <= 1e-9 * scale;
}

struct RankedDiffs {
  std::vector<double> diffs;          // nonzero differences
  std::vector<std::uint32_t> rank2;   // doubled mid-ranks, aligned with diffs
  std::vector<std::size_t> tie_sizes; // size of every tie group
};

inline RankedDiffs rank_differences(const std::vector<double>& d_all) {
  RankedDiffs out;
  for (double d : d_all) {
    if (!nearly_equal(d, 0.0)) out.diffs.push_back(d);
  }
  const std::size_t n = out.diffs.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::fabs(out.diffs[a]) < std::fabs(out.diffs[b]);
  });
  out.rank2.assign(n, 0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && nearly_equal(std::fabs(out.diffs[order[j]]), std::fabs(out.diffs[order[i]]))) {
      ++j;
    }
    // Ranks i+1 .. j share the mid-rank (i+1+j)/2, i.e. doubled rank i+1+j.
    const auto doubled = static_cast<std::uint32_t>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) out.rank2[order[k]] = doubled;
    out.tie_sizes.push_back(j - i);
    i = j;
  }
  return out;
}

/// P(S >= threshold) where S = sum of independent terms each equal to 0 or
/// rank2[i] with probability 1/2.
inline double upper_tail_exact(const std::vector<std::uint32_t>& rank2, std::uint64_t threshold) {
  std::uint64_t max_sum = 0;
  for (auto r : rank2) max_sum += r;
  if (threshold > max_sum) return 0.0;
  std::vector<double> dist(max_sum + 1, 0.0);
  dist[0] = 1.0;
  std::uint64_t reach = 0;
  for (auto r : rank2) {
    reach += r;
    for (std::uint64_t s = reach; s >= r; --s) dist[s] = 0.5 * (dist[s] + dist[s - r]);
    for (std::uint64_t s = std::min<std::uint64_t>(r, reach + 1); s-- > 0;) dist[s] *= 0.5;
  }
  double p = 0.0;
  for (std::uint64_t s = threshold; s <= max_sum; ++s) p += dist[s];
  return std::min(1.0, p);
}

inline double normal_upper_tail(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

}  // namespace stats_detail

/// One-sided test of default > constrained on differences of `pairs`.
inline WilcoxonResult wilcoxon_one_sided(const std::vector<PairedSample>& pairs) {
  if (pairs.empty()) throw StatsError("wilcoxon: no pairs");
  std::vector<double> d;
  d.reserve(pairs.size());
  for (const auto& p : pairs) d.push_back(p.default_mean - p.constrained_mean);

  WilcoxonResult res;
  res.n_pairs = pairs.size();
  const auto ranked = stats_detail::rank_differences(d);
  const std::size_t n = ranked.diffs.size();
  res.n_effective = n;
  if (n == 0) {
    res.degenerate = true;
    res.p_one_sided = 1.0;
    res.r_rb = 0.0;
    return res;
  }

  std::uint64_t w_plus2 = 0;
  std::uint64_t total2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    total2 += ranked.rank2[i];
    if (ranked.diffs[i] > 0) w_plus2 += ranked.rank2[i];
  }
  res.w_plus = static_cast<double>(w_plus2) / 2.0;
  res.w_minus = static_cast<double>(total2 - w_plus2) / 2.0;
  res.r_rb = (res.w_plus - res.w_minus) / (res.w_plus + res.w_minus);

  if (n <= kExactWilcoxonLimit) {
    res.exact = true;
    res.p_one_sided = stats_detail::upper_tail_exact(ranked.rank2, w_plus2);
  } else {
    res.exact = false;
    const double nn = static_cast<double>(n);
    const double mean = nn * (nn + 1.0) / 4.0;
    double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0;
    for (std::size_t t : ranked.tie_sizes) {
      const double tt = static_cast<double>(t);
      var -= (tt * tt * tt - tt) / 48.0;
    }
    const double z = (res.w_plus - mean - 0.5) / std::sqrt(var);
    res.p_one_sided = stats_detail::normal_upper_tail(z);
  }
  return res;
}

/// min(1, p * m).
inline double bonferroni(double p, int m) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("bonferroni: p outside [0, 1]");
  if (m < 1) throw std::invalid_argument("bonferroni: m must be >= 1");
  return std::min(1.0, p * static_cast<double>(m));
}

inline double mean_of(const std::vector<double>& v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

/// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
inline double sample_sd(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

struct ConditionSummary {
  double mean = 0.0;  // mean of per-task means
  double sd = 0.0;    // SD across per-task means
};

struct MetricTest {
  Metric metric;
  std::vector<PairedSample> pairs;
  WilcoxonResult test;
  double p_corrected = 1.0;  // Bonferroni x7 for per-rule metrics, else p
  ConditionSummary default_summary;
  ConditionSummary constrained_summary;
  bool significant = false;  // p_corrected < alpha
};

inline MetricTest run_metric_test(const std::vector<ConversationResult>& results,
                                  const Metric& metric, double alpha) {
  MetricTest t;
  t.metric = metric;
  t.pairs = aggregate_task_means(results, metric);
  t.test = wilcoxon_one_sided(t.pairs);
  t.p_corrected = metric.kind == MetricKind::RuleMarkers
                      ? bonferroni(t.test.p_one_sided, static_cast<int>(kRuleCount))
                      : t.test.p_one_sided;
  std::vector<double> dm, cm;
  for (const auto& p : t.pairs) {
    dm.push_back(p.default_mean);
    cm.push_back(p.constrained_mean);
  }
  t.default_summary = {mean_of(dm), sample_sd(dm)};
  t.constrained_summary = {mean_of(cm), sample_sd(cm)};
  t.significant = !t.test.degenerate && t.p_corrected < alpha;
  return t;
}

struct ConditionTotals {
  std::size_t conversations = 0;
  std::size_t compliant = 0;
  std::size_t assistant_turns = 0;
  std::size_t truncated_turns = 0;
  std::size_t empty_outputs = 0;
  std::size_t words = 0;
  MarkerCounts markers;
  std::optional<double> mean_prepend_fraction;  // pooled over scored sentences
};

struct StatsBundle {
  std::size_t tasks = 0;
  double alpha = 0.05;
  ConditionTotals default_totals;
  ConditionTotals constrained_totals;
  MetricTest total;
  std::vector<MetricTest> per_rule;  // R1..R7
  MetricTest words;
  MetricTest words_raw;
  std::optional<MetricTest> anthroscore;

  const ConditionTotals& totals(Condition c) const {
    return c == Condition::Default ? default_totals : constrained_totals;
  }
  /// 1 - constrained/default total markers; NaN when default has none.
  double reduction() const {
    const auto d = default_totals.markers.total();
    if (d == 0) return std::numeric_limits<double>::quiet_NaN();
    return 1.0 - static_cast<double>(constrained_totals.markers.total()) / static_cast<double>(d);
  }
};

inline bool has_anthroscore(const std::vector<ConversationResult>& results) {
  return std::any_of(results.begin(), results.end(),
                     [](const ConversationResult& r) { return r.anthroscore.has_value(); });
}

/// Every number reported for a corpus: sums, tests, compliance, truncation.
/// The AnthroScore test is present only when scores exist.
inline StatsBundle summary_block(const std::vector<ConversationResult>& results,
                                 double alpha = 0.05) {
  if (results.empty()) throw StatsError("summary: no results");
  StatsBundle b;
  b.alpha = alpha;
  double prepended[2] = {0.0, 0.0};
  double scored[2] = {0.0, 0.0};
  for (const auto& r : results) {
    auto& t = r.key.condition == Condition::Default ? b.default_totals : b.constrained_totals;
    ++t.conversations;
    if (r.verdict.compliant) ++t.compliant;
    t.assistant_turns += r.assistant_turns;
    t.truncated_turns += r.truncated_turns;
    if (r.empty_output) ++t.empty_outputs;
    t.words += r.words;
    t.markers += r.counts;
    if (r.prepend_fraction && r.scored_sentences && *r.scored_sentences > 0) {
      const auto c = static_cast<std::size_t>(r.key.condition);
      const auto n = static_cast<double>(*r.scored_sentences);
      prepended[c] += *r.prepend_fraction * n;
      scored[c] += n;
    }
  }
  if (scored[0] > 0) b.default_totals.mean_prepend_fraction = prepended[0] / scored[0];
  if (scored[1] > 0) b.constrained_totals.mean_prepend_fraction = prepended[1] / scored[1];

  b.total = run_metric_test(results, Metric::total(), alpha);
  b.tasks = b.total.pairs.size();
  for (RuleId r : kAllRules) b.per_rule.push_back(run_metric_test(results, Metric::of_rule(r), alpha));
  b.words = run_metric_test(results, Metric::words(), alpha);
  b.words_raw = run_metric_test(results, Metric::words_raw(), alpha);
  if (has_anthroscore(results)) {
    b.anthroscore = run_metric_test(results, Metric::anthroscore(), alpha);
  }
  return b;
}

}  // namespace anthroreg
