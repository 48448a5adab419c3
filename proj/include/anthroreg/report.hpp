#pragma once

// Tables and figure-ready data derived from a StatsBundle.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "anthroreg/stats.hpp"

namespace anthroreg {

class ReportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class FigureId { MarkersByRule, AnthroScoreDistribution };

inline std::optional<FigureId> parse_figure(std::string_view s) {
  if (s == "fig2" || s == "markers") return FigureId::MarkersByRule;
  if (s == "fig3" || s == "anthroscore") return FigureId::AnthroScoreDistribution;
  return std::nullopt;
}

struct FigureRow {
  std::string key;
  double value = 0.0;
  std::optional<double> dispersion;
};

struct FigureSeries {
  std::string label;  // also the CSV file stem
  std::vector<FigureRow> rows;
};

/// Below this many tasks the rendered summary carries a small-sample warning.
inline constexpr std::size_t kSmallSampleTasks = 10;

namespace report_detail {

inline std::string fmt(double v, int precision) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

inline std::string fmt_p(double p) {
  char buf[64];
  if (p != 0.0 && p < 1e-4) {
    std::snprintf(buf, sizeof buf, "%.3e", p);
  } else {
    std::snprintf(buf, sizeof buf, "%.4f", p);
  }
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace report_detail

/// Reduction as a percentage truncated to one decimal, so the printed value
/// never overstates the underlying ratio.
inline double reduction_percent_floor(double reduction) {
  return std::floor(reduction * 1000.0 + 1e-9) / 10.0;
}

/// ">97%" style headline: the largest whole percent strictly below the
/// reduction, or an exact "97%" when it is whole.
inline std::string reduction_headline(double reduction) {
  const double pct = reduction * 100.0;
  const double whole = std::floor(pct + 1e-9);
  char buf[32];
  if (std::fabs(pct - whole) < 1e-9) {
    std::snprintf(buf, sizeof buf, "%.0f%%", whole);
  } else {
    std::snprintf(buf, sizeof buf, ">%.0f%%", whole);
  }
  return buf;
}

/// Series for one figure. fig2: per-rule mean marker count per task with
/// SD across tasks, per condition. fig3: per-task AnthroScore means per
/// condition, plus condition means.
inline std::vector<FigureSeries> figure_series(const StatsBundle& b, FigureId id) {
  std::vector<FigureSeries> out;
  if (id == FigureId::MarkersByRule) {
    FigureSeries s{"fig2_markers_by_rule", {}};
    for (const auto& t : b.per_rule) {
      const auto rule = metric_name(t.metric);
      s.rows.push_back({rule + "/default", t.default_summary.mean, t.default_summary.sd});
      s.rows.push_back({rule + "/constrained", t.constrained_summary.mean, t.constrained_summary.sd});
    }
    out.push_back(std::move(s));
  } else {
    if (!b.anthroscore) throw ReportError("AnthroScore not computed for this results file");
    const auto& a = *b.anthroscore;
    FigureSeries tasks{"fig3_anthroscore_by_task", {}};
    for (const auto& p : a.pairs) {
      tasks.rows.push_back({p.task_id + "/default", p.default_mean, std::nullopt});
      tasks.rows.push_back({p.task_id + "/constrained", p.constrained_mean, std::nullopt});
    }
    FigureSeries means{"fig3_condition_means", {}};
    means.rows.push_back({"default", a.default_summary.mean, std::nullopt});
    means.rows.push_back({"constrained", a.constrained_summary.mean, std::nullopt});
    out.push_back(std::move(tasks));
    out.push_back(std::move(means));
  }
  return out;
}

/// CSV text for a series. The key "<a>/<b>" splits into two columns.
inline std::string series_csv(const FigureSeries& s) {
  using report_detail::csv_field;
  using report_detail::full;
  std::ostringstream os;
  const bool split = !s.rows.empty() && s.rows.front().key.find('/') != std::string::npos;
  const bool disp = !s.rows.empty() && s.rows.front().dispersion.has_value();
  if (s.label == "fig2_markers_by_rule") {
    os << "rule,condition,mean,sd\n";
  } else if (split) {
    os << "task_id,condition,mean_score" << (disp ? ",sd" : "") << "\n";
  } else {
    os << "condition,mean" << (disp ? ",sd" : "") << "\n";
  }
  for (const auto& r : s.rows) {
    if (split) {
      const auto slash = r.key.rfind('/');
      os << csv_field(r.key.substr(0, slash)) << ',' << r.key.substr(slash + 1);
    } else {
      os << csv_field(r.key);
    }
    os << ',' << full(r.value);
    if (disp) os << ',' << (r.dispersion ? full(*r.dispersion) : "");
    os << '\n';
  }
  return os.str();
}

/// Writes one CSV per series into `dir`. All content is produced before the
/// first file is touched, so a failure leaves no partial output.
inline std::vector<std::filesystem::path> export_figure_data(const StatsBundle& b, FigureId id,
                                                             const std::filesystem::path& dir) {
  const auto series = figure_series(b, id);
  std::vector<std::pair<std::filesystem::path, std::string>> files;
  for (const auto& s : series) files.emplace_back(dir / (s.label + ".csv"), series_csv(s));
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  for (const auto& [path, text] : files) {
    auto tmp = path;
    tmp += ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw ReportError("cannot write " + tmp.string());
      out << text;
    }
    std::filesystem::rename(tmp, path);
    written.push_back(path);
  }
  return written;
}

inline nlohmann::json to_json(const WilcoxonResult& w) {
  return {{"w_plus", w.w_plus},         {"w_minus", w.w_minus},
          {"n_pairs", w.n_pairs},       {"n_effective", w.n_effective},
          {"p_one_sided", w.p_one_sided}, {"r_rb", w.r_rb},
          {"degenerate", w.degenerate}, {"exact", w.exact}};
}

inline nlohmann::json to_json(const MetricTest& t) {
  nlohmann::json tasks = nlohmann::json::array();
  for (const auto& p : t.pairs) {
    tasks.push_back({{"task_id", p.task_id},
                     {"default_mean", p.default_mean},
                     {"constrained_mean", p.constrained_mean}});
  }
  return {{"metric", metric_name(t.metric)},
          {"wilcoxon", to_json(t.test)},
          {"p_corrected", t.p_corrected},
          {"significant", t.significant},
          {"default", {{"mean", t.default_summary.mean}, {"sd", t.default_summary.sd}}},
          {"constrained", {{"mean", t.constrained_summary.mean}, {"sd", t.constrained_summary.sd}}},
          {"tasks", tasks}};
}

inline nlohmann::json to_json(const ConditionTotals& c) {
  nlohmann::json markers = nlohmann::json::object();
  for (RuleId r : kAllRules) markers[std::string(rule_name(r))] = c.markers[r];
  markers["total"] = c.markers.total();
  return {{"conversations", c.conversations},
          {"compliant", c.compliant},
          {"assistant_turns", c.assistant_turns},
          {"truncated_turns", c.truncated_turns},
          {"empty_outputs", c.empty_outputs},
          {"words", c.words},
          {"markers", markers},
          {"mean_prepend_fraction",
           c.mean_prepend_fraction ? nlohmann::json(*c.mean_prepend_fraction) : nlohmann::json()}};
}

inline nlohmann::json to_json(const StatsBundle& b) {
  nlohmann::json rules = nlohmann::json::array();
  for (const auto& t : b.per_rule) rules.push_back(to_json(t));
  return {{"tasks", b.tasks},
          {"alpha", b.alpha},
          {"default", to_json(b.default_totals)},
          {"constrained", to_json(b.constrained_totals)},
          {"reduction", b.reduction()},
          {"total", to_json(b.total)},
          {"per_rule", rules},
          {"words", to_json(b.words)},
          {"words_raw", to_json(b.words_raw)},
          {"anthroscore", b.anthroscore ? to_json(*b.anthroscore) : nlohmann::json()}};
}

/// Per-rule table as CSV.
inline std::string render_csv(const StatsBundle& b) {
  using report_detail::full;
  std::ostringstream os;
  os << "metric,default_total,constrained_total,default_mean,default_sd,constrained_mean,"
        "constrained_sd,w_plus,w_minus,n_effective,p_one_sided,p_corrected,r_rb\n";
  auto row = [&](const MetricTest& t, std::optional<std::size_t> d_tot,
                 std::optional<std::size_t> c_tot) {
    os << metric_name(t.metric) << ',' << (d_tot ? std::to_string(*d_tot) : "") << ','
       << (c_tot ? std::to_string(*c_tot) : "") << ',' << full(t.default_summary.mean) << ','
       << full(t.default_summary.sd) << ',' << full(t.constrained_summary.mean) << ','
       << full(t.constrained_summary.sd) << ',' << full(t.test.w_plus) << ','
       << full(t.test.w_minus) << ',' << t.test.n_effective << ',' << full(t.test.p_one_sided)
       << ',' << full(t.p_corrected) << ',' << full(t.test.r_rb) << '\n';
  };
  row(b.total, b.default_totals.markers.total(), b.constrained_totals.markers.total());
  for (std::size_t i = 0; i < b.per_rule.size(); ++i) {
    const auto r = kAllRules[i];
    row(b.per_rule[i], b.default_totals.markers[r], b.constrained_totals.markers[r]);
  }
  row(b.words, b.default_totals.words, b.constrained_totals.words);
  row(b.words_raw, std::nullopt, std::nullopt);
  if (b.anthroscore) row(*b.anthroscore, std::nullopt, std::nullopt);
  return os.str();
}

/// Human-readable summary.
inline std::string render_summary(const StatsBundle& b) {
  using report_detail::fmt;
  using report_detail::fmt_p;
  std::ostringstream os;
  const auto& d = b.default_totals;
  const auto& c = b.constrained_totals;

  os << "Anthropomorphic register summary\n";
  os << "Tasks: N = " << b.tasks << "; conversations: " << d.conversations << " default, "
     << c.conversations << " constrained\n";
  if (b.tasks < kSmallSampleTasks) {
    os << "WARNING: small sample (N = " << b.tasks
       << " tasks); exact p-values cannot fall below 2^-N.\n";
  }
  os << '\n';

  const auto dt = d.markers.total();
  const auto ct = c.markers.total();
  os << "Total markers: " << dt << " (default) -> " << ct << " (constrained)";
  if (dt > 0) {
    os << ", " << fmt(reduction_percent_floor(b.reduction()), 1) << "% reduction ("
       << reduction_headline(b.reduction()) << ")";
  }
  os << "\n  one-sided paired Wilcoxon p = " << fmt_p(b.total.test.p_one_sided)
     << ", r_rb = " << fmt(b.total.test.r_rb, 2) << ", W+ = " << fmt(b.total.test.w_plus, 1)
     << ", n_eff = " << b.total.test.n_effective << (b.total.test.exact ? " (exact)" : " (normal approx.)")
     << "\n\n";

  os << "Rule  Description                  Default  Constr.  mean(d)   mean(c)   p         p_corr(x7)\n";
  for (std::size_t i = 0; i < b.per_rule.size(); ++i) {
    const auto r = kAllRules[i];
    const auto& t = b.per_rule[i];
    char line[256];
    std::snprintf(line, sizeof line, "%-5s %-28s %7zu  %7zu  %-9s %-9s %-9s %s%s\n",
                  std::string(rule_name(r)).c_str(), std::string(rule_description(r)).c_str(),
                  d.markers[r], c.markers[r], fmt(t.default_summary.mean, 3).c_str(),
                  fmt(t.constrained_summary.mean, 3).c_str(),
                  t.test.degenerate ? "-" : fmt_p(t.test.p_one_sided).c_str(),
                  t.test.degenerate ? "-" : fmt_p(t.p_corrected).c_str(),
                  t.test.degenerate ? " (no nonzero differences)" : "");
    os << line;
  }
  os << '\n';

  auto pct = [](std::size_t a, std::size_t n) {
    return n == 0 ? std::string("n/a") : fmt(100.0 * static_cast<double>(a) / static_cast<double>(n), 1) + "%";
  };
  os << "Compliance (zero markers): constrained " << c.compliant << " of " << c.conversations << " ("
     << pct(c.compliant, c.conversations) << "); default " << d.compliant << " of "
     << d.conversations << " (" << pct(d.compliant, d.conversations) << ")\n";

  const double wd = b.words.default_summary.mean;
  const double wc = b.words.constrained_summary.mean;
  os << "Words per conversation (code stripped): " << fmt(wd, 1) << " (default) vs " << fmt(wc, 1)
     << " (constrained)";
  if (wd > 0) os << ", " << fmt(100.0 * (1.0 - wc / wd), 1) << "% shorter";
  os << "; p = " << fmt_p(b.words.test.p_one_sided) << ", r_rb = " << fmt(b.words.test.r_rb, 2) << "\n";
  os << "Words per conversation (raw text): " << fmt(b.words_raw.default_summary.mean, 1) << " vs "
     << fmt(b.words_raw.constrained_summary.mean, 1) << "\n";

  const auto calls = d.assistant_turns + c.assistant_turns;
  const auto trunc = d.truncated_turns + c.truncated_turns;
  os << "Truncated calls (max_tokens): " << trunc << " of " << calls << " (" << pct(trunc, calls)
     << "); default " << d.truncated_turns << ", constrained " << c.truncated_turns << "\n";
  if (d.empty_outputs + c.empty_outputs > 0) {
    os << "Empty assistant output: " << d.empty_outputs << " default, " << c.empty_outputs
       << " constrained (counted as compliant with zero words)\n";
  }

  if (b.anthroscore) {
    const auto& a = *b.anthroscore;
    os << "AnthroScore: " << fmt(a.constrained_summary.mean, 2) << " +/- "
       << fmt(a.constrained_summary.sd, 2) << " (constrained) vs " << fmt(a.default_summary.mean, 2)
       << " +/- " << fmt(a.default_summary.sd, 2) << " (default); p = " << fmt_p(a.test.p_one_sided)
       << ", r_rb = " << fmt(a.test.r_rb, 2) << "\n";
    if (c.mean_prepend_fraction && d.mean_prepend_fraction) {
      os << "  prepend share: " << fmt(100.0 * *c.mean_prepend_fraction, 1) << "% constrained, "
         << fmt(100.0 * *d.mean_prepend_fraction, 1) << "% default\n";
    }
  } else {
    os << "AnthroScore: not computed\n";
  }
  return os.str();
}

}  // namespace anthroreg
