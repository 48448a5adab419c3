// anthroreg: lint LLM output for anthropomorphic register, run the
// two-condition experiment, and analyse the resulting corpus.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "anthroreg/anthroreg.hpp"
#include "anthroreg/anthropic_client.hpp"

namespace {

using namespace anthroreg;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitViolations = 1;
constexpr int kExitError = 2;

struct ScanFlags {
  std::string overlap = "independent";
  std::string spaces = "single";
  std::string edges = "word-edges";
  bool no_curly = false;
  bool ascii_words = false;
  bool no_strip = false;
  std::string lexicon_path;

  void attach(CLI::App* app) {
    app->add_option("--overlap", overlap, "Overlap policy across patterns")
        ->check(CLI::IsMember({"independent", "per-rule", "suppress-contained"}));
    app->add_option("--spaces", spaces, "What a space inside a pattern matches")
        ->check(CLI::IsMember({"single", "horizontal", "any"}));
    app->add_option("--edges", edges, "Boundary rule at pattern edges")
        ->check(CLI::IsMember({"word-edges", "regex-literal"}));
    app->add_flag("--no-curly", no_curly, "Do not match U+2019 for apostrophes");
    app->add_flag("--ascii-words", ascii_words, "Treat only ASCII [A-Za-z0-9_] as word characters");
    app->add_flag("--no-strip", no_strip, "Scan raw text without removing code");
    app->add_option("--lexicon", lexicon_path, "Alternative lexicon asset (TSV)");
  }

  ScanOptions options() const {
    ScanOptions o;
    o.overlap = overlap == "per-rule"             ? OverlapPolicy::PerRuleAlternation
                : overlap == "suppress-contained" ? OverlapPolicy::SuppressContained
                                                  : OverlapPolicy::Independent;
    o.spaces = spaces == "horizontal" ? SpaceMode::HorizontalRun
               : spaces == "any"      ? SpaceMode::AnyWhitespace
                                      : SpaceMode::Single;
    o.edges = edges == "regex-literal" ? EdgeBoundary::RegexLiteral : EdgeBoundary::WordEdges;
    o.curly_apostrophe = !no_curly;
    o.unicode_word_chars = !ascii_words;
    o.strip_code = !no_strip;
    return o;
  }

  Lexicon lexicon() const {
    if (lexicon_path.empty()) return compile_lexicon();
    auto lex = load_lexicon_file(lexicon_path, LexiconCheck::Lenient);
    if (lex.size() != kExpectedPatternCount) {
      std::cerr << "warning: lexicon " << lexicon_path << " has " << lex.size()
                << " patterns (reference: " << kExpectedPatternCount << ")\n";
    }
    return lex;
  }
};

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

std::string excerpt(std::string_view text, Span span, std::size_t context = 30) {
  const auto lo = span.begin > context ? span.begin - context : 0;
  const auto hi = std::min(text.size(), span.end + context);
  std::string out;
  for (char c : text.substr(lo, hi - lo)) out.push_back(c == '\n' || c == '\t' ? ' ' : c);
  return out;
}

// ---------------------------------------------------------------------------

int cmd_lint(const std::string& file, bool as_json, bool dump_prose, const ScanFlags& flags) {
  const auto lexicon = flags.lexicon();
  const auto opt = flags.options();
  const std::string raw = read_input(file);
  const auto doc = opt.strip_code ? strip_code(raw) : [&] {
    ProseDocument d;
    d.raw = raw;
    d.prose = raw;
    d.segments.push_back({0, 0, raw.size()});
    return d;
  }();
  if (dump_prose) {
    std::cout << doc.prose;
    return kExitOk;
  }
  const auto hits = scan(doc, lexicon, opt);
  const auto counts = count_by_rule(hits);
  const auto v = verdict(counts);
  const std::string name = file.empty() || file == "-" ? "<stdin>" : file;

  if (as_json) {
    json findings = json::array();
    for (const auto& h : hits) {
      const Span raw_span{doc.to_raw(h.span.begin), doc.to_raw(h.span.end)};
      const auto [line, col] = line_col(raw, raw_span.begin);
      findings.push_back({{"rule", rule_name(h.rule)},
                          {"pattern", h.pattern},
                          {"matched", h.matched},
                          {"start", raw_span.begin},
                          {"end", raw_span.end},
                          {"line", line},
                          {"column", col},
                          {"excerpt", excerpt(raw, raw_span)}});
    }
    json per_rule = json::object();
    for (RuleId r : kAllRules) per_rule[std::string(rule_name(r))] = counts[r];
    json violated = json::array();
    for (RuleId r : v.violated_rules) violated.push_back(rule_name(r));
    std::cout << json{{"file", name},
                      {"compliant", v.compliant},
                      {"total", counts.total()},
                      {"counts", per_rule},
                      {"violated_rules", violated},
                      {"findings", findings}}
                     .dump(2)
              << '\n';
  } else {
    for (const auto& h : hits) {
      const Span raw_span{doc.to_raw(h.span.begin), doc.to_raw(h.span.end)};
      const auto [line, col] = line_col(raw, raw_span.begin);
      std::cout << name << ':' << line << ':' << col << '\t' << rule_name(h.rule) << '\t'
                << h.pattern << '\t' << raw_span.begin << '-' << raw_span.end << '\t'
                << excerpt(raw, raw_span) << '\n';
    }
  }
  return v.compliant ? kExitOk : kExitViolations;
}

int cmd_lexicon(bool dump, const ScanFlags& flags) {
  if (dump) {
    std::cout << assets::kLexiconTsv;
    return kExitOk;
  }
  const auto lex = flags.lexicon();
  std::cout << "patterns: " << lex.size() << " (reference " << kExpectedPatternCount << ")\n";
  bool ok = lex.size() == kExpectedPatternCount;
  for (RuleId r : kAllRules) {
    const bool match = lex.count(r) == kExpectedRuleCounts[index_of(r)];
    ok = ok && match;
    std::cout << rule_name(r) << "  " << lex.count(r) << (match ? "" : "  MISMATCH") << "  "
              << rule_description(r) << ":";
    for (const auto& p : patterns_for(r, lex)) std::cout << " \"" << p.surface << '"';
    std::cout << '\n';
  }
  std::cout << "sha256: " << lex.source_sha256() << '\n';
  return ok ? kExitOk : kExitViolations;
}

int cmd_scan(const std::string& corpus_dir, const std::string& layout_name, bool strict,
             const std::string& out_path, unsigned threads, int replicates, const ScanFlags& flags) {
  const auto layout = parse_layout(layout_name);
  if (!layout) throw std::runtime_error("unknown layout " + layout_name);
  const auto lexicon = flags.lexicon();
  const auto opt = flags.options();
  const auto corpus = load_corpus(corpus_dir, *layout, strict);
  for (const auto& issue : corpus.issues) {
    std::cerr << "issue: " << issue.path.string() << ": " << issue.reason << '\n';
  }
  ResultsFile file;
  file.header.lexicon_sha256 = lexicon.source_sha256();
  file.header.scan_options = options_to_json(opt);
  file.results = scan_corpus(corpus.conversations, lexicon, opt, threads);
  persist_results(file, out_path);

  std::size_t empty = 0;
  for (const auto& r : file.results) empty += r.empty_output ? 1 : 0;
  std::cerr << "conversations: " << corpus.conversations.size() << " from " << corpus.call_records
            << " call records; issues: " << corpus.issues.size() << "; empty outputs: " << empty
            << '\n';
  if (replicates > 0) {
    const auto missing = missing_cells(corpus.conversations, task_ids_of(corpus.conversations), replicates);
    std::cerr << "completeness: " << missing.size() << " missing cells\n";
    for (const auto& k : missing) std::cerr << "  missing " << to_string(k) << '\n';
  }
  return corpus.issues.empty() ? kExitOk : kExitViolations;
}

std::vector<std::string> split_command(const std::string& cmd) {
  std::istringstream is(cmd);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

int cmd_score(const std::string& results_path, const std::string& corpus_dir,
              const std::string& layout_name, const std::string& scorer_cmd,
              const std::string& out_path) {
  const auto layout = parse_layout(layout_name);
  if (!layout) throw std::runtime_error("unknown layout " + layout_name);
  auto file = load_results(results_path);
  const auto sep = file.header.scan_options.value("turn_separator", std::string(kTurnSeparator));
  auto corpus = load_corpus(corpus_dir, *layout, false);
  ScorerProcess scorer(split_command(scorer_cmd));
  (void)sep;
  attach_anthroscores(file.results, corpus.conversations, scorer);
  file.header.scorer = scorer.handshake().raw;
  persist_results(file, out_path.empty() ? results_path : out_path);
  std::size_t unscoreable = 0;
  for (const auto& r : file.results) unscoreable += r.anthroscore ? 0 : 1;
  std::cerr << "scored " << file.results.size() - unscoreable << " conversations; unscoreable: "
            << unscoreable << '\n';
  return kExitOk;
}

int cmd_stats(const std::string& results_path, const std::string& metric_name_arg,
              const std::string& rule_arg, double alpha, bool as_json) {
  const auto file = load_results(results_path);
  if (!metric_name_arg.empty() || !rule_arg.empty()) {
    std::optional<Metric> m;
    if (!rule_arg.empty()) {
      const auto r = parse_rule(rule_arg);
      if (!r) throw std::runtime_error("unknown rule " + rule_arg);
      m = Metric::of_rule(*r);
    } else {
      m = parse_metric(metric_name_arg);
      if (!m) throw std::runtime_error("unknown metric " + metric_name_arg);
    }
    if (m->kind == MetricKind::AnthroScore && !has_anthroscore(file.results)) {
      std::cerr << "anthroscore: not computed in " << results_path << '\n';
      return kExitError;
    }
    const auto t = run_metric_test(file.results, *m, alpha);
    if (as_json) {
      std::cout << to_json(t).dump(2) << '\n';
    } else {
      std::printf("%s: default %.4f (sd %.4f) vs constrained %.4f (sd %.4f)\n", metric_name(*m).c_str(),
                  t.default_summary.mean, t.default_summary.sd, t.constrained_summary.mean,
                  t.constrained_summary.sd);
      std::printf("  W+ = %.1f, W- = %.1f, n_eff = %zu, p = %.6g, p_corr = %.6g, r_rb = %.4f%s\n",
                  t.test.w_plus, t.test.w_minus, t.test.n_effective, t.test.p_one_sided,
                  t.p_corrected, t.test.r_rb, t.significant ? " *" : "");
    }
    return kExitOk;
  }
  const auto bundle = summary_block(file.results, alpha);
  if (as_json) {
    std::cout << to_json(bundle).dump(2) << '\n';
  } else {
    std::cout << render_summary(bundle) << '\n' << render_csv(bundle);
  }
  return kExitOk;
}

int cmd_report(const std::string& results_path, const std::string& format,
               const std::string& out_dir, const std::string& figure) {
  const auto file = load_results(results_path);
  const auto bundle = summary_block(file.results);
  if (format == "text") {
    std::cout << render_summary(bundle);
  } else if (format == "json") {
    std::cout << to_json(bundle).dump(2) << '\n';
  } else {
    std::cout << render_csv(bundle);
  }
  if (!out_dir.empty()) {
    std::vector<FigureId> figs;
    if (figure == "all" || figure == "fig2") figs.push_back(FigureId::MarkersByRule);
    if ((figure == "all" && bundle.anthroscore) || figure == "fig3") {
      figs.push_back(FigureId::AnthroScoreDistribution);
    }
    for (auto id : figs) {
      for (const auto& p : export_figure_data(bundle, id, out_dir)) {
        std::cerr << "wrote " << p.string() << '\n';
      }
    }
    std::ofstream(std::filesystem::path(out_dir) / "summary.txt") << render_summary(bundle);
    std::ofstream(std::filesystem::path(out_dir) / "summary.json") << to_json(bundle).dump(2) << '\n';
    std::ofstream(std::filesystem::path(out_dir) / "rules.csv") << render_csv(bundle);
  }
  return kExitOk;
}

// Offline stand-in for the API: canned replies derived from the request.
class EchoClient : public ChatClient {
 public:
  ChatResponse send(const ChatRequest& req) override {
    ChatResponse r;
    r.text = req.system ? "Reading the task. Result follows." : "Let me take a look at this for you.";
    return r;
  }
};

int cmd_run(const std::string& config_path, bool resume, bool dry_run, const std::string& client_name) {
  const auto config = load_experiment_config(config_path);
  if (dry_run) {
    const auto voice = voice_model();
    for (const auto& cell : plan_cells(config)) {
      std::cout << to_string(cell.key) << "\tsystem=" << (cell.has_system_prompt ? voice.sha256.substr(0, 12) : "none")
                << "\tfollowup=" << json(cell.followup).dump() << '\n';
    }
    std::cerr << plan_cells(config).size() << " cells, " << 2 * plan_cells(config).size()
              << " API calls\n";
    return kExitOk;
  }
  if (!resume && std::filesystem::exists(config.output_dir) &&
      !std::filesystem::is_empty(config.output_dir)) {
    std::cerr << "output directory " << config.output_dir.string()
              << " is not empty; pass --resume to continue it\n";
    return kExitError;
  }
  std::unique_ptr<ChatClient> client;
  if (client_name == "echo") {
    client = std::make_unique<EchoClient>();
  } else {
    client = std::make_unique<AnthropicClient>(AnthropicClient::from_env());
  }
  RunHooks hooks;
  hooks.progress = [](const CellKey& k, std::size_t done, std::size_t total) {
    std::cerr << '[' << done << '/' << total << "] " << to_string(k) << '\n';
  };
  const auto report = run_experiment(config, *client, hooks);
  std::cerr << "cells run: " << report.cells_run << ", skipped (complete): " << report.cells_skipped
            << ", failed: " << report.failures.size() << ", API calls: " << report.api_calls << '\n';
  for (const auto& f : report.failures) std::cerr << "failed " << to_string(f.key) << ": " << f.reason << '\n';
  return report.failures.empty() ? kExitOk : kExitViolations;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anthropomorphic register linter and experiment toolchain"};
  app.require_subcommand(1);

  ScanFlags lint_flags, lex_flags, scan_flags;

  auto* lint = app.add_subcommand("lint", "Scan one document; exit 0 iff no markers");
  std::string lint_file = "-";
  bool lint_json = false, dump_prose = false;
  lint->add_option("file", lint_file, "Input file ('-' for standard input)");
  lint->add_flag("--json", lint_json, "Structured output");
  lint->add_flag("--dump-prose", dump_prose, "Print the code-stripped prose and exit");
  lint_flags.attach(lint);

  auto* lex = app.add_subcommand("lexicon", "Audit or print the marker lexicon");
  bool lex_dump = false;
  lex->add_flag("--dump", lex_dump, "Print the embedded lexicon asset");
  lex->add_option("--lexicon", lex_flags.lexicon_path, "Alternative lexicon asset (TSV)");

  auto* scan_cmd = app.add_subcommand("scan", "Measure every conversation of a transcript corpus");
  std::string corpus_dir, layout = "native", scan_out = "results.jsonl";
  bool strict = false;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  int replicates = 0;
  scan_cmd->add_option("--corpus", corpus_dir, "Transcript directory")->required();
  scan_cmd->add_option("--layout", layout, "native or zenodo")->check(CLI::IsMember({"native", "zenodo"}));
  scan_cmd->add_flag("--strict", strict, "Abort on the first malformed transcript");
  scan_cmd->add_option("--out", scan_out, "Results file (JSONL)");
  scan_cmd->add_option("--threads", threads, "Worker threads");
  scan_cmd->add_option("--replicates", replicates, "Check grid completeness for this many replicates");
  scan_flags.attach(scan_cmd);

  auto* score = app.add_subcommand("score", "Attach AnthroScore values from a scorer process");
  std::string score_results, score_corpus, score_layout = "native", scorer_cmd, score_out;
  score->add_option("--results", score_results, "Results file to update")->required();
  score->add_option("--corpus", score_corpus, "Transcript directory")->required();
  score->add_option("--layout", score_layout, "native or zenodo");
  score->add_option("--scorer", scorer_cmd, "Scorer command line")->required();
  score->add_option("--out", score_out, "Output results file (default: overwrite input)");

  auto* stats = app.add_subcommand("stats", "Paired Wilcoxon statistics over a results file");
  std::string stats_results, metric, rule;
  double alpha = 0.05;
  bool stats_json = false;
  stats->add_option("results", stats_results, "Results file")->required();
  stats->add_option("--metric", metric, "total, words, words_raw, anthroscore or R1..R7");
  stats->add_option("--rule", rule, "Per-rule test (Bonferroni x7)");
  stats->add_option("--alpha", alpha, "Significance threshold");
  stats->add_flag("--json", stats_json, "Structured output");

  auto* report = app.add_subcommand("report", "Summary tables and figure data");
  std::string report_results, format = "text", out_dir, figure = "all";
  report->add_option("results", report_results, "Results file")->required();
  report->add_option("--format", format, "text, csv or json")->check(CLI::IsMember({"text", "csv", "json"}));
  report->add_option("--out-dir", out_dir, "Write figure CSVs and summaries here");
  report->add_option("--figure", figure, "fig2, fig3 or all")->check(CLI::IsMember({"fig2", "fig3", "all"}));

  auto* run = app.add_subcommand("run", "Run the two-condition experiment");
  std::string config_path, client_name = "anthropic";
  bool resume = false, dry_run = false;
  run->add_option("--config", config_path, "Experiment config (JSON)")->required();
  run->add_flag("--resume", resume, "Continue an existing output directory");
  run->add_flag("--dry-run", dry_run, "Print the request grid without calling the API");
  run->add_option("--client", client_name, "anthropic or echo (offline)")
      ->check(CLI::IsMember({"anthropic", "echo"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitError;
  }

  try {
    if (*lint) return cmd_lint(lint_file, lint_json, dump_prose, lint_flags);
    if (*lex) return cmd_lexicon(lex_dump, lex_flags);
    if (*scan_cmd) return cmd_scan(corpus_dir, layout, strict, scan_out, threads, replicates, scan_flags);
    if (*score) return cmd_score(score_results, score_corpus, score_layout, scorer_cmd, score_out);
    if (*stats) return cmd_stats(stats_results, metric, rule, alpha, stats_json);
    if (*report) return cmd_report(report_results, format, out_dir, figure);
    if (*run) return cmd_run(config_path, resume, dry_run, client_name);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
