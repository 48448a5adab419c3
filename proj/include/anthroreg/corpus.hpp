#pragma once

// Transcript ingestion, per-conversation results and their JSONL persistence.

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "anthroreg/conversation.hpp"
#include "anthroreg/detector.hpp"
#include "anthroreg/lexicon.hpp"
#include "anthroreg/sha256.hpp"

namespace anthroreg {

namespace fs = std::filesystem;
using json = nlohmann::json;

class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class CorpusLayout { Native, Zenodo };

inline std::optional<CorpusLayout> parse_layout(std::string_view s) {
  if (s == "native") return CorpusLayout::Native;
  if (s == "zenodo") return CorpusLayout::Zenodo;
  return std::nullopt;
}

/// One API call as stored on disk.
struct CallRecord {
  CellKey key;
  Category category = Category::ErrorDiagnosis;
  std::string model;
  int turn_index = 0;
  std::optional<std::string> system_prompt_sha256;
  RequestParams params;
  std::vector<Turn> messages;  // request messages, user first
  std::string response_text;
  std::string stop_reason;
  fs::path source;
};

struct LoadIssue {
  fs::path path;
  std::string reason;
};

struct LoadedCorpus {
  std::vector<Conversation> conversations;  // sorted by key
  std::vector<LoadIssue> issues;
  std::size_t call_records = 0;
};

inline constexpr std::string_view kStopMaxTokens = "max_tokens";

inline json to_json(const CallRecord& r) {
  json messages = json::array();
  for (const auto& m : r.messages) {
    messages.push_back({{"role", role_name(m.role)}, {"content", m.content}});
  }
  json request = {{"temperature", r.params.temperature}, {"max_tokens", r.params.max_tokens}};
  request["system_prompt_sha256"] =
      r.system_prompt_sha256 ? json(*r.system_prompt_sha256) : json(nullptr);
  return {{"task_id", r.key.task_id},
          {"category", category_name(r.category)},
          {"condition", condition_name(r.key.condition)},
          {"replicate", r.key.replicate},
          {"model", r.model},
          {"turn_index", r.turn_index},
          {"request", request},
          {"messages", messages},
          {"response_text", r.response_text},
          {"stop_reason", r.stop_reason}};
}

namespace corpus_detail {

inline const json& require(const json& j, const char* field) {
  if (!j.is_object() || !j.contains(field)) {
    throw CorpusError(std::string("missing field '") + field + "'");
  }
  return j.at(field);
}

inline std::string require_string(const json& j, const char* field) {
  const auto& v = require(j, field);
  if (!v.is_string()) throw CorpusError(std::string("field '") + field + "' must be a string");
  return v.get<std::string>();
}

inline int require_int(const json& j, const char* field) {
  const auto& v = require(j, field);
  if (!v.is_number_integer()) {
    throw CorpusError(std::string("field '") + field + "' must be an integer");
  }
  return v.get<int>();
}

}  // namespace corpus_detail

/// Validates and decodes one native transcript. Throws CorpusError with a
/// human-readable reason.
inline CallRecord parse_call_record(const json& j) {
  using namespace corpus_detail;
  CallRecord r;
  r.key.task_id = require_string(j, "task_id");
  if (r.key.task_id.empty()) throw CorpusError("empty task_id");
  const auto cat = parse_category(require_string(j, "category"));
  if (!cat) throw CorpusError("unknown category '" + j.at("category").get<std::string>() + "'");
  r.category = *cat;
  const auto cond = parse_condition(require_string(j, "condition"));
  if (!cond) throw CorpusError("unknown condition '" + j.at("condition").get<std::string>() + "'");
  r.key.condition = *cond;
  r.key.replicate = require_int(j, "replicate");
  if (r.key.replicate < 0) throw CorpusError("negative replicate");
  r.model = require_string(j, "model");
  r.turn_index = require_int(j, "turn_index");
  if (r.turn_index != 0 && r.turn_index != 1) throw CorpusError("turn_index must be 0 or 1");

  const auto& req = require(j, "request");
  const auto& sys = require(req, "system_prompt_sha256");
  if (!sys.is_null() && !sys.is_string()) {
    throw CorpusError("request.system_prompt_sha256 must be a string or null");
  }
  if (sys.is_string()) r.system_prompt_sha256 = sys.get<std::string>();
  const auto& temp = require(req, "temperature");
  if (!temp.is_number()) throw CorpusError("request.temperature must be a number");
  r.params.temperature = temp.get<double>();
  r.params.max_tokens = require_int(req, "max_tokens");
  if (r.key.condition == Condition::Constrained && !r.system_prompt_sha256) {
    throw CorpusError("constrained call without a system prompt");
  }
  if (r.key.condition == Condition::Default && r.system_prompt_sha256) {
    throw CorpusError("default call carries a system prompt");
  }

  const auto& msgs = require(j, "messages");
  if (!msgs.is_array()) throw CorpusError("messages must be an array");
  const std::size_t expected = static_cast<std::size_t>(2 * r.turn_index + 1);
  if (msgs.size() != expected) {
    throw CorpusError("turn " + std::to_string(r.turn_index) + " expects " +
                      std::to_string(expected) + " messages, found " +
                      std::to_string(msgs.size()));
  }
  for (std::size_t i = 0; i < msgs.size(); ++i) {
    const auto role = parse_role(require_string(msgs[i], "role"));
    const Role want = i % 2 == 0 ? Role::User : Role::Assistant;
    if (!role || *role != want) {
      throw CorpusError("message " + std::to_string(i) + " has role '" +
                        msgs[i].at("role").get<std::string>() + "', expected '" +
                        std::string(role_name(want)) + "'");
    }
    r.messages.push_back({*role, require_string(msgs[i], "content"), false, {}});
  }
  r.response_text = require_string(j, "response_text");
  r.stop_reason = require_string(j, "stop_reason");
  return r;
}

namespace corpus_detail {

inline const json* first_of(const json& j, std::initializer_list<const char*> names) {
  if (!j.is_object()) return nullptr;
  for (const char* n : names) {
    if (j.contains(n) && !j.at(n).is_null()) return &j.at(n);
  }
  return nullptr;
}

inline std::string content_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  std::string out;
  if (v.is_array()) {
    for (const auto& block : v) {
      if (block.is_object() && block.value("type", "text") == "text" && block.contains("text")) {
        out += block.at("text").get<std::string>();
      } else if (block.is_string()) {
        out += block.get<std::string>();
      }
    }
  }
  return out;
}

// Layout fallback: ..._<task>_<condition>_r<replicate>_t<turn>.json and
// similar. Only consulted for fields the document does not carry.
inline bool parse_filename(const fs::path& p, std::string& task, std::string& cond,
                           int& replicate, int& turn) {
  static const std::regex re(
      R"(^(.+?)[_\-.]+(default|constrained)[_\-.]+(?:r|rep|replicate)?[_\-]?(\d+)[_\-.]+(?:t|turn)[_\-]?(\d+)$)",
      std::regex::icase);
  std::smatch m;
  const std::string stem = p.stem().string();
  if (!std::regex_match(stem, m, re)) return false;
  task = m[1];
  cond = m[2];
  replicate = std::stoi(m[3]);
  turn = std::stoi(m[4]);
  return true;
}

}  // namespace corpus_detail

/// Rewrites a released-dataset document into the native schema. Field names
/// of the release are matched through aliases; the file name supplies any
/// cell coordinates missing from the document.
inline json zenodo_to_native(const json& j, const fs::path& path) {
  using namespace corpus_detail;
  json out = json::object();
  std::string f_task, f_cond;
  int f_rep = -1, f_turn = -1;
  const bool from_name = parse_filename(path, f_task, f_cond, f_rep, f_turn);
  const json* meta = first_of(j, {"metadata", "meta"});
  auto lookup = [&](std::initializer_list<const char*> names) -> const json* {
    if (const json* v = first_of(j, names)) return v;
    return meta ? first_of(*meta, names) : nullptr;
  };

  if (const json* v = lookup({"task_id", "task", "task_name"})) out["task_id"] = *v;
  else if (from_name) out["task_id"] = f_task;
  if (const json* v = lookup({"category", "task_category"})) out["category"] = *v;
  if (const json* v = lookup({"condition", "arm", "variant"})) out["condition"] = *v;
  else if (from_name) out["condition"] = f_cond;
  if (const json* v = lookup({"replicate", "replicate_index", "rep", "replicate_id", "run"})) {
    out["replicate"] = *v;
  } else if (from_name) {
    out["replicate"] = f_rep;
  }
  if (const json* v = lookup({"turn_index", "turn"})) out["turn_index"] = *v;
  else if (from_name) out["turn_index"] = f_turn;

  const json* response = first_of(j, {"response"});
  const json* resp_obj = response && response->is_object() ? response : nullptr;
  if (const json* v = lookup({"model", "model_id"})) out["model"] = *v;
  else if (resp_obj && resp_obj->contains("model")) out["model"] = resp_obj->at("model");

  if (const json* v = lookup({"response_text", "output", "text"})) {
    out["response_text"] = content_text(*v);
  } else if (resp_obj && resp_obj->contains("content")) {
    out["response_text"] = content_text(resp_obj->at("content"));
  } else if (response && response->is_string()) {
    out["response_text"] = *response;
  } else if (const json* c = first_of(j, {"content"})) {
    out["response_text"] = content_text(*c);
  }
  if (const json* v = lookup({"stop_reason", "finish_reason"})) out["stop_reason"] = *v;
  else if (resp_obj && resp_obj->contains("stop_reason")) out["stop_reason"] = resp_obj->at("stop_reason");

  const json* req = first_of(j, {"request", "params"});
  json request = json::object();
  const json* system = lookup({"system", "system_prompt"});
  if (!system && req) system = first_of(*req, {"system", "system_prompt"});
  if (system && system->is_string()) {
    request["system_prompt_sha256"] = sha256_hex(system->get<std::string>());
  } else if (req && req->contains("system_prompt_sha256")) {
    request["system_prompt_sha256"] = req->at("system_prompt_sha256");
  } else {
    request["system_prompt_sha256"] = nullptr;
  }
  const json* temp = lookup({"temperature"});
  if (!temp && req) temp = first_of(*req, {"temperature"});
  request["temperature"] = temp ? *temp : json(1.0);
  const json* max_tokens = lookup({"max_tokens"});
  if (!max_tokens && req) max_tokens = first_of(*req, {"max_tokens"});
  request["max_tokens"] = max_tokens ? *max_tokens : json(2048);
  out["request"] = request;

  const json* msgs = lookup({"messages", "conversation"});
  if (!msgs && req) msgs = first_of(*req, {"messages"});
  if (msgs && msgs->is_array()) {
    json m = json::array();
    for (const auto& e : *msgs) {
      m.push_back({{"role", e.value("role", "")},
                   {"content", content_text(e.contains("content") ? e.at("content") : json(""))}});
    }
    out["messages"] = m;
  }
  if (!out.contains("category")) {
    if (const json* v = lookup({"task_type"})) out["category"] = *v;
  }
  return out;
}

namespace corpus_detail {

inline std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw CorpusError("cannot read file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace corpus_detail

/// Builds a conversation from its turn records; `t1` may be null for a
/// conversation that stopped after the first call.
inline Conversation assemble_conversation(const CallRecord* t0, const CallRecord* t1) {
  const CallRecord& base = t1 ? *t1 : *t0;
  Conversation c;
  c.task_id = base.key.task_id;
  c.category = base.category;
  c.condition = base.key.condition;
  c.replicate = base.key.replicate;
  c.model_id = base.model;
  c.params = base.params;
  c.system_prompt_sha256 = base.system_prompt_sha256;
  c.turns = base.messages;
  c.turns.push_back({Role::Assistant, base.response_text, base.stop_reason == kStopMaxTokens,
                     base.stop_reason});
  if (t1 && t0) {
    // The turn-1 request echoes the turn-0 reply; truncation lives on the
    // turn-0 record.
    c.turns[1].truncated = t0->stop_reason == kStopMaxTokens;
    c.turns[1].stop_reason = t0->stop_reason;
  }
  return c;
}

/// Reads every *.json transcript under `root`. Malformed files are collected
/// as issues (or thrown under `strict`); duplicate cells are always fatal.
inline LoadedCorpus load_corpus(const fs::path& root, CorpusLayout layout = CorpusLayout::Native,
                                bool strict = false) {
  using namespace corpus_detail;
  if (!fs::is_directory(root)) throw CorpusError("corpus directory not found: " + root.string());

  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());

  LoadedCorpus out;
  std::map<std::pair<CellKey, int>, CallRecord> calls;
  for (const auto& path : files) {
    try {
      json j = json::parse(read_file(path));
      if (layout == CorpusLayout::Zenodo) j = zenodo_to_native(j, path);
      CallRecord rec = parse_call_record(j);
      rec.source = path;
      auto id = std::make_pair(rec.key, rec.turn_index);
      if (auto it = calls.find(id); it != calls.end()) {
        throw CorpusError("duplicate cell " + to_string(rec.key) + " turn " +
                          std::to_string(rec.turn_index) + ": " + path.string() + " and " +
                          it->second.source.string());
      }
      calls.emplace(std::move(id), std::move(rec));
    } catch (const CorpusError& e) {
      if (std::string_view(e.what()).starts_with("duplicate cell")) throw;
      if (strict) throw CorpusError(path.string() + ": " + e.what());
      out.issues.push_back({path, e.what()});
    } catch (const json::exception& e) {
      if (strict) throw CorpusError(path.string() + ": " + e.what());
      out.issues.push_back({path, std::string("malformed JSON: ") + e.what()});
    }
  }
  out.call_records = calls.size();

  for (auto it = calls.begin(); it != calls.end();) {
    const CellKey key = it->first.first;
    const CallRecord* t0 = nullptr;
    const CallRecord* t1 = nullptr;
    for (; it != calls.end() && it->first.first == key; ++it) {
      (it->first.second == 0 ? t0 : t1) = &it->second;
    }
    if (t0 && t1) {
      if (t1->messages[0].content != t0->messages[0].content ||
          t1->messages[1].content != t0->response_text) {
        out.issues.push_back({t1->source, "turn-1 history does not echo turn 0 of " +
                                               to_string(key)});
      }
    } else {
      out.issues.push_back({(t0 ? t0 : t1)->source,
                            "incomplete conversation " + to_string(key) + ": missing turn " +
                                std::string(t0 ? "1" : "0")});
    }
    out.conversations.push_back(assemble_conversation(t0, t1));
  }
  return out;
}

/// Derived per-conversation measurements.
struct ConversationResult {
  CellKey key;
  Category category = Category::ErrorDiagnosis;
  MarkerCounts counts;
  ComplianceVerdict verdict;
  std::size_t words = 0;
  std::size_t words_raw = 0;
  std::size_t assistant_turns = 0;
  std::size_t truncated_turns = 0;
  bool empty_output = false;
  std::optional<double> anthroscore;
  std::optional<double> prepend_fraction;
  std::optional<std::size_t> scored_sentences;

  friend bool operator==(const ConversationResult&, const ConversationResult&) = default;
};

inline ConversationResult make_result(const Conversation& conv, const ConversationScan& s) {
  ConversationResult r;
  r.key = conv.key();
  r.category = conv.category;
  r.counts = s.counts;
  r.verdict = s.verdict;
  r.words = s.words;
  r.words_raw = s.words_raw;
  r.assistant_turns = conv.assistant_turns().size();
  r.truncated_turns = conv.truncated_turns();
  r.empty_output = s.empty_output;
  return r;
}

/// Scans every conversation, using up to `threads` workers. Output is sorted
/// by cell key regardless of scheduling.
inline std::vector<ConversationResult> scan_corpus(const std::vector<Conversation>& convs,
                                                   const Lexicon& lexicon,
                                                   const ScanOptions& opt = {},
                                                   unsigned threads = 1) {
  std::vector<ConversationResult> out(convs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < convs.size(); i = next++) {
      out[i] = make_result(convs[i], scan_conversation(convs[i], lexicon, opt));
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(convs.size())));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  std::sort(out.begin(), out.end(),
            [](const ConversationResult& a, const ConversationResult& b) { return a.key < b.key; });
  return out;
}

/// Cells of the full tasks x conditions x replicates grid that are absent or
/// have fewer than two assistant turns.
inline std::vector<CellKey> missing_cells(const std::vector<Conversation>& convs,
                                          const std::vector<std::string>& task_ids,
                                          int replicates) {
  std::set<CellKey> complete;
  for (const auto& c : convs) {
    if (c.assistant_turns().size() >= 2) complete.insert(c.key());
  }
  std::vector<CellKey> missing;
  for (const auto& t : task_ids) {
    for (Condition cond : kAllConditions) {
      for (int r = 0; r < replicates; ++r) {
        CellKey k{t, cond, r};
        if (!complete.contains(k)) missing.push_back(std::move(k));
      }
    }
  }
  return missing;
}

inline std::vector<std::string> task_ids_of(const std::vector<Conversation>& convs) {
  std::set<std::string> ids;
  for (const auto& c : convs) ids.insert(c.task_id);
  return {ids.begin(), ids.end()};
}

// ---------------------------------------------------------------------------
// Results file: line-delimited JSON, header record first.

inline constexpr std::string_view kResultsSchema = "anthroreg.results/1";

struct ResultsHeader {
  std::string lexicon_sha256;
  json scan_options = json::object();
  json scorer = nullptr;  // handshake of the AnthroScore process, when run

  friend bool operator==(const ResultsHeader&, const ResultsHeader&) = default;
};

struct ResultsFile {
  ResultsHeader header;
  std::vector<ConversationResult> results;
};

inline json options_to_json(const ScanOptions& o) {
  auto overlap = o.overlap == OverlapPolicy::Independent          ? "independent"
                 : o.overlap == OverlapPolicy::PerRuleAlternation ? "per-rule"
                                                                  : "suppress-contained";
  auto spaces = o.spaces == SpaceMode::Single          ? "single"
                : o.spaces == SpaceMode::HorizontalRun ? "horizontal"
                                                       : "any";
  return {{"overlap", overlap},
          {"spaces", spaces},
          {"edges", o.edges == EdgeBoundary::WordEdges ? "word-edges" : "regex-literal"},
          {"curly_apostrophe", o.curly_apostrophe},
          {"unicode_word_chars", o.unicode_word_chars},
          {"strip_code", o.strip_code},
          {"turn_separator", o.turn_separator}};
}

inline json to_json(const ConversationResult& r) {
  json counts = json::object();
  for (RuleId rule : kAllRules) counts[std::string(rule_name(rule))] = r.counts[rule];
  json violated = json::array();
  for (RuleId rule : r.verdict.violated_rules) violated.push_back(rule_name(rule));
  auto opt_num = [](const auto& o) { return o ? json(*o) : json(nullptr); };
  return {{"kind", "result"},
          {"task_id", r.key.task_id},
          {"category", category_name(r.category)},
          {"condition", condition_name(r.key.condition)},
          {"replicate", r.key.replicate},
          {"counts", counts},
          {"total", r.counts.total()},
          {"compliant", r.verdict.compliant},
          {"violated_rules", violated},
          {"words", r.words},
          {"words_raw", r.words_raw},
          {"assistant_turns", r.assistant_turns},
          {"truncated_turns", r.truncated_turns},
          {"empty_output", r.empty_output},
          {"anthroscore", opt_num(r.anthroscore)},
          {"prepend_fraction", opt_num(r.prepend_fraction)},
          {"scored_sentences", opt_num(r.scored_sentences)}};
}

inline ConversationResult result_from_json(const json& j) {
  using namespace corpus_detail;
  ConversationResult r;
  r.key.task_id = require_string(j, "task_id");
  const auto cat = parse_category(require_string(j, "category"));
  const auto cond = parse_condition(require_string(j, "condition"));
  if (!cat || !cond) throw CorpusError("result record with unknown category or condition");
  r.category = *cat;
  r.key.condition = *cond;
  r.key.replicate = require_int(j, "replicate");
  const auto& counts = require(j, "counts");
  for (RuleId rule : kAllRules) {
    r.counts[rule] = require(counts, std::string(rule_name(rule)).c_str()).get<std::size_t>();
  }
  if (require(j, "total").get<std::size_t>() != r.counts.total()) {
    throw CorpusError("result record total does not match per-rule counts");
  }
  r.verdict = verdict(r.counts);
  if (require(j, "compliant").get<bool>() != r.verdict.compliant) {
    throw CorpusError("result record compliance does not match counts");
  }
  r.words = require(j, "words").get<std::size_t>();
  r.words_raw = require(j, "words_raw").get<std::size_t>();
  r.assistant_turns = require(j, "assistant_turns").get<std::size_t>();
  r.truncated_turns = require(j, "truncated_turns").get<std::size_t>();
  r.empty_output = require(j, "empty_output").get<bool>();
  if (const auto& a = require(j, "anthroscore"); !a.is_null()) r.anthroscore = a.get<double>();
  if (const auto& p = require(j, "prepend_fraction"); !p.is_null()) {
    r.prepend_fraction = p.get<double>();
  }
  if (const auto& s = require(j, "scored_sentences"); !s.is_null()) {
    r.scored_sentences = s.get<std::size_t>();
  }
  return r;
}

inline void write_results(std::ostream& os, const ResultsFile& file) {
  os << json{{"kind", "header"},
             {"schema", kResultsSchema},
             {"lexicon_sha256", file.header.lexicon_sha256},
             {"scan_options", file.header.scan_options},
             {"scorer", file.header.scorer}}
            .dump()
     << '\n';
  for (const auto& r : file.results) os << to_json(r).dump() << '\n';
}

/// Writes atomically: a temporary sibling is renamed over `path`.
inline void persist_results(const ResultsFile& file, const fs::path& path) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CorpusError("cannot write " + tmp.string());
    write_results(out, file);
    out.flush();
    if (!out) throw CorpusError("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw CorpusError("cannot rename " + tmp.string() + ": " + ec.message());
}

inline ResultsFile read_results(std::istream& is) {
  ResultsFile file;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw CorpusError("results line " + std::to_string(line_no) + ": " + e.what());
    }
    const auto kind = j.value("kind", "");
    if (kind == "header") {
      if (j.value("schema", "") != kResultsSchema) {
        throw CorpusError("results: unsupported schema '" + j.value("schema", "") + "'");
      }
      file.header.lexicon_sha256 = j.value("lexicon_sha256", "");
      file.header.scan_options = j.value("scan_options", json::object());
      file.header.scorer = j.contains("scorer") ? j.at("scorer") : json(nullptr);
      have_header = true;
    } else if (kind == "result") {
      if (!have_header) throw CorpusError("results: record before header");
      try {
        file.results.push_back(result_from_json(j));
      } catch (const json::exception& e) {
        throw CorpusError("results line " + std::to_string(line_no) + ": " + e.what());
      } catch (const CorpusError& e) {
        throw CorpusError("results line " + std::to_string(line_no) + ": " + e.what());
      }
    } else {
      throw CorpusError("results line " + std::to_string(line_no) + ": unknown record kind");
    }
  }
  if (!have_header) throw CorpusError("results: missing header record");
  return file;
}

inline ResultsFile load_results(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorpusError("cannot open results file " + path.string());
  return read_results(in);
}

}  // namespace anthroreg
