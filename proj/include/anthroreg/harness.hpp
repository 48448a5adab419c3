#pragma once

// Two-condition, two-turn experiment runner against a chat-completions API.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "anthroreg/conversation.hpp"
#include "anthroreg/corpus.hpp"
#include "anthroreg/voice_model.hpp"

namespace anthroreg {

inline constexpr std::size_t kFollowupPoolSize = 10;

struct ChatMessage {
  Role role = Role::User;
  std::string content;
  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

struct ChatRequest {
  std::string model;
  std::optional<std::string> system;
  std::vector<ChatMessage> messages;
  double temperature = 1.0;
  int max_tokens = 2048;
  // Bookkeeping for adapters and tests; never sent over the wire.
  CellKey cell;
  int turn_index = 0;
};

struct ChatResponse {
  std::string text;
  std::string stop_reason = "end_turn";
};

/// Failure talking to the API. Retryable errors are retried with backoff.
class TransportError : public std::runtime_error {
 public:
  TransportError(const std::string& what, bool retryable,
                 std::optional<std::chrono::milliseconds> retry_after = std::nullopt)
      : std::runtime_error(what), retryable_(retryable), retry_after_(retry_after) {}
  bool retryable() const noexcept { return retryable_; }
  std::optional<std::chrono::milliseconds> retry_after() const noexcept { return retry_after_; }

 private:
  bool retryable_;
  std::optional<std::chrono::milliseconds> retry_after_;
};

/// Adapter boundary: send(messages, optional system, temperature, max_tokens).
class ChatClient {
 public:
  virtual ~ChatClient() = default;
  virtual ChatResponse send(const ChatRequest& request) = 0;
};

/// Raised by MockClient for a call that has no scripted response.
class UnscriptedCall : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Deterministic test adapter. Responses are keyed by (cell, turn); a
/// fallback generator may answer anything unscripted. Every request is
/// recorded.
class MockClient : public ChatClient {
 public:
  using Generator = std::function<std::optional<ChatResponse>(const ChatRequest&)>;

  MockClient() = default;
  explicit MockClient(Generator fallback) : fallback_(std::move(fallback)) {}

  void script(const CellKey& cell, int turn, ChatResponse response) {
    std::lock_guard lock(mu_);
    scripted_[{cell, turn}] = std::move(response);
  }
  /// The next `times` calls for (cell, turn) fail with a retryable error.
  void fail_transiently(const CellKey& cell, int turn, int times) {
    std::lock_guard lock(mu_);
    failures_[{cell, turn}] = times;
  }

  ChatResponse send(const ChatRequest& request) override {
    std::lock_guard lock(mu_);
    requests_.push_back(request);
    const auto id = std::make_pair(request.cell, request.turn_index);
    if (auto f = failures_.find(id); f != failures_.end() && f->second > 0) {
      --f->second;
      throw TransportError("mock: simulated overload", true);
    }
    if (auto it = scripted_.find(id); it != scripted_.end()) return it->second;
    if (fallback_) {
      if (auto r = fallback_(request)) return *r;
    }
    throw UnscriptedCall("mock: no scripted response for " + to_string(request.cell) + " turn " +
                         std::to_string(request.turn_index));
  }

  std::vector<ChatRequest> requests() const {
    std::lock_guard lock(mu_);
    return requests_;
  }
  std::size_t call_count() const {
    std::lock_guard lock(mu_);
    return requests_.size();
  }

 private:
  mutable std::mutex mu_;
  Generator fallback_;
  std::map<std::pair<CellKey, int>, ChatResponse> scripted_;
  std::map<std::pair<CellKey, int>, int> failures_;
  std::vector<ChatRequest> requests_;
};

inline std::unique_ptr<MockClient> mock_client(std::map<std::pair<CellKey, int>, ChatResponse> scripted,
                                               MockClient::Generator fallback = {}) {
  auto m = std::make_unique<MockClient>(std::move(fallback));
  for (auto& [id, resp] : scripted) m->script(id.first, id.second, std::move(resp));
  return m;
}

struct RetryPolicy {
  int max_attempts = 6;
  std::chrono::milliseconds base_delay{1000};
  std::chrono::milliseconds max_delay{60000};

  std::chrono::milliseconds delay_for(int attempt) const {
    auto d = base_delay;
    for (int i = 0; i < attempt && d < max_delay; ++i) d *= 2;
    return std::min(d, max_delay);
  }
};

/// Follow-up index = (task * task_stride + replicate * replicate_stride + offset) mod pool.
struct FollowupSchedule {
  int task_stride = 1;
  int replicate_stride = 1;
  int offset = 0;
};

struct ExperimentConfig {
  std::vector<TaskSpec> tasks;
  std::vector<std::string> followup_pool;
  FollowupSchedule schedule;
  int replicates = 13;
  std::vector<Condition> conditions = {Condition::Default, Condition::Constrained};
  std::string model_id = "claude-sonnet-4-20250514";
  double temperature = 1.0;
  int max_tokens = 2048;
  int parallelism = 4;
  double requests_per_minute = 0.0;  // 0 disables pacing
  RetryPolicy retry;
  std::filesystem::path output_dir = "transcripts";

  /// Throws std::invalid_argument when an invariant is broken.
  void validate() const {
    if (followup_pool.size() != kFollowupPoolSize) {
      throw std::invalid_argument("config: followup_pool must have exactly 10 entries, found " +
                                  std::to_string(followup_pool.size()));
    }
    if (replicates < 1) throw std::invalid_argument("config: replicates must be >= 1");
    if (max_tokens < 1) throw std::invalid_argument("config: max_tokens must be >= 1");
    if (parallelism < 1) throw std::invalid_argument("config: parallelism must be >= 1");
    if (retry.max_attempts < 1) throw std::invalid_argument("config: retry.max_attempts must be >= 1");
    if (tasks.empty()) throw std::invalid_argument("config: no tasks");
    if (conditions.empty()) throw std::invalid_argument("config: no conditions");
    std::set<std::string> ids;
    for (const auto& t : tasks) {
      if (t.task_id.empty() || t.task_id.find_first_of("/\\ ") != std::string::npos) {
        throw std::invalid_argument("config: invalid task_id '" + t.task_id + "'");
      }
      if (!ids.insert(t.task_id).second) {
        throw std::invalid_argument("config: duplicate task_id '" + t.task_id + "'");
      }
    }
  }
};

/// The user message sent as the second turn.
inline const std::string& select_followup(int task_index, int replicate_index,
                                          const std::vector<std::string>& pool,
                                          const FollowupSchedule& schedule = {}) {
  if (pool.empty()) throw std::invalid_argument("select_followup: empty pool");
  const auto n = static_cast<long long>(pool.size());
  long long i = static_cast<long long>(task_index) * schedule.task_stride +
                static_cast<long long>(replicate_index) * schedule.replicate_stride +
                schedule.offset;
  i %= n;
  if (i < 0) i += n;
  return pool[static_cast<std::size_t>(i)];
}

// ---------------------------------------------------------------------------
// Configuration files

inline std::vector<TaskSpec> tasks_from_json(const json& j) {
  std::vector<TaskSpec> tasks;
  const json& arr = j.is_object() && j.contains("tasks") ? j.at("tasks") : j;
  if (!arr.is_array()) throw std::invalid_argument("tasks: expected an array");
  for (const auto& t : arr) {
    const auto cat = parse_category(t.at("category").get<std::string>());
    if (!cat) throw std::invalid_argument("tasks: unknown category in " + t.dump());
    tasks.push_back({t.at("task_id").get<std::string>(), *cat, t.at("prompt").get<std::string>()});
  }
  return tasks;
}

inline json tasks_to_json(const std::vector<TaskSpec>& tasks) {
  json arr = json::array();
  for (const auto& t : tasks) {
    arr.push_back({{"task_id", t.task_id}, {"category", category_name(t.category)}, {"prompt", t.prompt}});
  }
  return {{"tasks", arr}};
}

/// Reads an experiment config. Relative `tasks_file` and `output_dir`
/// resolve against the config file's directory.
inline ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path.string());
  const json j = json::parse(in);
  const auto base = path.parent_path();
  ExperimentConfig c;
  c.model_id = j.value("model", c.model_id);
  c.replicates = j.value("replicates", c.replicates);
  c.temperature = j.value("temperature", c.temperature);
  c.max_tokens = j.value("max_tokens", c.max_tokens);
  c.parallelism = j.value("parallelism", c.parallelism);
  if (j.contains("output_dir")) {
    std::filesystem::path out = j.at("output_dir").get<std::string>();
    c.output_dir = out.is_absolute() ? out : base / out;
  }
  if (j.contains("conditions")) {
    c.conditions.clear();
    for (const auto& s : j.at("conditions")) {
      const auto cond = parse_condition(s.get<std::string>());
      if (!cond) throw std::invalid_argument("config: unknown condition " + s.dump());
      c.conditions.push_back(*cond);
    }
  }
  if (j.contains("followup_pool")) c.followup_pool = j.at("followup_pool").get<std::vector<std::string>>();
  if (j.contains("followup_schedule")) {
    const auto& s = j.at("followup_schedule");
    c.schedule.task_stride = s.value("task_stride", 1);
    c.schedule.replicate_stride = s.value("replicate_stride", 1);
    c.schedule.offset = s.value("offset", 0);
  }
  if (j.contains("retry")) {
    const auto& r = j.at("retry");
    c.retry.max_attempts = r.value("max_attempts", c.retry.max_attempts);
    c.retry.base_delay = std::chrono::milliseconds(r.value("base_delay_ms", 1000));
    c.retry.max_delay = std::chrono::milliseconds(r.value("max_delay_ms", 60000));
  }
  if (j.contains("rate_limit")) {
    c.requests_per_minute = j.at("rate_limit").value("requests_per_minute", 0.0);
  }
  if (j.contains("tasks")) {
    c.tasks = tasks_from_json(j.at("tasks"));
  } else if (j.contains("tasks_file")) {
    std::filesystem::path tf = j.at("tasks_file").get<std::string>();
    if (!tf.is_absolute()) tf = base / tf;
    std::ifstream tin(tf);
    if (!tin) throw std::invalid_argument("config: cannot open tasks file " + tf.string());
    c.tasks = tasks_from_json(json::parse(tin));
  }
  c.validate();
  return c;
}

// ---------------------------------------------------------------------------
// Scheduling

struct PlannedCell {
  int task_index = 0;
  CellKey key;
  std::string followup;
  bool has_system_prompt = false;
};

/// The full request grid in deterministic order: task, condition, replicate.
inline std::vector<PlannedCell> plan_cells(const ExperimentConfig& config) {
  std::vector<PlannedCell> cells;
  for (std::size_t t = 0; t < config.tasks.size(); ++t) {
    for (Condition cond : config.conditions) {
      for (int r = 0; r < config.replicates; ++r) {
        cells.push_back({static_cast<int>(t),
                         {config.tasks[t].task_id, cond, r},
                         select_followup(static_cast<int>(t), r, config.followup_pool, config.schedule),
                         cond == Condition::Constrained});
      }
    }
  }
  return cells;
}

inline std::filesystem::path transcript_path(const std::filesystem::path& dir, const CellKey& key,
                                             int turn) {
  char rep[16];
  std::snprintf(rep, sizeof rep, "r%02d", key.replicate);
  return dir / (key.task_id + "__" + std::string(condition_name(key.condition)) + "__" + rep +
                "__t" + std::to_string(turn) + ".json");
}

/// Writes `content` so that `path` is either absent or complete.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
  std::ostringstream suffix;
  suffix << ".tmp." << std::this_thread::get_id();
  std::filesystem::path tmp = path;
  tmp += suffix.str();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

/// Token-bucket pacing shared by all workers.
class RateLimiter {
 public:
  explicit RateLimiter(double per_minute, double burst = 1.0)
      : per_second_(per_minute / 60.0), capacity_(std::max(1.0, burst)), tokens_(capacity_),
        last_(std::chrono::steady_clock::now()) {}

  void acquire() {
    if (per_second_ <= 0.0) return;
    std::unique_lock lock(mu_);
    for (;;) {
      const auto now = std::chrono::steady_clock::now();
      tokens_ = std::min(capacity_,
                         tokens_ + std::chrono::duration<double>(now - last_).count() * per_second_);
      last_ = now;
      if (tokens_ >= 1.0) {
        tokens_ -= 1.0;
        return;
      }
      const auto wait = std::chrono::duration<double>((1.0 - tokens_) / per_second_);
      lock.unlock();
      std::this_thread::sleep_for(wait);
      lock.lock();
    }
  }

 private:
  double per_second_;
  double capacity_;
  double tokens_;
  std::chrono::steady_clock::time_point last_;
  std::mutex mu_;
};

struct CellFailure {
  CellKey key;
  std::string reason;
};

struct RunReport {
  std::vector<Conversation> conversations;  // every complete cell, sorted by key
  std::size_t api_calls = 0;                // successful and failed attempts
  std::size_t cells_run = 0;
  std::size_t cells_skipped = 0;            // already complete on disk
  std::vector<CellFailure> failures;
};

struct RunHooks {
  std::function<void(std::chrono::milliseconds)> sleep =
      [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  std::function<void(const CellKey&, std::size_t done, std::size_t total)> progress;
};

namespace harness_detail {

inline std::optional<CallRecord> read_record(const std::filesystem::path& p) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(p, ec)) return std::nullopt;
  try {
    std::ifstream in(p, std::ios::binary);
    CallRecord r = parse_call_record(json::parse(in));
    r.source = p;
    return r;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace harness_detail

/// Runs every missing cell of the grid. Each call's transcript is written
/// before the next call starts; a cell is complete once both transcripts
/// exist, so rerunning only touches missing cells. Failed cells are reported,
/// not fatal.
inline RunReport run_experiment(const ExperimentConfig& config, ChatClient& client,
                                const RunHooks& hooks = {}) {
  config.validate();
  std::filesystem::create_directories(config.output_dir);
  const auto voice = voice_model();
  const auto cells = plan_cells(config);

  RunReport report;
  std::mutex report_mu;
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> calls{0};
  std::atomic<std::size_t> done{0};
  RateLimiter limiter(config.requests_per_minute);

  auto call_with_retry = [&](const ChatRequest& req) -> ChatResponse {
    for (int attempt = 0;; ++attempt) {
      limiter.acquire();
      ++calls;
      try {
        return client.send(req);
      } catch (const TransportError& e) {
        if (!e.retryable() || attempt + 1 >= config.retry.max_attempts) throw;
        hooks.sleep(e.retry_after().value_or(config.retry.delay_for(attempt)));
      }
    }
  };

  auto make_record = [&](const PlannedCell& cell, int turn, std::vector<ChatMessage> msgs,
                         const ChatResponse& resp) {
    CallRecord rec;
    rec.key = cell.key;
    rec.category = config.tasks[static_cast<std::size_t>(cell.task_index)].category;
    rec.model = config.model_id;
    rec.turn_index = turn;
    if (cell.has_system_prompt) rec.system_prompt_sha256 = voice.sha256;
    rec.params = {config.temperature, config.max_tokens};
    for (auto& m : msgs) rec.messages.push_back({m.role, std::move(m.content), false, {}});
    rec.response_text = resp.text;
    rec.stop_reason = resp.stop_reason;
    return rec;
  };

  auto run_cell = [&](const PlannedCell& cell) -> std::optional<Conversation> {
    const auto p0 = transcript_path(config.output_dir, cell.key, 0);
    const auto p1 = transcript_path(config.output_dir, cell.key, 1);
    auto r0 = harness_detail::read_record(p0);
    auto r1 = r0 ? harness_detail::read_record(p1) : std::nullopt;
    const bool skipped = r0 && r1;

    if (!skipped) {
      ChatRequest req;
      req.model = config.model_id;
      if (cell.has_system_prompt) req.system = std::string(voice.text);
      req.temperature = config.temperature;
      req.max_tokens = config.max_tokens;
      req.cell = cell.key;
      const auto& prompt = config.tasks[static_cast<std::size_t>(cell.task_index)].prompt;
      req.messages = {{Role::User, prompt}};

      if (!r0) {
        req.turn_index = 0;
        const auto resp = call_with_retry(req);
        r0 = make_record(cell, 0, req.messages, resp);
        atomic_write(p0, to_json(*r0).dump(2) + "\n");
      }
      req.turn_index = 1;
      req.messages = {{Role::User, prompt},
                      {Role::Assistant, r0->response_text},
                      {Role::User, cell.followup}};
      const auto resp = call_with_retry(req);
      r1 = make_record(cell, 1, req.messages, resp);
      atomic_write(p1, to_json(*r1).dump(2) + "\n");
    }
    r0->source = p0;
    r1->source = p1;
    Conversation conv = assemble_conversation(&*r0, &*r1);
    std::lock_guard lock(report_mu);
    skipped ? ++report.cells_skipped : ++report.cells_run;
    return conv;
  };

  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        if (auto conv = run_cell(cells[i])) {
          std::lock_guard lock(report_mu);
          report.conversations.push_back(std::move(*conv));
        }
      } catch (const std::exception& e) {
        std::lock_guard lock(report_mu);
        report.failures.push_back({cells[i].key, e.what()});
      }
      const auto d = ++done;
      if (hooks.progress) hooks.progress(cells[i].key, d, cells.size());
    }
  };

  const auto n_threads = static_cast<std::size_t>(
      std::max(1, std::min<int>(config.parallelism, static_cast<int>(cells.size()))));
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  report.api_calls = calls.load();
  std::sort(report.conversations.begin(), report.conversations.end(),
            [](const Conversation& a, const Conversation& b) { return a.key() < b.key(); });
  std::sort(report.failures.begin(), report.failures.end(),
            [](const CellFailure& a, const CellFailure& b) { return a.key < b.key; });
  return report;
}

}  // namespace anthroreg
