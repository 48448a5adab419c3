#pragma once

// Client side of the AnthroScore scorer protocol: line-delimited JSON over a
// child process's stdin/stdout.
//
//   scorer -> {"model": ..., "revision": ..., "mask_token": ...}   (handshake)
//   client -> {"id": "...", "sentence": "..."}
//   scorer -> {"id": "...", "score": x, "p_human": x, "p_nonhuman": x, "strategy": "..."}
//          |  {"id": "...", "error": "..."}
//
// Responses arrive in request order.

#include <signal.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstdio>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "anthroreg/corpus.hpp"
#include "anthroreg/textprep.hpp"

namespace anthroreg {

class ScorerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScorerHandshake {
  std::string model;
  std::string revision;
  std::string mask_token;
  nlohmann::json raw;
};

struct SentenceReply {
  std::string id;
  std::optional<double> score;
  std::optional<double> p_human;
  std::optional<double> p_nonhuman;
  std::string strategy;  // "pronoun_masked" or "prepended"
  std::optional<std::string> error;
};

inline SentenceReply parse_sentence_reply(const nlohmann::json& j) {
  SentenceReply r;
  if (!j.is_object() || !j.contains("id")) throw ScorerError("scorer reply without id");
  r.id = j.at("id").is_string() ? j.at("id").get<std::string>() : j.at("id").dump();
  if (j.contains("error") && !j.at("error").is_null()) {
    r.error = j.at("error").is_string() ? j.at("error").get<std::string>() : j.at("error").dump();
    return r;
  }
  auto num = [&](const char* k) -> std::optional<double> {
    if (!j.contains(k) || !j.at(k).is_number()) return std::nullopt;
    return j.at(k).get<double>();
  };
  r.score = num("score");
  r.p_human = num("p_human");
  r.p_nonhuman = num("p_nonhuman");
  r.strategy = j.value("strategy", "");
  if (!r.score) throw ScorerError("scorer reply " + r.id + " has neither score nor error");
  if (r.strategy != "pronoun_masked" && r.strategy != "prepended") {
    throw ScorerError("scorer reply " + r.id + " has unknown strategy '" + r.strategy + "'");
  }
  return r;
}

/// A running scorer process. Not thread-safe; one batch at a time.
class ScorerProcess {
 public:
  explicit ScorerProcess(const std::vector<std::string>& argv) {
    if (argv.empty()) throw ScorerError("scorer: empty command");
    int in_pipe[2];
    int out_pipe[2];
    if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0) throw ScorerError("scorer: pipe failed");
    pid_ = fork();
    if (pid_ < 0) throw ScorerError("scorer: fork failed");
    if (pid_ == 0) {
      dup2(in_pipe[0], STDIN_FILENO);
      dup2(out_pipe[1], STDOUT_FILENO);
      close(in_pipe[0]);
      close(in_pipe[1]);
      close(out_pipe[0]);
      close(out_pipe[1]);
      std::vector<char*> args;
      for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
      args.push_back(nullptr);
      execvp(args[0], args.data());
      _exit(127);
    }
    close(in_pipe[0]);
    close(out_pipe[1]);
    to_child_ = fdopen(in_pipe[1], "w");
    from_child_ = fdopen(out_pipe[0], "r");
    if (!to_child_ || !from_child_) throw ScorerError("scorer: fdopen failed");
    signal(SIGPIPE, SIG_IGN);

    try {
      read_handshake();
    } catch (...) {
      shutdown();
      throw;
    }
  }

  ScorerProcess(const ScorerProcess&) = delete;
  ScorerProcess& operator=(const ScorerProcess&) = delete;

  ~ScorerProcess() { shutdown(); }

  const ScorerHandshake& handshake() const noexcept { return handshake_; }

  /// Scores a batch. Requests are written from a helper thread so a scorer
  /// that answers while input is still arriving cannot deadlock.
  std::vector<SentenceReply> score(const std::vector<std::string>& sentences) {
    const std::string prefix = "s" + std::to_string(batch_++) + "-";
    std::string write_error;
    std::jthread writer([&] {
      for (std::size_t i = 0; i < sentences.size(); ++i) {
        const auto line =
            nlohmann::json{{"id", prefix + std::to_string(i)}, {"sentence", sentences[i]}}.dump() + "\n";
        if (std::fwrite(line.data(), 1, line.size(), to_child_) != line.size()) {
          write_error = "scorer: write failed";
          return;
        }
      }
      std::fflush(to_child_);
    });
    std::vector<SentenceReply> out;
    out.reserve(sentences.size());
    for (std::size_t i = 0; i < sentences.size(); ++i) {
      const auto line = read_line();
      if (!line) throw ScorerError("scorer: process exited mid-batch");
      SentenceReply r;
      try {
        r = parse_sentence_reply(nlohmann::json::parse(*line));
      } catch (const nlohmann::json::exception& e) {
        throw ScorerError(std::string("scorer: malformed reply: ") + e.what());
      }
      if (r.id != prefix + std::to_string(i)) {
        throw ScorerError("scorer: reply out of order (expected " + prefix + std::to_string(i) +
                          ", got " + r.id + ")");
      }
      out.push_back(std::move(r));
    }
    writer.join();
    if (!write_error.empty()) throw ScorerError(write_error);
    return out;
  }

 private:
  void read_handshake() {
    const auto line = read_line();
    if (!line) throw ScorerError("scorer: process exited before handshake");
    try {
      handshake_.raw = nlohmann::json::parse(*line);
    } catch (const nlohmann::json::exception& e) {
      throw ScorerError(std::string("scorer: malformed handshake: ") + e.what());
    }
    if (!handshake_.raw.is_object()) throw ScorerError("scorer: handshake is not an object");
    handshake_.model = handshake_.raw.value("model", "");
    handshake_.revision = handshake_.raw.value("revision", "");
    handshake_.mask_token = handshake_.raw.value("mask_token", "");
    if (handshake_.model.empty() || handshake_.mask_token.empty()) {
      throw ScorerError("scorer: handshake lacks model or mask_token");
    }
  }

  // Closing stdin is the scorer's signal to exit.
  void shutdown() noexcept {
    if (to_child_) fclose(to_child_);
    if (from_child_) fclose(from_child_);
    to_child_ = from_child_ = nullptr;
    if (pid_ > 0) {
      int status = 0;
      waitpid(pid_, &status, 0);
      pid_ = -1;
    }
  }

  std::optional<std::string> read_line() {
    std::string line;
    int c;
    while ((c = std::fgetc(from_child_)) != EOF) {
      if (c == '\n') return line;
      line.push_back(static_cast<char>(c));
    }
    if (line.empty()) return std::nullopt;
    return line;
  }

  pid_t pid_ = -1;
  FILE* to_child_ = nullptr;
  FILE* from_child_ = nullptr;
  ScorerHandshake handshake_;
  std::size_t batch_ = 0;
};

struct ConversationScore {
  std::optional<double> mean;       // nullopt: unscoreable
  std::optional<double> prepend_fraction;
  std::size_t scored = 0;
  std::size_t skipped = 0;          // sentences the scorer rejected
};

/// Mean of the sentence scores and the share of prepended sentences.
inline ConversationScore aggregate_sentence_scores(const std::vector<SentenceReply>& replies) {
  ConversationScore s;
  double sum = 0.0;
  std::size_t prepended = 0;
  for (const auto& r : replies) {
    if (r.error || !r.score) {
      ++s.skipped;
      continue;
    }
    sum += *r.score;
    ++s.scored;
    if (r.strategy == "prepended") ++prepended;
  }
  if (s.scored > 0) {
    s.mean = sum / static_cast<double>(s.scored);
    s.prepend_fraction = static_cast<double>(prepended) / static_cast<double>(s.scored);
  }
  return s;
}

/// Sentences sent to the scorer for one conversation: joined assistant
/// turns, code stripped, segmented.
inline std::vector<std::string> scoring_sentences(const Conversation& conv,
                                                  std::string_view separator = kTurnSeparator) {
  return strip_code(conv.assistant_text(separator)).sentences;
}

/// Fills the AnthroScore fields of `results` from matching conversations.
/// Results without a conversation are left untouched.
inline void attach_anthroscores(std::vector<ConversationResult>& results,
                                const std::vector<Conversation>& conversations,
                                ScorerProcess& scorer) {
  std::map<CellKey, const Conversation*> by_key;
  for (const auto& c : conversations) by_key[c.key()] = &c;
  for (auto& r : results) {
    auto it = by_key.find(r.key);
    if (it == by_key.end()) continue;
    const auto sentences = scoring_sentences(*it->second);
    const auto s = aggregate_sentence_scores(scorer.score(sentences));
    r.anthroscore = s.mean;
    r.prepend_fraction = s.prepend_fraction;
    r.scored_sentences = s.scored;
  }
}

}  // namespace anthroreg
