#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>

#include "json.hpp"

#include "anthroreg/anthroreg.hpp"

namespace testing_support {

namespace fs = std::filesystem;

inline fs::path fixture(const std::string& name) { return fs::path(ANTHROREG_FIXTURES) / name; }

inline std::vector<std::string> detector_strings() {
  std::ifstream in(fixture("detector_strings.json"));
  return nlohmann::json::parse(in).at("strings").get<std::vector<std::string>>();
}

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = fs::temp_directory_path() /
            ("anthroreg-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& s) const { return path_ / s; }

 private:
  fs::path path_;
};

inline std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const fs::path& p, const std::string& s) {
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << s;
}

inline std::vector<std::string> neutral_pool() {
  return {"OK.", "Good.", "Right. What about edge cases?", "Why?", "Is there a simpler way?",
          "Show the final version.", "That fails to compile.", "What are the trade-offs?",
          "Summarize in two sentences.", "Anything else?"};
}

/// `n_tasks` tasks spread over the six categories.
inline std::vector<anthroreg::TaskSpec> stand_in_tasks(int n_tasks) {
  std::vector<anthroreg::TaskSpec> tasks;
  for (int i = 0; i < n_tasks; ++i) {
    char id[16];
    std::snprintf(id, sizeof id, "t%02d", i);
    tasks.push_back({id, anthroreg::kAllCategories[static_cast<std::size_t>(i) % 6],
                     "Task prompt number " + std::to_string(i) + "."});
  }
  return tasks;
}

inline anthroreg::ExperimentConfig grid_config(const fs::path& out, int n_tasks, int replicates) {
  anthroreg::ExperimentConfig c;
  c.tasks = stand_in_tasks(n_tasks);
  c.followup_pool = neutral_pool();
  c.replicates = replicates;
  c.parallelism = 8;
  c.output_dir = out;
  return c;
}

/// Reply generator: register depends on the condition, deterministic per cell.
inline anthroreg::MockClient::Generator register_generator() {
  return [](const anthroreg::ChatRequest& req) -> std::optional<anthroreg::ChatResponse> {
    anthroreg::ChatResponse r;
    const int task = std::stoi(req.cell.task_id.substr(1));
    if (req.system) {
      r.text = "Reading the file. The loop exits early at index " + std::to_string(task) + ".";
      if (task % 7 == 0 && req.turn_index == 1) r.text += " Perhaps the bound is wrong.";
    } else {
      r.text = "Great question! I think the issue might be the loop. Let me explain: ";
      for (int i = 0; i <= task % 5 + req.cell.replicate % 3; ++i) r.text += "we check it. ";
      r.text += "\n\n```python\nprint('I am code')\n```\nHope this helps!";
    }
    return r;
  };
}

}  // namespace testing_support
