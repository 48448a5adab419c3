#include <gtest/gtest.h>

#include "support.hpp"

using namespace anthroreg;
using testing_support::TempDir;
namespace fs = std::filesystem;

namespace {

RunHooks no_sleep() {
  RunHooks h;
  h.sleep = [](std::chrono::milliseconds) {};
  return h;
}

std::size_t json_files(const fs::path& dir) {
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(dir)) n += e.path().extension() == ".json";
  return n;
}

}  // namespace

TEST(Followup, Schedule) {
  const auto pool = testing_support::neutral_pool();
  EXPECT_EQ(select_followup(0, 0, pool), "OK.");
  EXPECT_EQ(select_followup(3, 9, pool), pool[2]);
  for (int t = 0; t < 30; ++t) {
    for (int r = 0; r < 13; ++r) EXPECT_EQ(select_followup(t, r, pool), select_followup(t, r + 10, pool));
  }
  FollowupSchedule s{3, 7, 1};
  EXPECT_EQ(select_followup(2, 1, pool, s), pool[(2 * 3 + 1 * 7 + 1) % 10]);
}

TEST(Config, Validation) {
  TempDir dir;
  auto c = testing_support::grid_config(dir.path(), 2, 1);
  EXPECT_NO_THROW(c.validate());
  auto short_pool = c;
  short_pool.followup_pool.pop_back();
  EXPECT_THROW(short_pool.validate(), std::invalid_argument);
  auto dup = c;
  dup.tasks[1].task_id = dup.tasks[0].task_id;
  EXPECT_THROW(dup.validate(), std::invalid_argument);
  auto zero = c;
  zero.replicates = 0;
  EXPECT_THROW(zero.validate(), std::invalid_argument);
}

TEST(Config, ShippedConfigLoads) {
  const auto c = load_experiment_config(fs::path(ANTHROREG_FIXTURES) / ".." / ".." / "data" / "experiment.json");
  EXPECT_EQ(c.tasks.size(), 30u);
  EXPECT_EQ(c.followup_pool.size(), 10u);
  EXPECT_EQ(c.followup_pool[0], "OK.");
  EXPECT_EQ(c.followup_pool[1], "Good.");
  EXPECT_EQ(c.followup_pool[2], "Right. What about edge cases?");
  EXPECT_EQ(c.replicates, 13);
  EXPECT_EQ(c.max_tokens, 2048);
  EXPECT_DOUBLE_EQ(c.temperature, 1.0);
  std::array<int, kCategoryCount> per_cat{};
  for (const auto& t : c.tasks) ++per_cat[static_cast<std::size_t>(t.category)];
  for (int n : per_cat) EXPECT_EQ(n, 5);
  EXPECT_EQ(plan_cells(c).size(), 780u);
}

TEST(VoiceModel, DigestIsPinned) {
  const auto v = voice_model();
  EXPECT_EQ(v.sha256, "bcc012767353cc9aff143b7ecc7b4cd79246ec08fe9cb3f610ae9e1627b6e344");
  EXPECT_EQ(sha256_hex(v.text), v.sha256);
  EXPECT_EQ(v.text.size(), 1212u);
}

TEST(Harness, SmallGridWritesTranscriptsAndConversations) {
  TempDir dir;
  const auto cfg = testing_support::grid_config(dir / "out", 3, 2);
  MockClient client(testing_support::register_generator());
  const auto rep = run_experiment(cfg, client, no_sleep());
  EXPECT_TRUE(rep.failures.empty());
  EXPECT_EQ(rep.conversations.size(), 12u);
  EXPECT_EQ(rep.api_calls, 24u);
  EXPECT_EQ(json_files(cfg.output_dir), 24u);

  const auto corpus = load_corpus(cfg.output_dir);
  EXPECT_TRUE(corpus.issues.empty());
  EXPECT_EQ(corpus.conversations.size(), 12u);
  EXPECT_TRUE(missing_cells(corpus.conversations, task_ids_of(corpus.conversations), 2).empty());
  for (std::size_t i = 0; i < corpus.conversations.size(); ++i) {
    EXPECT_EQ(corpus.conversations[i].turns.size(), 4u);
    EXPECT_EQ(corpus.conversations[i].assistant_text(), rep.conversations[i].assistant_text());
  }
}

TEST(Harness, SystemPromptOnlyInConstrainedCells) {
  TempDir dir;
  const auto cfg = testing_support::grid_config(dir / "out", 2, 1);
  MockClient client(testing_support::register_generator());
  run_experiment(cfg, client, no_sleep());
  const auto voice = voice_model();
  for (const auto& req : client.requests()) {
    if (req.cell.condition == Condition::Constrained) {
      ASSERT_TRUE(req.system.has_value());
      EXPECT_EQ(*req.system, voice.text);
    } else {
      EXPECT_FALSE(req.system.has_value());
    }
    EXPECT_EQ(req.max_tokens, 2048);
    EXPECT_DOUBLE_EQ(req.temperature, 1.0);
    EXPECT_EQ(req.messages.size(), req.turn_index == 0 ? 1u : 3u);
  }
}

TEST(Harness, ScriptedReplyAndTruncation) {
  TempDir dir;
  auto cfg = testing_support::grid_config(dir / "out", 1, 1);
  cfg.conditions = {Condition::Default};
  const CellKey k{"t00", Condition::Default, 0};
  auto client = mock_client({{{k, 0}, {"The test fails.", "end_turn"}},
                             {{k, 1}, {"Cut off", "max_tokens"}}});
  const auto rep = run_experiment(cfg, *client, no_sleep());
  ASSERT_EQ(rep.conversations.size(), 1u);
  const auto& conv = rep.conversations[0];
  EXPECT_EQ(conv.turns[1].content, "The test fails.");
  EXPECT_FALSE(conv.turns[1].truncated);
  EXPECT_TRUE(conv.turns[3].truncated);
  EXPECT_EQ(conv.turns[2].content, "OK.");
  EXPECT_NE(testing_support::slurp(transcript_path(cfg.output_dir, k, 0)).find("The test fails."),
            std::string::npos);
}

TEST(Harness, UnscriptedCallIsReportedAsFailure) {
  TempDir dir;
  auto cfg = testing_support::grid_config(dir / "out", 1, 1);
  MockClient client;
  EXPECT_THROW(client.send(ChatRequest{}), UnscriptedCall);
  const auto rep = run_experiment(cfg, client, no_sleep());
  EXPECT_EQ(rep.failures.size(), 2u);
  EXPECT_TRUE(rep.conversations.empty());
}

TEST(Harness, TransientErrorsAreRetriedWithBackoff) {
  TempDir dir;
  auto cfg = testing_support::grid_config(dir / "out", 1, 1);
  cfg.conditions = {Condition::Default};
  MockClient client(testing_support::register_generator());
  const CellKey k{"t00", Condition::Default, 0};
  client.fail_transiently(k, 0, 3);
  std::vector<std::chrono::milliseconds> sleeps;
  RunHooks hooks;
  hooks.sleep = [&](std::chrono::milliseconds d) { sleeps.push_back(d); };
  const auto rep = run_experiment(cfg, client, hooks);
  EXPECT_TRUE(rep.failures.empty());
  EXPECT_EQ(rep.api_calls, 5u);
  EXPECT_EQ(sleeps, (std::vector<std::chrono::milliseconds>{std::chrono::milliseconds(1000),
                                                            std::chrono::milliseconds(2000),
                                                            std::chrono::milliseconds(4000)}));
}

TEST(Harness, RetriesGiveUp) {
  TempDir dir;
  auto cfg = testing_support::grid_config(dir / "out", 1, 1);
  cfg.conditions = {Condition::Default};
  cfg.retry.max_attempts = 2;
  MockClient client(testing_support::register_generator());
  client.fail_transiently({"t00", Condition::Default, 0}, 0, 5);
  const auto rep = run_experiment(cfg, client, no_sleep());
  EXPECT_EQ(rep.failures.size(), 1u);
  EXPECT_EQ(rep.api_calls, 2u);
}

TEST(Harness, ResumeOnlyRunsMissingCalls) {
  TempDir dir;
  const auto cfg = testing_support::grid_config(dir / "out", 2, 2);
  {
    MockClient client(testing_support::register_generator());
    run_experiment(cfg, client, no_sleep());
  }
  // Lose one turn-1 transcript and corrupt another cell's turn 0.
  fs::remove(transcript_path(cfg.output_dir, {"t00", Condition::Default, 1}, 1));
  testing_support::write_file(transcript_path(cfg.output_dir, {"t01", Condition::Constrained, 0}, 0), "{");
  MockClient again(testing_support::register_generator());
  const auto rep = run_experiment(cfg, again, no_sleep());
  EXPECT_EQ(again.call_count(), 3u);
  EXPECT_EQ(rep.cells_run, 2u);
  EXPECT_EQ(rep.cells_skipped, 6u);

  MockClient idle;
  const auto idem = run_experiment(cfg, idle, no_sleep());
  EXPECT_EQ(idle.call_count(), 0u);
  EXPECT_EQ(idem.conversations.size(), 8u);
}

TEST(Harness, PlanIsPureFunctionOfConfig) {
  TempDir dir;
  const auto cfg = testing_support::grid_config(dir / "out", 30, 13);
  const auto a = plan_cells(cfg);
  const auto b = plan_cells(cfg);
  ASSERT_EQ(a.size(), 780u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].key, b[i].key);
    EXPECT_EQ(a[i].followup, b[i].followup);
    EXPECT_EQ(a[i].has_system_prompt, a[i].key.condition == Condition::Constrained);
  }
}

TEST(Harness, RateLimiterPaces) {
  RateLimiter lim(600.0);  // ten per second
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < 4; ++i) lim.acquire();
  EXPECT_GE(std::chrono::steady_clock::now() - t0, std::chrono::milliseconds(250));
  RateLimiter off(0.0);
  for (int i = 0; i < 1000; ++i) off.acquire();
}

TEST(Harness, RetryDelaysAreCapped) {
  RetryPolicy p;
  EXPECT_EQ(p.delay_for(0), std::chrono::milliseconds(1000));
  EXPECT_EQ(p.delay_for(3), std::chrono::milliseconds(8000));
  EXPECT_EQ(p.delay_for(20), std::chrono::milliseconds(60000));
}
