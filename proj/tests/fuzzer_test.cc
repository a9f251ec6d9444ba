// Copyright 2026 The ModelFuzz Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>

#include <gtest/gtest.h>

#include "modelfuzz/errors.h"
#include "modelfuzz/fuzzer.h"
#include "modelfuzz/harness.h"

namespace modelfuzz {
namespace {

BufferId B(int s, int r) { return {ProcessId{s}, ProcessId{r}}; }

TEST(AssignEnergy, Linear) {
  EXPECT_EQ(AssignEnergy(0, 5), 0);
  EXPECT_EQ(AssignEnergy(1, 5), 5);
  EXPECT_EQ(AssignEnergy(3, 5), 15);
  EXPECT_EQ(AssignEnergy(4, 5), 20);
}

GenParams RaftParamsForTest() {
  BenchmarkConfig cfg;
  cfg.kind = BenchmarkKind::kRaftLite;
  return DefaultGenParams(cfg);
}

TEST(Mutate, SwapMaxMessagesSwapsCounts) {
  GenParams p = RaftParamsForTest();
  Schedule s;
  s.steps = {ScheduleStep::Deliver(B(0, 1), 2), ScheduleStep::Deliver(B(1, 2), 5)};
  Rng rng(1);
  const Schedule m = Mutate(s, MutationKind::kSwapMaxMessages, p, rng);
  EXPECT_EQ(m.steps[0].count, 5);
  EXPECT_EQ(m.steps[1].count, 2);
  EXPECT_EQ(m.steps[0].buffer, s.steps[0].buffer);
  EXPECT_EQ(m.steps[1].buffer, s.steps[1].buffer);
}

TEST(Mutate, SwapBuffersKeepsActionsInPlace) {
  GenParams p = RaftParamsForTest();
  Schedule s;
  s.steps = {ScheduleStep::Deliver(B(0, 1), 2), ScheduleStep::Deliver(B(1, 2), 5)};
  Rng rng(1);
  const Schedule m = Mutate(s, MutationKind::kSwapBuffers, p, rng);
  EXPECT_EQ(m.steps[0], ScheduleStep::Deliver(B(1, 2), 2));
  EXPECT_EQ(m.steps[1], ScheduleStep::Deliver(B(0, 1), 5));
}

TEST(Mutate, ShortScheduleIsNoOp) {
  GenParams p = RaftParamsForTest();
  Schedule s;
  s.steps = {ScheduleStep::Deliver(B(0, 1), 2)};
  Rng rng(1);
  EXPECT_EQ(Mutate(s, MutationKind::kSwapBuffers, p, rng), s);
  EXPECT_EQ(Mutate(s, MutationKind::kAuto, p, rng), s);
}

TEST(Mutate, SingleCrashChangesProcess) {
  GenParams p = RaftParamsForTest();  // 3 processes
  Schedule s;
  s.steps = {ScheduleStep::Deliver(B(0, 2), 1), ScheduleStep::Crash(B(0, 1)),
             ScheduleStep::Deliver(B(2, 0), 1), ScheduleStep::Restart(B(2, 1))};
  Rng rng(4);
  std::map<int32_t, int> targets;
  for (int i = 0; i < 200; ++i) {
    const Schedule m = Mutate(s, MutationKind::kSwapCrashProcesses, p, rng);
    const int32_t t = m.steps[1].target().value;
    ++targets[t];
    EXPECT_EQ(m.steps[3].target().value, t);
    EXPECT_FALSE(ValidateSchedule(m, p.limits()).has_value());
  }
  EXPECT_EQ(targets.count(1), 0u);
  EXPECT_GT(targets[0], 0);
  EXPECT_GT(targets[2], 0);
}

// Property: 10^4 (schedule, mutation) pairs stay within every schedule
// invariant and execute to completion.
TEST(Mutate, Closure) {
  for (BenchmarkKind kind : {BenchmarkKind::kTpc, BenchmarkKind::kRaftLite}) {
    BenchmarkConfig cfg;
    cfg.kind = kind;
    const GenParams p = DefaultGenParams(cfg);
    Harness h(BuildSystem(cfg));
    Rng rng(77);
    const MutationKind kinds[] = {MutationKind::kSwapBuffers, MutationKind::kSwapCrashProcesses,
                                  MutationKind::kSwapMaxMessages, MutationKind::kAuto};
    Schedule s = GenerateRandomSchedule(p, rng);
    for (int i = 0; i < 5000; ++i) {
      if (i % 50 == 0) s = GenerateRandomSchedule(p, rng);
      s = Mutate(s, kinds[i % 4], p, rng);
      const auto err = ValidateSchedule(s, p.limits());
      ASSERT_FALSE(err.has_value()) << *err;
      if (i % 10 == 0) ASSERT_NO_THROW(h.Execute(s));
    }
  }
}

CampaignConfig Micro25(Notion n, int64_t budget, uint64_t seed) {
  CampaignConfig c;
  c.bench.micro = {2, 5, true};
  c.notion = n;
  c.budget = budget;
  c.seed = seed;
  return c;
}

TEST(Campaign, AccountingBalances) {
  for (Notion n : {Notion::kModel, Notion::kTrace, Notion::kLine, Notion::kRandom}) {
    for (uint64_t seed : {1u, 2u}) {
      CampaignConfig c = Micro25(n, 1500, seed);
      const CampaignResult r = RunCampaign(c);
      EXPECT_EQ(r.executions, 1500);
      EXPECT_EQ(r.executions + r.queue_remaining,
                r.initial + r.spawned + r.repopulations * c.corpus_size);
      if (n == Notion::kRandom) {
        EXPECT_EQ(r.spawned, 0);
        EXPECT_TRUE(r.interesting.empty());
        EXPECT_EQ(r.total_coverage, 0u);
      }
    }
  }
}

// Energy read back from the coverage timeline: every iteration that grew
// totalCoverage by k spawned exactly 5k mutants.
TEST(Campaign, EnergyFollowsNewCoverage) {
  const CampaignResult r = RunCampaign(Micro25(Notion::kModel, 3000, 9));
  std::vector<int64_t> expected;
  size_t prev = 0;
  for (const TimelinePoint& p : r.timeline) {
    ASSERT_GE(p.total_coverage, prev);
    const int64_t fresh = static_cast<int64_t>(p.total_coverage - prev);
    if (fresh > 0) expected.push_back(5 * fresh);
    prev = p.total_coverage;
  }
  std::vector<int64_t> got;
  for (const CorpusEntry& e : r.interesting) got.push_back(e.energy);
  EXPECT_EQ(got, expected);
  int64_t spawned = 0;
  for (int64_t e : expected) spawned += e;
  EXPECT_EQ(spawned, r.spawned);
}

TEST(Campaign, TimelineMonotone) {
  for (Notion n : {Notion::kModel, Notion::kTrace, Notion::kLine, Notion::kRandom}) {
    const CampaignResult r = RunCampaign(Micro25(n, 800, 4));
    ASSERT_EQ(r.timeline.size(), 800u);
    for (size_t i = 1; i < r.timeline.size(); ++i) {
      ASSERT_EQ(r.timeline[i].iteration, static_cast<int64_t>(i + 1));
      ASSERT_GE(r.timeline[i].total_coverage, r.timeline[i - 1].total_coverage);
      ASSERT_GE(r.timeline[i].model_states, r.timeline[i - 1].model_states);
    }
    EXPECT_EQ(r.unmatched_actions, 0);
  }
}

TEST(Campaign, Deterministic) {
  CampaignConfig c;
  c.bench.kind = BenchmarkKind::kRaftLite;
  c.budget = 300;
  c.seed = 12;
  const CampaignResult a = RunCampaign(c);
  const CampaignResult b = RunCampaign(c);
  ASSERT_EQ(a.timeline.size(), b.timeline.size());
  for (size_t i = 0; i < a.timeline.size(); ++i) {
    EXPECT_EQ(a.timeline[i].total_coverage, b.timeline[i].total_coverage);
    EXPECT_EQ(a.timeline[i].model_states, b.timeline[i].model_states);
  }
  ASSERT_EQ(a.bugs.size(), b.bugs.size());
  for (size_t i = 0; i < a.bugs.size(); ++i) {
    EXPECT_EQ(a.bugs[i].key, b.bugs[i].key);
    EXPECT_EQ(a.bugs[i].first_iteration, b.bugs[i].first_iteration);
  }
}

TEST(Campaign, StopOnEndsEarly) {
  CampaignConfig c = Micro25(Notion::kRandom, 10000, 3);
  c.stop_on = "AssertionFailure:NullDeref";
  const CampaignResult r = RunCampaign(c);
  const auto first = r.FirstBug("AssertionFailure");
  ASSERT_TRUE(first.has_value());
  EXPECT_EQ(r.executions, *first);
  EXPECT_EQ(r.bugs.front().schedule.steps.size(), 100u);
}

TEST(Campaign, ParallelWorkersKeepAccounting) {
  CampaignConfig c = Micro25(Notion::kModel, 1000, 5);
  c.workers = 4;
  const CampaignResult r = RunCampaign(c);
  EXPECT_EQ(r.executions, 1000);
  EXPECT_EQ(r.executions + r.queue_remaining,
            r.initial + r.spawned + r.repopulations * c.corpus_size);
}

TEST(Campaign, ConfigErrors) {
  CampaignConfig tpc;
  tpc.bench.kind = BenchmarkKind::kTpc;
  tpc.crash_quota = 2;
  EXPECT_THROW(RunCampaign(tpc), ConfigError);
  CampaignConfig bad;
  bad.corpus_size = 0;
  EXPECT_THROW(ValidateCampaign(bad), ConfigError);
  CampaignConfig raft;
  raft.bench.kind = BenchmarkKind::kRaftLite;
  raft.bench.raft.procs = 4;
  EXPECT_THROW(ValidateCampaign(raft), ConfigError);
}

TEST(Campaign, WritesOutputs) {
  const auto dir = std::filesystem::temp_directory_path() / "modelfuzz_fuzzer_test";
  std::filesystem::remove_all(dir);
  CampaignConfig c = Micro25(Notion::kModel, 400, 6);
  c.out_dir = dir.string();
  const CampaignResult r = RunCampaign(c);
  std::ifstream csv(dir / "coverage.csv");
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header, "iteration,total_coverage,executions,model_states");
  size_t rows = 0;
  for (std::string line; std::getline(csv, line);) ++rows;
  EXPECT_EQ(rows, 400u);
  std::ifstream bugs(dir / "bugs.jsonl");
  size_t lines = 0;
  for (std::string line; std::getline(bugs, line);) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_TRUE(std::filesystem::exists(dir / j["scheduleFile"].get<std::string>()));
    ++lines;
  }
  EXPECT_EQ(lines, r.bugs.size());
  const auto cfg = CampaignConfig::FromJson(
      nlohmann::json::parse(std::ifstream(dir / "config.json")));
  EXPECT_EQ(cfg.ToJson(), c.ToJson());
  std::filesystem::remove_all(dir);
}

TEST(CampaignConfig, FromJsonOverlays) {
  const auto c = CampaignConfig::FromJson(
      nlohmann::json{{"bench", "tpc"}, {"tpc.rm", 4}, {"budget", 50}, {"notion", "trace"}});
  EXPECT_EQ(c.bench.kind, BenchmarkKind::kTpc);
  EXPECT_EQ(c.bench.tpc.rms, 4);
  EXPECT_EQ(c.budget, 50);
  EXPECT_EQ(c.notion, Notion::kTrace);
  EXPECT_THROW(CampaignConfig::FromJson(nlohmann::json{{"budget", "many"}}), ConfigError);
  EXPECT_THROW(CampaignConfig::FromJson(nlohmann::json{{"bench", "paxos"}}), ConfigError);
}

}  // namespace
}  // namespace modelfuzz
