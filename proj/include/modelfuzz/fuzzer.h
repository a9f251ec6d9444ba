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

#ifndef MODELFUZZ_FUZZER_H_
#define MODELFUZZ_FUZZER_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "modelfuzz/benchmarks.h"
#include "modelfuzz/coverage.h"
#include "modelfuzz/rng.h"
#include "modelfuzz/schedule.h"

namespace modelfuzz {

enum class MutationKind : uint8_t { kSwapBuffers, kSwapCrashProcesses, kSwapMaxMessages, kAuto };

std::string_view MutationKindName(MutationKind k);

// Returns a mutant of `s` that satisfies `params.limits()`. Falls back to
// an unchanged copy when the requested mutation does not apply.
Schedule Mutate(const Schedule& s, MutationKind kind, const GenParams& params, Rng& rng);

inline int64_t AssignEnergy(int64_t new_items, int64_t energy_per_state) {
  return energy_per_state * new_items;
}

struct CorpusEntry {
  int64_t id = 0;
  Schedule schedule;
  int64_t energy = 0;
  std::optional<int64_t> parent;
  int64_t discovered_at = 0;  // iteration that created the entry (0 = initial)
};

struct CampaignConfig {
  BenchmarkConfig bench;
  Notion notion = Notion::kModel;
  int64_t budget = 1000;  // executions
  int corpus_size = 20;
  int energy_per_state = 5;
  int max_steps = 100;
  int max_messages_per_step = 5;
  int crash_quota = -1;  // -1: benchmark default (10 with crashes, else 0)
  uint64_t seed = 0;
  int workers = 1;        // > 1 runs the nondeterministic parallel mode
  std::string out_dir;    // empty: no files written
  // Stop as soon as a violation whose key starts with this prefix is seen.
  std::string stop_on;

  GenParams MakeGenParams() const;
  nlohmann::json ToJson() const;
  // Overlays recognized keys of `j` onto `base`.
  static CampaignConfig FromJson(const nlohmann::json& j, CampaignConfig base);
  static CampaignConfig FromJson(const nlohmann::json& j) { return FromJson(j, CampaignConfig{}); }
};

struct TimelinePoint {
  int64_t iteration = 0;
  size_t total_coverage = 0;
  int64_t executions = 0;
  size_t model_states = 0;  // distinct abstract states seen, for every notion
};

struct BugRecord {
  std::string key;
  int64_t first_iteration = 0;
  std::string schedule_file;
  Schedule schedule;
};

struct CampaignResult {
  std::vector<TimelinePoint> timeline;
  std::vector<BugRecord> bugs;
  std::vector<CorpusEntry> interesting;
  int64_t executions = 0;
  int64_t initial = 0;
  int64_t spawned = 0;
  int64_t repopulations = 0;
  int64_t queue_remaining = 0;
  int64_t unmatched_actions = 0;
  size_t total_coverage = 0;
  size_t model_states = 0;

  // First iteration at which a violation with this key prefix appeared.
  std::optional<int64_t> FirstBug(std::string_view prefix) const;
};

// Throws ConfigError for configurations that cannot run.
void ValidateCampaign(const CampaignConfig& cfg);

CampaignResult RunCampaign(const CampaignConfig& cfg);

}  // namespace modelfuzz

#endif  // MODELFUZZ_FUZZER_H_
