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

#include "modelfuzz/fuzzer.h"

#include <algorithm>
#include <deque>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>
#include <unordered_set>

#include "modelfuzz/errors.h"
#include "modelfuzz/harness.h"
#include "modelfuzz/mapper.h"

namespace modelfuzz {

std::string_view MutationKindName(MutationKind k) {
  switch (k) {
    case MutationKind::kSwapBuffers:
      return "SwapBuffers";
    case MutationKind::kSwapCrashProcesses:
      return "SwapCrashProcesses";
    case MutationKind::kSwapMaxMessages:
      return "SwapMaxMessages";
    case MutationKind::kAuto:
      return "Auto";
  }
  return "?";
}

namespace {

constexpr int kMutationTries = 16;

std::vector<size_t> IndicesOf(const Schedule& s, StepAction a) {
  std::vector<size_t> out;
  for (size_t i = 0; i < s.steps.size(); ++i) {
    if (s.steps[i].action == a) out.push_back(i);
  }
  return out;
}

std::pair<size_t, size_t> TwoDistinct(size_t n, Rng& rng) {
  const size_t i = rng.Uniform(n);
  size_t j = rng.Uniform(n - 1);
  if (j >= i) ++j;
  return {i, j};
}

// Moves the only crash (and the restart answering it) to another process.
std::optional<Schedule> RetargetCrash(const Schedule& s, size_t crash, const GenParams& params,
                                      Rng& rng) {
  const std::vector<BufferId> universe = params.ChannelUniverse();
  const ProcessId from = s.steps[crash].target();
  std::vector<int32_t> others;
  for (const BufferId& b : universe) {
    if (b.receiver != from && std::find(others.begin(), others.end(), b.receiver.value) == others.end()) {
      others.push_back(b.receiver.value);
    }
  }
  if (others.empty()) return std::nullopt;
  std::sort(others.begin(), others.end());
  const int32_t to = others[rng.Uniform(others.size())];
  std::vector<BufferId> into;
  for (const BufferId& b : universe) {
    if (b.receiver.value == to) into.push_back(b);
  }
  Schedule out = s;
  out.steps[crash].buffer = into[rng.Uniform(into.size())];
  for (size_t i = crash + 1; i < out.steps.size(); ++i) {
    if (out.steps[i].action == StepAction::kRestart && out.steps[i].target() == from) {
      out.steps[i].buffer = into[rng.Uniform(into.size())];
      break;
    }
  }
  return out;
}

std::optional<Schedule> TryMutate(const Schedule& s, MutationKind kind, const GenParams& params,
                                  Rng& rng) {
  Schedule out = s;
  switch (kind) {
    case MutationKind::kSwapBuffers: {
      if (s.steps.size() < 2) return std::nullopt;
      auto [i, j] = TwoDistinct(s.steps.size(), rng);
      std::swap(out.steps[i].buffer, out.steps[j].buffer);
      return out;
    }
    case MutationKind::kSwapCrashProcesses: {
      const std::vector<size_t> crashes = IndicesOf(s, StepAction::kCrash);
      if (crashes.empty()) return std::nullopt;
      if (crashes.size() == 1) return RetargetCrash(s, crashes[0], params, rng);
      auto [a, b] = TwoDistinct(crashes.size(), rng);
      std::swap(out.steps[crashes[a]], out.steps[crashes[b]]);
      return out;
    }
    case MutationKind::kSwapMaxMessages: {
      const std::vector<size_t> delivers = IndicesOf(s, StepAction::kDeliver);
      if (delivers.size() < 2) return std::nullopt;
      auto [a, b] = TwoDistinct(delivers.size(), rng);
      std::swap(out.steps[delivers[a]].count, out.steps[delivers[b]].count);
      return out;
    }
    case MutationKind::kAuto:
      break;
  }
  return std::nullopt;
}

}  // namespace

Schedule Mutate(const Schedule& s, MutationKind kind, const GenParams& params, Rng& rng) {
  if (kind == MutationKind::kAuto) {
    std::vector<MutationKind> applicable;
    if (s.steps.size() >= 2) applicable.push_back(MutationKind::kSwapBuffers);
    if (s.CrashCount() >= 1) applicable.push_back(MutationKind::kSwapCrashProcesses);
    if (IndicesOf(s, StepAction::kDeliver).size() >= 2) {
      applicable.push_back(MutationKind::kSwapMaxMessages);
    }
    kind = applicable.empty() ? MutationKind::kSwapBuffers
                              : applicable[rng.Uniform(applicable.size())];
  }
  const ScheduleLimits limits = params.limits();
  for (int attempt = 0; attempt < kMutationTries; ++attempt) {
    std::optional<Schedule> m = TryMutate(s, kind, params, rng);
    if (!m.has_value()) return s;
    if (!ValidateSchedule(*m, limits).has_value()) return *m;
  }
  return s;
}

// ---------------------------------------------------------------------------

GenParams CampaignConfig::MakeGenParams() const {
  GenParams p = DefaultGenParams(bench);
  p.max_steps = max_steps;
  p.max_messages_per_step = max_messages_per_step;
  if (crash_quota >= 0) p.crash_quota = crash_quota;
  return p;
}

nlohmann::json CampaignConfig::ToJson() const {
  nlohmann::json j = bench.ToJson();
  j["notion"] = NotionName(notion);
  j["budget"] = budget;
  j["corpus_size"] = corpus_size;
  j["energy_per_state"] = energy_per_state;
  j["max_steps"] = max_steps;
  j["max_messages"] = max_messages_per_step;
  j["crash_quota"] = crash_quota;
  j["seed"] = seed;
  j["workers"] = workers;
  if (!stop_on.empty()) j["stop_on"] = stop_on;
  return j;
}

CampaignConfig CampaignConfig::FromJson(const nlohmann::json& j, CampaignConfig base) {
  if (!j.is_object()) throw ConfigError("campaign config must be a JSON object");
  nlohmann::json bench = base.bench.ToJson();
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (bench.contains(it.key())) bench[it.key()] = it.value();
  }
  base.bench = BenchmarkConfig::FromJson(bench);
  try {
    if (j.contains("notion")) base.notion = ParseNotion(j["notion"].get<std::string>());
    if (j.contains("budget")) base.budget = j["budget"].get<int64_t>();
    if (j.contains("corpus_size")) base.corpus_size = j["corpus_size"].get<int>();
    if (j.contains("energy_per_state")) base.energy_per_state = j["energy_per_state"].get<int>();
    if (j.contains("max_steps")) base.max_steps = j["max_steps"].get<int>();
    if (j.contains("max_messages")) base.max_messages_per_step = j["max_messages"].get<int>();
    if (j.contains("crash_quota")) base.crash_quota = j["crash_quota"].get<int>();
    if (j.contains("seed")) base.seed = j["seed"].get<uint64_t>();
    if (j.contains("workers")) base.workers = j["workers"].get<int>();
    if (j.contains("stop_on")) base.stop_on = j["stop_on"].get<std::string>();
    if (j.contains("out")) base.out_dir = j["out"].get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("campaign config: ") + e.what());
  }
  return base;
}

std::optional<int64_t> CampaignResult::FirstBug(std::string_view prefix) const {
  std::optional<int64_t> best;
  for (const BugRecord& b : bugs) {
    if (b.key.starts_with(prefix) && (!best || b.first_iteration < *best)) best = b.first_iteration;
  }
  return best;
}

void ValidateCampaign(const CampaignConfig& cfg) {
  if (cfg.budget < 0) throw ConfigError("budget must be >= 0");
  if (cfg.corpus_size < 1) throw ConfigError("corpus size must be >= 1");
  if (cfg.energy_per_state < 0) throw ConfigError("energy per state must be >= 0");
  if (cfg.max_steps < 1 || cfg.max_messages_per_step < 1) {
    throw ConfigError("max steps and max messages per step must be >= 1");
  }
  if (cfg.workers < 1) throw ConfigError("workers must be >= 1");
  std::unique_ptr<SystemUnderTest> sut;
  try {
    sut = BuildSystem(cfg.bench);
  } catch (const ParamError& e) {
    throw ConfigError(e.what());
  }
  if (cfg.crash_quota > 0 && !sut->supports_crashes()) {
    throw ConfigError(std::string(sut->name()) + " does not model crashes; crash quota must be 0");
  }
}

namespace {

struct ItemHash {
  size_t operator()(const CoverageItem& c) const noexcept {
    return std::hash<Digest128>{}(c.id) ^ static_cast<size_t>(c.tag);
  }
};

// What one execution produced, computed outside the campaign lock.
struct Evaluation {
  CoverageReport report;
  std::vector<StateFingerprint> states;
  std::vector<Violation> violations;
  int64_t unmatched = 0;
};

struct Worker {
  Harness harness;
  std::unique_ptr<AbstractModel> model;
  BenchmarkKind kind;

  Evaluation Evaluate(const Schedule& s, Notion notion) {
    Evaluation ev;
    ExecutionResult exec = harness.Execute(s);
    const RunResult run = RunActions(*model, MapEvents(kind, exec.trace));
    ev.unmatched = static_cast<int64_t>(run.unmatched.size());
    ev.states = CoveredStates(*model, run);
    ev.report = notion == Notion::kModel ? Assess(notion, exec, model.get(), &run)
                                         : Assess(notion, exec);
    ev.violations = std::move(exec.violations);
    return ev;
  }
};

class Campaign {
 public:
  explicit Campaign(const CampaignConfig& cfg)
      : cfg_(cfg), gen_(cfg.MakeGenParams()), rng_(cfg.seed) {
    if (!cfg_.out_dir.empty()) {
      std::filesystem::create_directories(std::filesystem::path(cfg_.out_dir) / "corpus");
    }
  }

  CampaignResult Run() {
    Populate();
    result_.initial = cfg_.corpus_size;
    if (cfg_.workers == 1) {
      Worker w = MakeWorker();
      Loop(w);
    } else {
      std::vector<std::thread> threads;
      for (int i = 0; i < cfg_.workers; ++i) {
        threads.emplace_back([this] {
          Worker w = MakeWorker();
          Loop(w);
        });
      }
      for (std::thread& t : threads) t.join();
      std::sort(result_.timeline.begin(), result_.timeline.end(),
                [](const TimelinePoint& a, const TimelinePoint& b) { return a.iteration < b.iteration; });
    }
    result_.queue_remaining = static_cast<int64_t>(queue_.size());
    result_.total_coverage = total_.size();
    result_.model_states = states_.size();
    WriteOutputs();
    return std::move(result_);
  }

 private:
  Worker MakeWorker() const {
    return Worker{Harness(BuildSystem(cfg_.bench)), BuildModel(cfg_.bench), cfg_.bench.kind};
  }

  void Populate() {
    for (int i = 0; i < cfg_.corpus_size; ++i) {
      CorpusEntry e;
      e.id = next_id_++;
      e.schedule = GenerateRandomSchedule(gen_, rng_);
      e.discovered_at = result_.executions;
      queue_.push_back(std::move(e));
    }
  }

  void Loop(Worker& w) {
    for (;;) {
      CorpusEntry entry;
      int64_t iteration;
      {
        std::lock_guard<std::mutex> lock(mu_);
        if (stop_ || result_.executions >= cfg_.budget) return;
        if (queue_.empty()) {
          Populate();
          ++result_.repopulations;
        }
        entry = std::move(queue_.front());
        queue_.pop_front();
        iteration = ++result_.executions;
      }
      Evaluation ev = w.Evaluate(entry.schedule, cfg_.notion);
      std::lock_guard<std::mutex> lock(mu_);
      Commit(entry, iteration, ev);
    }
  }

  void Commit(CorpusEntry& entry, int64_t iteration, const Evaluation& ev) {
    int64_t fresh = 0;
    for (const CoverageItem& item : ev.report.items) fresh += total_.insert(item).second;
    states_.insert(ev.states.begin(), ev.states.end());
    result_.unmatched_actions += ev.unmatched;

    std::string file;
    entry.energy = AssignEnergy(fresh, cfg_.energy_per_state);
    if (fresh > 0) {
      file = SaveSchedule(entry.schedule, iteration);
      for (int64_t k = 0; k < entry.energy; ++k) {
        CorpusEntry child;
        child.id = next_id_++;
        child.schedule = Mutate(entry.schedule, MutationKind::kAuto, gen_, rng_);
        child.parent = entry.id;
        child.discovered_at = iteration;
        queue_.push_back(std::move(child));
      }
      result_.spawned += entry.energy;
      result_.interesting.push_back(entry);
    }
    for (const Violation& v : ev.violations) {
      const std::string key = v.Key();
      if (!seen_bugs_.insert(key).second) continue;
      if (file.empty()) file = SaveSchedule(entry.schedule, iteration);
      result_.bugs.push_back(BugRecord{key, iteration, file, entry.schedule});
      if (!cfg_.stop_on.empty() && key.starts_with(cfg_.stop_on)) stop_ = true;
    }
    result_.timeline.push_back(
        TimelinePoint{iteration, total_.size(), result_.executions, states_.size()});
  }

  std::string SaveSchedule(const Schedule& s, int64_t iteration) {
    const std::string rel = "corpus/" + std::to_string(iteration) + ".json";
    if (cfg_.out_dir.empty()) return rel;
    std::ofstream(std::filesystem::path(cfg_.out_dir) / rel) << SerializeSchedule(s) << "\n";
    return rel;
  }

  void WriteOutputs() const {
    if (cfg_.out_dir.empty()) return;
    const std::filesystem::path dir(cfg_.out_dir);
    std::ofstream csv(dir / "coverage.csv");
    csv << "iteration,total_coverage,executions,model_states\n";
    for (const TimelinePoint& p : result_.timeline) {
      csv << p.iteration << "," << p.total_coverage << "," << p.executions << "," << p.model_states
          << "\n";
    }
    std::ofstream bugs(dir / "bugs.jsonl");
    for (const BugRecord& b : result_.bugs) {
      nlohmann::ordered_json j;
      j["violationKey"] = b.key;
      j["firstIteration"] = b.first_iteration;
      j["scheduleFile"] = b.schedule_file;
      bugs << j.dump() << "\n";
    }
    std::ofstream(dir / "config.json") << cfg_.ToJson().dump(2) << "\n";
  }

  const CampaignConfig& cfg_;
  const GenParams gen_;
  Rng rng_;
  std::mutex mu_;
  std::deque<CorpusEntry> queue_;
  std::unordered_set<CoverageItem, ItemHash> total_;
  std::unordered_set<StateFingerprint> states_;
  std::unordered_set<std::string> seen_bugs_;
  CampaignResult result_;
  int64_t next_id_ = 0;
  bool stop_ = false;
};

}  // namespace

CampaignResult RunCampaign(const CampaignConfig& cfg) {
  ValidateCampaign(cfg);
  Campaign c(cfg);
  return c.Run();
}

}  // namespace modelfuzz
