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

// Command-line driver: run, compare, enumerate, replay.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "modelfuzz/benchmarks.h"
#include "modelfuzz/coverage.h"
#include "modelfuzz/errors.h"
#include "modelfuzz/fuzzer.h"
#include "modelfuzz/harness.h"
#include "modelfuzz/mapper.h"
#include "modelfuzz/model.h"
#include "modelfuzz/stats.h"

namespace {

using modelfuzz::CampaignConfig;
using nlohmann::json;

std::string ReadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw modelfuzz::ConfigError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Flags shared by every subcommand. Only flags given on the command line
// end up in `overrides`, so they win over the config file.
struct CommonFlags {
  std::string config_file;
  json overrides = json::object();

  void Attach(CLI::App* app) {
    app->add_option("--config", config_file, "JSON config file");
    Str(app, "--bench", "bench", "micro | tpc | raftlite");
    Int(app, "--micro-m", "micro.m", "micro: workers");
    Int(app, "--micro-n", "micro.n", "micro: tasks");
    Bool(app, "--micro-bug", "micro.bug", "micro: enable the seeded bug (true/false)");
    Int(app, "--tpc-rm", "tpc.rm", "tpc: resource managers");
    Int(app, "--tpc-vars", "tpc.vars", "tpc: variables");
    Int(app, "--tpc-requests", "tpc.requests", "tpc: client requests");
    Int(app, "--raft-procs", "raft.procs", "raftlite: processes");
    Int(app, "--raft-requests", "raft.requests", "raftlite: client requests");
    Bool(app, "--raft-quorum-bug", "raft.quorum_bug", "raftlite: seeded quorum bug (true/false)");
    Int(app, "--raft-snapshot", "raft.snapshot_threshold", "raftlite: snapshot threshold");
  }

  void Str(CLI::App* app, const char* flag, const char* key, const char* help) {
    app->add_option_function<std::string>(
        flag, [this, key](const std::string& v) { overrides[key] = v; }, help);
  }
  void Int(CLI::App* app, const char* flag, const char* key, const char* help) {
    app->add_option_function<int64_t>(
        flag, [this, key](const int64_t& v) { overrides[key] = v; }, help);
  }
  void U64(CLI::App* app, const char* flag, const char* key, const char* help) {
    app->add_option_function<uint64_t>(
        flag, [this, key](const uint64_t& v) { overrides[key] = v; }, help);
  }
  void Bool(CLI::App* app, const char* flag, const char* key, const char* help) {
    app->add_option_function<bool>(
        flag, [this, key](const bool& v) { overrides[key] = v; }, help);
  }

  json Merged() const {
    json j = config_file.empty() ? json::object() : json::parse(ReadFile(config_file));
    if (!j.is_object()) throw modelfuzz::ConfigError("config file must hold a JSON object");
    for (auto it = overrides.begin(); it != overrides.end(); ++it) j[it.key()] = it.value();
    return j;
  }

  CampaignConfig Campaign() const { return CampaignConfig::FromJson(Merged()); }
};

void AttachCampaignFlags(CommonFlags& f, CLI::App* app) {
  f.Int(app, "--budget", "budget", "iterations");
  f.U64(app, "--seed", "seed", "master seed");
  f.Str(app, "--out", "out", "output directory");
  f.Int(app, "--corpus-size", "corpus_size", "initial corpus size");
  f.Int(app, "--energy", "energy_per_state", "mutants per new coverage item");
  f.Int(app, "--max-steps", "max_steps", "schedule length");
  f.Int(app, "--max-messages", "max_messages", "deliveries per step");
  f.Int(app, "--crash-quota", "crash_quota", "crashes per schedule (-1: benchmark default)");
  f.Int(app, "--workers", "workers", "parallel workers");
  f.Str(app, "--stop-on", "stop_on", "stop at the first violation with this key prefix");
}

int CmdRun(const CommonFlags& f) {
  const CampaignConfig cfg = f.Campaign();
  const modelfuzz::CampaignResult r = modelfuzz::RunCampaign(cfg);
  nlohmann::ordered_json out;
  out["executions"] = r.executions;
  out["total_coverage"] = r.total_coverage;
  out["model_states"] = r.model_states;
  out["interesting"] = r.interesting.size();
  out["repopulations"] = r.repopulations;
  out["unmatched_actions"] = r.unmatched_actions;
  nlohmann::ordered_json bugs = nlohmann::ordered_json::array();
  for (const auto& b : r.bugs) {
    bugs.push_back({{"violationKey", b.key}, {"firstIteration", b.first_iteration}});
  }
  out["bugs"] = std::move(bugs);
  std::cout << out.dump(2) << "\n";
  return 0;
}

int CmdCompare(const CommonFlags& f, const std::vector<std::string>& notions, int runs,
               const std::string& bug, int workers) {
  const json merged = f.Merged();
  modelfuzz::CompareConfig cfg;
  cfg.base = CampaignConfig::FromJson(merged);
  cfg.base.workers = 1;
  cfg.out_dir = cfg.base.out_dir;
  cfg.runs = merged.value("runs", runs);
  cfg.bug_prefix = merged.value("bug", bug);
  cfg.workers = workers;
  std::vector<std::string> names = notions;
  if (names.empty() && merged.contains("notions")) {
    names = merged["notions"].get<std::vector<std::string>>();
  }
  if (names.empty()) names = {"model", "trace", "line", "random"};
  for (const std::string& n : names) cfg.notions.push_back(modelfuzz::ParseNotion(n));
  const modelfuzz::ComparisonResult r = modelfuzz::CompareStrategies(cfg);
  std::cout << r.ToJson().dump(2) << "\n";
  return 0;
}

int CmdEnumerate(const CommonFlags& f, int max_depth, const std::string& states_out) {
  const CampaignConfig cfg = f.Campaign();
  const auto sut = modelfuzz::BuildSystem(cfg.bench);
  const auto model = modelfuzz::BuildModel(cfg.bench);
  modelfuzz::EnumerationOptions opts;
  opts.max_depth = max_depth;
  const modelfuzz::EnumerationResult e =
      modelfuzz::EnumerateOrderings(*sut, cfg.bench.kind, *model, opts);
  const modelfuzz::BfsResult bfs = modelfuzz::BfsReachable(*model, max_depth);
  nlohmann::ordered_json out;
  out["orderings"] = e.orderings;
  out["traceClasses"] = e.trace_classes;
  out["reachableStates"] = bfs.states.size();
  out["truncated"] = e.truncated || bfs.truncated;
  std::cout << out.dump() << "\n";
  if (!states_out.empty()) {
    std::ofstream o(states_out);
    for (const auto& s : bfs.states) o << s.Hex() << "\n";
  }
  return 0;
}

int CmdReplay(const CommonFlags& f, const std::string& schedule_file, const std::string& json_out) {
  const CampaignConfig cfg = f.Campaign();
  const modelfuzz::Schedule s = modelfuzz::ParseSchedule(ReadFile(schedule_file));
  modelfuzz::Harness h(modelfuzz::BuildSystem(cfg.bench));
  const modelfuzz::ExecutionResult exec = h.Execute(s);
  const auto model = modelfuzz::BuildModel(cfg.bench);
  const auto actions = modelfuzz::MapEvents(cfg.bench.kind, exec.trace);
  const modelfuzz::RunResult run = modelfuzz::RunActions(*model, actions);
  nlohmann::ordered_json out = modelfuzz::ExecutionResultToJson(exec);
  out["model_states"] = modelfuzz::CoveredStates(*model, run).size();
  out["unmatched_actions"] = run.unmatched.size();
  if (json_out.empty()) {
    std::cout << out.dump(2) << "\n";
  } else {
    std::ofstream(json_out) << out.dump(2) << "\n";
    nlohmann::ordered_json brief;
    brief["events"] = exec.trace.events.size();
    brief["violations"] = exec.violations.size();
    std::cout << brief.dump() << "\n";
  }
  return exec.violations.empty() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Model-guided schedule fuzzer for distributed protocol benchmarks"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  CLI::App* run = app.add_subcommand("run", "run one fuzzing campaign");
  run_flags.Attach(run);
  AttachCampaignFlags(run_flags, run);
  run_flags.Str(run, "--notion", "notion", "model | trace | line | random");

  CommonFlags cmp_flags;
  std::vector<std::string> notions;
  int runs = 10;
  std::string bug;
  int cmp_workers = 1;
  CLI::App* cmp = app.add_subcommand("compare", "compare guidance notions over several runs");
  cmp_flags.Attach(cmp);
  AttachCampaignFlags(cmp_flags, cmp);
  cmp->add_option("--notions", notions, "notions to compare");
  cmp->add_option("--runs", runs, "runs per notion");
  cmp->add_option("--bug", bug, "violation key prefix for first-bug statistics");
  cmp->add_option("--jobs", cmp_workers, "campaigns run concurrently");

  CommonFlags enum_flags;
  int max_depth = 64;
  std::string states_out;
  CLI::App* enu = app.add_subcommand("enumerate", "count orderings, trace classes and model states");
  enum_flags.Attach(enu);
  enu->add_option("--max-depth", max_depth, "deliveries per ordering / BFS depth");
  enu->add_option("--states-out", states_out, "write reachable state fingerprints here");

  CommonFlags replay_flags;
  std::string schedule_file;
  std::string json_out;
  CLI::App* rep = app.add_subcommand("replay", "execute one schedule file");
  replay_flags.Attach(rep);
  rep->add_option("--schedule", schedule_file, "schedule JSON")->required();
  rep->add_option("--json-out", json_out, "write the execution as JSON");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return CmdRun(run_flags);
    if (*cmp) return CmdCompare(cmp_flags, notions, runs, bug, cmp_workers);
    if (*enu) return CmdEnumerate(enum_flags, max_depth, states_out);
    if (*rep) return CmdReplay(replay_flags, schedule_file, json_out);
  } catch (const modelfuzz::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
