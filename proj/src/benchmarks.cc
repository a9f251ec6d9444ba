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

#include "modelfuzz/benchmarks.h"

#include "modelfuzz/errors.h"

namespace modelfuzz {

std::string_view BenchmarkName(BenchmarkKind k) {
  switch (k) {
    case BenchmarkKind::kMicro:
      return "micro";
    case BenchmarkKind::kTpc:
      return "tpc";
    case BenchmarkKind::kRaftLite:
      return "raftlite";
  }
  return "?";
}

BenchmarkKind ParseBenchmarkKind(std::string_view name) {
  if (name == "micro") return BenchmarkKind::kMicro;
  if (name == "tpc") return BenchmarkKind::kTpc;
  if (name == "raftlite" || name == "raft") return BenchmarkKind::kRaftLite;
  throw ConfigError("unknown benchmark '" + std::string(name) + "'");
}

nlohmann::json BenchmarkConfig::ToJson() const {
  nlohmann::json j;
  j["bench"] = BenchmarkName(kind);
  j["micro.m"] = micro.workers;
  j["micro.n"] = micro.tasks;
  j["micro.bug"] = micro.bug;
  j["tpc.rm"] = tpc.rms;
  j["tpc.vars"] = tpc.vars;
  j["tpc.requests"] = tpc.requests;
  j["raft.procs"] = raft.procs;
  j["raft.requests"] = raft.requests;
  j["raft.quorum_bug"] = raft.quorum_bug;
  j["raft.snapshot_threshold"] = raft.snapshot_threshold;
  return j;
}

namespace {

template <typename T>
void Read(const nlohmann::json& j, const char* key, T& out) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("config key '") + key + "' has the wrong type");
  }
}

}  // namespace

BenchmarkConfig BenchmarkConfig::FromJson(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("benchmark config must be a JSON object");
  BenchmarkConfig cfg;
  std::string bench = std::string(BenchmarkName(cfg.kind));
  Read(j, "bench", bench);
  cfg.kind = ParseBenchmarkKind(bench);
  Read(j, "micro.m", cfg.micro.workers);
  Read(j, "micro.n", cfg.micro.tasks);
  Read(j, "micro.bug", cfg.micro.bug);
  Read(j, "tpc.rm", cfg.tpc.rms);
  Read(j, "tpc.vars", cfg.tpc.vars);
  Read(j, "tpc.requests", cfg.tpc.requests);
  Read(j, "raft.procs", cfg.raft.procs);
  Read(j, "raft.requests", cfg.raft.requests);
  Read(j, "raft.quorum_bug", cfg.raft.quorum_bug);
  Read(j, "raft.snapshot_threshold", cfg.raft.snapshot_threshold);
  return cfg;
}

std::unique_ptr<SystemUnderTest> BuildSystem(const BenchmarkConfig& cfg) {
  switch (cfg.kind) {
    case BenchmarkKind::kMicro:
      return BuildMicro(cfg.micro.workers, cfg.micro.tasks, cfg.micro.bug);
    case BenchmarkKind::kTpc:
      return BuildTpc(cfg.tpc.rms, cfg.tpc.vars, cfg.tpc.requests);
    case BenchmarkKind::kRaftLite:
      return BuildRaftLite(cfg.raft.procs, cfg.raft.requests, cfg.raft.quorum_bug,
                           cfg.raft.snapshot_threshold);
  }
  throw ConfigError("unknown benchmark");
}

std::unique_ptr<AbstractModel> BuildModel(const BenchmarkConfig& cfg) {
  switch (cfg.kind) {
    case BenchmarkKind::kMicro:
      return BuildMicroModel(cfg.micro.workers, cfg.micro.tasks);
    case BenchmarkKind::kTpc:
      return BuildTpcModel(cfg.tpc.rms, cfg.tpc.vars, cfg.tpc.requests);
    case BenchmarkKind::kRaftLite:
      return BuildRaftModel(cfg.raft.procs, cfg.raft.requests);
  }
  throw ConfigError("unknown benchmark");
}

GenParams DefaultGenParams(const BenchmarkConfig& cfg) {
  const auto sut = BuildSystem(cfg);
  GenParams p;
  p.num_processes = sut->process_count();
  p.max_steps = 100;
  p.max_messages_per_step = 5;
  p.crash_quota = sut->supports_crashes() ? 10 : 0;
  p.channels = sut->Channels();
  return p;
}

}  // namespace modelfuzz
