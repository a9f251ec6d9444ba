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

#ifndef MODELFUZZ_BENCHMARKS_H_
#define MODELFUZZ_BENCHMARKS_H_

#include <memory>
#include <string>
#include <string_view>

#include "json.hpp"
#include "modelfuzz/harness.h"
#include "modelfuzz/model.h"
#include "modelfuzz/schedule.h"

namespace modelfuzz {

enum class BenchmarkKind { kMicro, kTpc, kRaftLite };

std::string_view BenchmarkName(BenchmarkKind k);
BenchmarkKind ParseBenchmarkKind(std::string_view name);

struct MicroParams {
  int workers = 1;  // m
  int tasks = 1;    // n
  bool bug = true;
};

struct TpcParams {
  int rms = 3;
  int vars = 2;
  int requests = 3;
};

struct RaftParams {
  int procs = 3;
  int requests = 5;
  bool quorum_bug = false;
  int snapshot_threshold = 3;
};

struct BenchmarkConfig {
  BenchmarkKind kind = BenchmarkKind::kMicro;
  MicroParams micro;
  TpcParams tpc;
  RaftParams raft;

  // Flat keys: bench, micro.m, micro.n, micro.bug, tpc.rm, tpc.vars,
  // tpc.requests, raft.procs, raft.requests, raft.quorum_bug,
  // raft.snapshot_threshold.
  nlohmann::json ToJson() const;
  static BenchmarkConfig FromJson(const nlohmann::json& j);
};

std::unique_ptr<SystemUnderTest> BuildSystem(const BenchmarkConfig& cfg);
std::unique_ptr<AbstractModel> BuildModel(const BenchmarkConfig& cfg);

// Default generation parameters (channel universe included) for a benchmark.
GenParams DefaultGenParams(const BenchmarkConfig& cfg);

// Direct builders.
std::unique_ptr<SystemUnderTest> BuildMicro(int m, int n, bool bug_enabled);
std::unique_ptr<SystemUnderTest> BuildTpc(int rms, int vars, int requests);
std::unique_ptr<SystemUnderTest> BuildRaftLite(int procs, int requests, bool quorum_bug,
                                               int snapshot_threshold = 3);

std::unique_ptr<AbstractModel> BuildMicroModel(int m, int n);
std::unique_ptr<AbstractModel> BuildTpcModel(int rms, int vars, int requests);
std::unique_ptr<AbstractModel> BuildRaftModel(int procs, int requests);

// Variable set written by transaction `tx` (bitmask over variables).
int TpcRequestVars(int tx, int vars);

// Votes needed to become leader.
int RaftVoteQuorum(int procs, bool quorum_bug);

// Merges consecutive raft model states that differ only in the terms of
// non-leader processes (the later one takes the earlier one's value).
std::vector<ModelState> AbstractRaftStates(const std::vector<ModelState>& path, int procs);

}  // namespace modelfuzz

#endif  // MODELFUZZ_BENCHMARKS_H_
