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

#ifndef MODELFUZZ_COVERAGE_H_
#define MODELFUZZ_COVERAGE_H_

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "modelfuzz/benchmarks.h"
#include "modelfuzz/harness.h"
#include "modelfuzz/hash.h"
#include "modelfuzz/model.h"

namespace modelfuzz {

// Guidance notions. kLine is the structural (branch point) notion.
enum class Notion : uint8_t { kModel, kTrace, kLine, kRandom };

std::string_view NotionName(Notion n);
Notion ParseNotion(std::string_view name);

enum class CoverageTag : uint8_t { kState, kTrace, kPoint };

struct CoverageItem {
  CoverageTag tag = CoverageTag::kState;
  Digest128 id;

  friend bool operator==(const CoverageItem&, const CoverageItem&) = default;
  friend auto operator<=>(const CoverageItem&, const CoverageItem&) = default;
};

struct CoverageReport {
  Notion notion = Notion::kRandom;
  std::vector<CoverageItem> items;  // sorted, unique
};

// Model states covered by a run, after the model's state abstraction.
// Deterministic runs use the abstracted path; runs whose frontier ever
// branched fall back to the full visited set.
std::vector<StateFingerprint> CoveredStates(const AbstractModel& model, const RunResult& run);

// `model` and `run` must be given for kModel and only for kModel.
CoverageReport Assess(Notion notion, const ExecutionResult& exec,
                      const AbstractModel* model = nullptr, const RunResult* run = nullptr);

// ---------------------------------------------------------------------------
// Mazurkiewicz traces.

// True when the two events do not commute.
using DependenceRelation = std::function<bool(const ConcreteEvent&, const ConcreteEvent&)>;

// Same receiver, or a crash/restart of a process the other event touches.
bool DefaultDependent(const ConcreteEvent& a, const ConcreteEvent& b);

// Canonical key used to order events in the representative linearization.
std::vector<uint8_t> EventKey(const ConcreteEvent& e);

// Indices of `trace.events` in the lexicographically least linearization
// of the dependence order.
std::vector<size_t> CanonicalLinearization(const ConcreteEventTrace& trace);
std::vector<size_t> CanonicalLinearization(const ConcreteEventTrace& trace,
                                           const DependenceRelation& dependent);

Digest128 TraceFingerprint(const ConcreteEventTrace& trace);
Digest128 TraceFingerprint(const ConcreteEventTrace& trace, const DependenceRelation& dependent);

// ---------------------------------------------------------------------------
// Exhaustive enumeration oracle.

struct EnumeratedOrdering {
  ConcreteEventTrace trace;  // only filled when keep_traces is set
  Digest128 trace_id;
  std::vector<StateFingerprint> states;  // sorted
  std::vector<std::string> violations;   // sorted, unique keys
};

struct EnumerationResult {
  uint64_t orderings = 0;
  uint64_t trace_classes = 0;
  bool truncated = false;
  std::vector<EnumeratedOrdering> runs;
};

inline constexpr uint64_t kEnumerationGuard = 1'000'000;

struct EnumerationOptions {
  int max_depth = 64;
  bool keep_traces = false;
  uint64_t max_orderings = kEnumerationGuard;
};

// DFS over every maximal delivery ordering (one message per step, no
// crashes) of at most `max_depth` deliveries.
EnumerationResult EnumerateOrderings(const SystemUnderTest& sut, BenchmarkKind kind,
                                     const AbstractModel& model, const EnumerationOptions& opts);

// A pair of orderings whose state sets together equal `target`.
std::optional<std::pair<size_t, size_t>> CoveringPair(const EnumerationResult& r,
                                                      const std::vector<StateFingerprint>& target);

}  // namespace modelfuzz

#endif  // MODELFUZZ_COVERAGE_H_
