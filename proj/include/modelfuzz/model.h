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

#ifndef MODELFUZZ_MODEL_H_
#define MODELFUZZ_MODEL_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "modelfuzz/hash.h"
#include "modelfuzz/schedule.h"

namespace modelfuzz {

// An action of an abstract model: a name plus structured arguments.
struct ModelAction {
  std::string name;
  Fields args;

  std::string ToString() const;

  friend bool operator==(const ModelAction&, const ModelAction&) = default;
};

// Canonical flat encoding of a model state. Each model defines the layout;
// sets are bitmasks or sorted runs, so equal states have equal words.
struct ModelState {
  std::vector<int64_t> words;

  friend bool operator==(const ModelState&, const ModelState&) = default;
  friend auto operator<=>(const ModelState&, const ModelState&) = default;
};

using StateFingerprint = Digest128;

// A labeled transition system <Q, I, A, delta>. Q is implicit; the
// interpreter only ever asks for initial states and successors.
class AbstractModel {
 public:
  virtual ~AbstractModel() = default;

  virtual std::string_view name() const = 0;
  virtual std::vector<ModelState> Initial() const = 0;

  // Appends delta(q, a) to `out` (nothing if `a` is disabled at `q`).
  // Throws MappingError for action names outside the alphabet.
  virtual void Successors(const ModelState& q, const ModelAction& a,
                          std::vector<ModelState>& out) const = 0;

  // Actions to try from `q` during exhaustive exploration.
  virtual std::vector<ModelAction> Actions(const ModelState& q) const = 0;

  // State abstraction applied to a run path before coverage is taken.
  virtual std::vector<ModelState> Abstract(const std::vector<ModelState>& path) const {
    return path;
  }

  virtual std::string Describe(const ModelState& q) const = 0;

  StateFingerprint Fingerprint(const ModelState& q) const;
};

struct RunResult {
  std::vector<StateFingerprint> visited;  // sorted, unique
  std::vector<ModelState> path;           // one state per matched step (frontier head)
  std::vector<int> unmatched;             // indices of disabled actions
  size_t max_frontier = 0;
};

// Controlled simulation: follows `actions` instead of exploring.
RunResult RunActions(const AbstractModel& model, std::span<const ModelAction> actions);

struct BfsResult {
  std::vector<StateFingerprint> states;  // sorted
  bool truncated = false;                // explosion guard hit
  int depth_reached = 0;
};

inline constexpr size_t kBfsStateGuard = 10'000'000;

// All states reachable from I in at most `depth_limit` transitions
// (negative = unbounded).
BfsResult BfsReachable(const AbstractModel& model, int depth_limit,
                       size_t max_states = kBfsStateGuard);

}  // namespace modelfuzz

#endif  // MODELFUZZ_MODEL_H_
