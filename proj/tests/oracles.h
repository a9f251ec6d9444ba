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

// Independent reference computations shared by the tests and the
// acceptance binary.

#ifndef MODELFUZZ_TESTS_ORACLES_H_
#define MODELFUZZ_TESTS_ORACLES_H_

#include <cmath>
#include <cstdint>
#include <deque>
#include <set>
#include <vector>

#include "modelfuzz/coverage.h"
#include "modelfuzz/schedule.h"

namespace modelfuzz::oracle {

using KeySeq = std::vector<std::vector<uint8_t>>;

inline KeySeq Keys(const std::vector<ConcreteEvent>& events) {
  KeySeq out;
  for (const ConcreteEvent& e : events) out.push_back(EventKey(e));
  return out;
}

// Every sequence reachable from `events` by swapping adjacent independent
// events, as key sequences.
inline std::set<KeySeq> SwapClosure(const std::vector<ConcreteEvent>& events) {
  std::set<KeySeq> seen;
  std::deque<std::vector<ConcreteEvent>> todo{events};
  seen.insert(Keys(events));
  while (!todo.empty()) {
    const std::vector<ConcreteEvent> cur = std::move(todo.front());
    todo.pop_front();
    for (size_t i = 0; i + 1 < cur.size(); ++i) {
      if (DefaultDependent(cur[i], cur[i + 1])) continue;
      std::vector<ConcreteEvent> next = cur;
      std::swap(next[i], next[i + 1]);
      if (seen.insert(Keys(next)).second) todo.push_back(std::move(next));
    }
  }
  return seen;
}

// U by direct pair counting.
inline double PairU(const std::vector<double>& xs, const std::vector<double>& ys) {
  double u = 0;
  for (double x : xs) {
    for (double y : ys) u += x > y ? 1.0 : (x == y ? 0.5 : 0.0);
  }
  return u;
}

// Two-sided permutation p-value over every split of the pooled values
// into groups of the original sizes.
inline double PermutationP(const std::vector<double>& xs, const std::vector<double>& ys) {
  std::vector<double> pooled = xs;
  pooled.insert(pooled.end(), ys.begin(), ys.end());
  const size_t n = pooled.size();
  const size_t n1 = xs.size();
  const double mean = static_cast<double>(xs.size() * ys.size()) / 2.0;
  const double dev = std::fabs(PairU(xs, ys) - mean);
  double total = 0;
  double extreme = 0;
  for (uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<size_t>(__builtin_popcount(mask)) != n1) continue;
    std::vector<double> a, b;
    for (size_t i = 0; i < n; ++i) ((mask >> i) & 1 ? a : b).push_back(pooled[i]);
    total += 1;
    if (std::fabs(PairU(a, b) - mean) >= dev - 1e-9) extreme += 1;
  }
  return extreme / total;
}

// Reachable micro states counted by hand: before the request is accepted
// any subset of the m+1 registrations may be present; afterwards the task
// prefix (n+1 choices) combines with the terminator's progress (none,
// Terminate sent, Flush delivered).
inline size_t MicroReachable(int m, int n) { return (size_t{1} << (m + 1)) + 3 * (n + 1); }

// Micro (m=1, n=1): 0 = AppMaster, 1 = worker, 2 = terminator. Flush
// reaches the worker before its only task.
inline Schedule MicroBugSchedule() {
  auto b = [](int s, int r) { return BufferId{ProcessId{s}, ProcessId{r}}; };
  Schedule s;
  s.steps = {ScheduleStep::Deliver(b(1, 0), 1), ScheduleStep::Deliver(b(2, 0), 1),
             ScheduleStep::Deliver(b(-1, 0), 1), ScheduleStep::Deliver(b(0, 2), 1),
             ScheduleStep::Deliver(b(2, 1), 1), ScheduleStep::Deliver(b(0, 1), 1)};
  return s;
}

}  // namespace modelfuzz::oracle

#endif  // MODELFUZZ_TESTS_ORACLES_H_
