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

#ifndef MODELFUZZ_HARNESS_H_
#define MODELFUZZ_HARNESS_H_

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "modelfuzz/schedule.h"

namespace modelfuzz {

enum class ViolationKind : uint8_t { kAssertionFailure, kHandlerPanic, kSafetyProperty };

std::string_view ViolationKindName(ViolationKind k);

struct Violation {
  ViolationKind kind = ViolationKind::kAssertionFailure;
  std::string description;
  int step = -1;

  // Deduplication key: kind and description, never the step.
  std::string Key() const;

  friend bool operator==(const Violation&, const Violation&) = default;
};

class Harness;

// The only channel through which benchmark code talks to the scheduler.
class SutContext {
 public:
  explicit SutContext(Harness& harness) : harness_(harness) {}

  // Enqueues `msg` at the tail of the (from, to) buffer. Messages toward a
  // crashed process are dropped.
  void Send(ProcessId from, ProcessId to, Message msg);
  // Records an implementation-internal event (e.g. a leader transition).
  void Internal(ProcessId at, Message marker);
  // Structural coverage point.
  void Hit(uint32_t point);
  void Violate(ViolationKind kind, std::string description);
  uint64_t seed() const;
  int step() const;

 private:
  Harness& harness_;
};

// Contract for a deterministic protocol implementation driven by the
// controlled scheduler. Handlers must not consult clocks or ambient
// randomness; everything nondeterministic comes from the schedule.
class SystemUnderTest {
 public:
  virtual ~SystemUnderTest() = default;

  virtual std::string_view name() const = 0;
  virtual int process_count() const = 0;
  // Channels a schedule may refer to (used for generation and enumeration).
  virtual std::vector<BufferId> Channels() const = 0;
  virtual bool supports_crashes() const = 0;

  // Resets all local state and emits the initial in-flight messages.
  virtual void Init(SutContext& ctx) = 0;
  virtual void Handle(ProcessId to, ProcessId from, const Message& msg, SutContext& ctx) = 0;
  // Drops the volatile part of `p`'s state.
  virtual void OnCrash(ProcessId p, SutContext& ctx) = 0;
  // Rebuilds `p` from its persistent part; may emit recovery messages.
  virtual void OnRestart(ProcessId p, SutContext& ctx) = 0;

  virtual nlohmann::json Snapshot() const = 0;
  virtual std::unique_ptr<SystemUnderTest> Clone() const = 0;
};

struct Envelope {
  Message msg;
  uint64_t seq = 0;
};

struct HarnessState {
  std::map<BufferId, std::deque<Envelope>> buffers;
  std::vector<bool> alive;
  ConcreteEventTrace trace;
  std::vector<uint64_t> message_seq;  // aligned with trace.events; 0 if not a delivery
  std::vector<uint32_t> points_hit;   // unsorted, may repeat until Finish()
  std::vector<Violation> violations;
  uint64_t next_seq = 1;
};

struct ExecutionResult {
  ConcreteEventTrace trace;
  std::vector<uint64_t> message_seq;
  std::vector<uint32_t> points_hit;  // sorted, unique
  std::vector<Violation> violations;
  nlohmann::json final_states;
};

// The controlled scheduler. Owns one system instance; copyable (deep) so
// exhaustive enumeration can branch.
class Harness {
 public:
  explicit Harness(std::unique_ptr<SystemUnderTest> sut);
  Harness(const Harness& other);
  Harness& operator=(const Harness& other);
  Harness(Harness&&) noexcept = default;
  Harness& operator=(Harness&&) noexcept = default;

  // Back to the freshly initialized system.
  const HarnessState& Reset();
  ExecutionResult Execute(const Schedule& s);

  // Applies one step at schedule position `index`.
  void Apply(const ScheduleStep& step, int index);

  ExecutionResult Finish() const;

  const HarnessState& state() const { return state_; }
  const SystemUnderTest& sut() const { return *sut_; }
  std::vector<BufferId> NonEmptyBuffers() const;

 private:
  friend class SutContext;

  void Deliver(BufferId b, int count, int index);
  void Crash(ProcessId p, int index, bool emit_event);
  void Restart(ProcessId p, int index);
  bool IsAlive(ProcessId p) const;

  std::unique_ptr<SystemUnderTest> sut_;
  HarnessState state_;
  uint64_t seed_ = 0;
  int current_step_ = -1;
};

// JSON export of an execution (events use the mapper's standard encoding).
nlohmann::ordered_json ExecutionResultToJson(const ExecutionResult& r);

}  // namespace modelfuzz

#endif  // MODELFUZZ_HARNESS_H_
