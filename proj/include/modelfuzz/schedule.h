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

#ifndef MODELFUZZ_SCHEDULE_H_
#define MODELFUZZ_SCHEDULE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "modelfuzz/rng.h"

namespace modelfuzz {

// Identifies a process of the system under test. The environment (clients
// injecting requests) is a pseudo-endpoint that only ever sends.
struct ProcessId {
  int32_t value = 0;

  static constexpr ProcessId Environment() { return ProcessId{-1}; }
  constexpr bool is_environment() const { return value < 0; }

  friend constexpr bool operator==(ProcessId, ProcessId) = default;
  friend constexpr auto operator<=>(ProcessId, ProcessId) = default;
};

// One FIFO channel: messages from `sender` to `receiver`.
struct BufferId {
  ProcessId sender;
  ProcessId receiver;

  friend constexpr bool operator==(const BufferId&, const BufferId&) = default;
  friend constexpr auto operator<=>(const BufferId&, const BufferId&) = default;
};

enum class StepAction : uint8_t { kDeliver, kCrash, kRestart };

std::string_view StepActionName(StepAction a);

struct ScheduleStep {
  BufferId buffer;
  StepAction action = StepAction::kDeliver;
  int count = 1;  // only meaningful for kDeliver

  static ScheduleStep Deliver(BufferId b, int n) { return {b, StepAction::kDeliver, n}; }
  static ScheduleStep Crash(BufferId b) { return {b, StepAction::kCrash, 0}; }
  static ScheduleStep Restart(BufferId b) { return {b, StepAction::kRestart, 0}; }

  ProcessId target() const { return buffer.receiver; }

  friend bool operator==(const ScheduleStep&, const ScheduleStep&) = default;
};

struct Schedule {
  std::vector<ScheduleStep> steps;
  uint64_t seed = 0;

  size_t CrashCount() const;

  friend bool operator==(const Schedule&, const Schedule&) = default;
};

// Structural limits every schedule of a campaign must respect.
struct ScheduleLimits {
  int max_steps = 100;
  int max_messages_per_step = 5;
  int crash_quota = 0;
};

// Returns a description of the first violated invariant, or nullopt.
std::optional<std::string> ValidateSchedule(const Schedule& s, const ScheduleLimits& limits);

// ---------------------------------------------------------------------------
// Message payloads and concrete events.

using FieldValue = std::variant<int64_t, std::string>;

// Small key-sorted map; sorted order makes encodings canonical.
class Fields {
 public:
  Fields() = default;
  Fields(std::initializer_list<std::pair<std::string, FieldValue>> init);

  void Set(std::string key, FieldValue value);
  const FieldValue* Find(std::string_view key) const;
  int64_t Int(std::string_view key) const;
  const std::string& Str(std::string_view key) const;
  bool empty() const { return items_.empty(); }

  const std::vector<std::pair<std::string, FieldValue>>& items() const { return items_; }

  friend bool operator==(const Fields&, const Fields&) = default;

 private:
  std::vector<std::pair<std::string, FieldValue>> items_;
};

struct Message {
  std::string verb;
  Fields fields;

  friend bool operator==(const Message&, const Message&) = default;
};

enum class EventKind : uint8_t { kMessageDeliver, kCrash, kRestart, kInternal };

struct ConcreteEvent {
  EventKind kind = EventKind::kMessageDeliver;
  ProcessId recv;
  std::optional<ProcessId> send;  // only for kMessageDeliver
  Message payload;                // empty verb for crash/restart
  int step = -1;                  // -1: system initialization

  friend bool operator==(const ConcreteEvent&, const ConcreteEvent&) = default;
};

struct ConcreteEventTrace {
  std::vector<ConcreteEvent> events;
  std::vector<int> skipped;

  friend bool operator==(const ConcreteEventTrace&, const ConcreteEventTrace&) = default;
};

// ---------------------------------------------------------------------------
// Random generation.

struct GenParams {
  int num_processes = 2;
  int max_steps = 100;
  int max_messages_per_step = 5;
  int crash_quota = 0;
  // Schedulable channels. Empty means every ordered pair of distinct
  // processes; benchmarks pass their own universe (client and timer
  // pseudo-channels included).
  std::vector<BufferId> channels;

  ScheduleLimits limits() const { return {max_steps, max_messages_per_step, crash_quota}; }
  std::vector<BufferId> ChannelUniverse() const;
};

Schedule GenerateRandomSchedule(const GenParams& params, Rng& rng);

// ---------------------------------------------------------------------------
// Corpus file format.

std::string SerializeSchedule(const Schedule& s);
Schedule ParseSchedule(std::string_view text);

}  // namespace modelfuzz

#endif  // MODELFUZZ_SCHEDULE_H_
