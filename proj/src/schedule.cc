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

#include "modelfuzz/schedule.h"

#include <algorithm>
#include <map>

#include "json.hpp"
#include "modelfuzz/errors.h"

namespace modelfuzz {

std::string_view StepActionName(StepAction a) {
  switch (a) {
    case StepAction::kDeliver:
      return "deliver";
    case StepAction::kCrash:
      return "crash";
    case StepAction::kRestart:
      return "restart";
  }
  return "?";
}

size_t Schedule::CrashCount() const {
  return static_cast<size_t>(std::count_if(steps.begin(), steps.end(), [](const ScheduleStep& s) {
    return s.action == StepAction::kCrash;
  }));
}

std::optional<std::string> ValidateSchedule(const Schedule& s, const ScheduleLimits& limits) {
  if (static_cast<int>(s.steps.size()) > limits.max_steps) {
    return "schedule has " + std::to_string(s.steps.size()) + " steps, limit is " +
           std::to_string(limits.max_steps);
  }
  if (static_cast<int>(s.CrashCount()) > limits.crash_quota) {
    return "crash quota exceeded";
  }
  // Per process, crash and restart steps must alternate.
  std::map<int32_t, StepAction> last;
  for (size_t i = 0; i < s.steps.size(); ++i) {
    const ScheduleStep& step = s.steps[i];
    if (step.buffer.receiver.is_environment()) {
      return "step " + std::to_string(i) + ": receiver is the environment";
    }
    switch (step.action) {
      case StepAction::kDeliver:
        if (step.count < 1 || step.count > limits.max_messages_per_step) {
          return "step " + std::to_string(i) + ": deliver count out of range";
        }
        break;
      case StepAction::kCrash:
      case StepAction::kRestart: {
        auto [it, inserted] = last.try_emplace(step.target().value, step.action);
        if (!inserted) {
          if (it->second == step.action) {
            return "step " + std::to_string(i) + ": crash/restart do not alternate for process " +
                   std::to_string(step.target().value);
          }
          it->second = step.action;
        }
        break;
      }
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

Fields::Fields(std::initializer_list<std::pair<std::string, FieldValue>> init) {
  for (const auto& [k, v] : init) Set(k, v);
}

void Fields::Set(std::string key, FieldValue value) {
  auto it = std::lower_bound(items_.begin(), items_.end(), key,
                             [](const auto& item, const std::string& k) { return item.first < k; });
  if (it != items_.end() && it->first == key) {
    it->second = std::move(value);
  } else {
    items_.emplace(it, std::move(key), std::move(value));
  }
}

const FieldValue* Fields::Find(std::string_view key) const {
  auto it = std::lower_bound(items_.begin(), items_.end(), key,
                             [](const auto& item, std::string_view k) { return item.first < k; });
  if (it == items_.end() || it->first != key) return nullptr;
  return &it->second;
}

int64_t Fields::Int(std::string_view key) const {
  const FieldValue* v = Find(key);
  if (v == nullptr || !std::holds_alternative<int64_t>(*v)) {
    throw MappingError("missing integer field '" + std::string(key) + "'");
  }
  return std::get<int64_t>(*v);
}

const std::string& Fields::Str(std::string_view key) const {
  const FieldValue* v = Find(key);
  if (v == nullptr || !std::holds_alternative<std::string>(*v)) {
    throw MappingError("missing string field '" + std::string(key) + "'");
  }
  return std::get<std::string>(*v);
}

// ---------------------------------------------------------------------------

std::vector<BufferId> GenParams::ChannelUniverse() const {
  if (!channels.empty()) return channels;
  std::vector<BufferId> out;
  for (int s = 0; s < num_processes; ++s) {
    for (int r = 0; r < num_processes; ++r) {
      if (s != r) out.push_back({ProcessId{s}, ProcessId{r}});
    }
  }
  return out;
}

Schedule GenerateRandomSchedule(const GenParams& params, Rng& rng) {
  if (params.num_processes < 2) throw ParamError("generate: need at least 2 processes");
  if (params.max_steps < 1) throw ParamError("generate: max_steps must be >= 1");
  if (params.max_messages_per_step < 1) throw ParamError("generate: max_messages_per_step must be >= 1");
  if (params.crash_quota < 0) throw ParamError("generate: negative crash quota");
  const std::vector<BufferId> universe = params.ChannelUniverse();
  if (universe.empty()) throw ParamError("generate: empty channel universe");

  const int n = params.max_steps;
  std::vector<std::optional<ScheduleStep>> slots(static_cast<size_t>(n));
  // Position of the pending restart of a crashed process (n = never).
  std::map<int32_t, int> down_until;
  int crashes = 0;

  Schedule s;
  s.seed = rng.Next();
  for (int i = 0; i < n; ++i) {
    if (slots[i].has_value()) continue;
    const BufferId b = universe[rng.Uniform(universe.size())];
    if (crashes < params.crash_quota &&
        rng.Chance(static_cast<uint64_t>(params.crash_quota), static_cast<uint64_t>(n))) {
      const int32_t p = b.receiver.value;
      auto it = down_until.find(p);
      const bool down = it != down_until.end() && it->second > i;
      if (!down) {
        slots[i] = ScheduleStep::Crash(b);
        ++crashes;
        std::vector<int> free_later;
        for (int j = i + 1; j < n; ++j) {
          if (!slots[j].has_value()) free_later.push_back(j);
        }
        if (free_later.empty()) {
          down_until[p] = n;
        } else {
          const int j = free_later[rng.Uniform(free_later.size())];
          std::vector<BufferId> into;
          for (const BufferId& c : universe) {
            if (c.receiver.value == p) into.push_back(c);
          }
          slots[j] = ScheduleStep::Restart(into[rng.Uniform(into.size())]);
          down_until[p] = j;
        }
        continue;
      }
    }
    const int k = static_cast<int>(rng.Range(1, params.max_messages_per_step));
    slots[i] = ScheduleStep::Deliver(b, k);
  }
  s.steps.reserve(slots.size());
  for (auto& slot : slots) s.steps.push_back(*slot);
  return s;
}

// ---------------------------------------------------------------------------

std::string SerializeSchedule(const Schedule& s) {
  nlohmann::ordered_json steps = nlohmann::ordered_json::array();
  for (const ScheduleStep& step : s.steps) {
    nlohmann::ordered_json j;
    j["from"] = step.buffer.sender.value;
    j["to"] = step.buffer.receiver.value;
    j["op"] = StepActionName(step.action);
    if (step.action == StepAction::kDeliver) j["n"] = step.count;
    steps.push_back(std::move(j));
  }
  nlohmann::ordered_json doc;
  doc["seed"] = s.seed;
  doc["steps"] = std::move(steps);
  return doc.dump();
}

Schedule ParseSchedule(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("schedule: malformed JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("steps") || !doc["steps"].is_array()) {
    throw ParseError("schedule: expected object with a \"steps\" array");
  }
  Schedule s;
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned() && !doc["seed"].is_number_integer()) {
      throw ParseError("schedule: \"seed\" must be an integer");
    }
    s.seed = doc["seed"].get<uint64_t>();
  }
  const auto& steps = doc["steps"];
  for (size_t i = 0; i < steps.size(); ++i) {
    const auto& j = steps[i];
    auto fail = [i](const std::string& what) {
      return ParseError("schedule: step " + std::to_string(i) + ": " + what);
    };
    if (!j.is_object()) throw fail("not an object");
    for (const char* key : {"from", "to", "op"}) {
      if (!j.contains(key)) throw fail(std::string("missing \"") + key + "\"");
    }
    if (!j["from"].is_number_integer() || !j["to"].is_number_integer()) {
      throw fail("\"from\"/\"to\" must be integers");
    }
    if (!j["op"].is_string()) throw fail("\"op\" must be a string");
    ScheduleStep step;
    step.buffer = {ProcessId{j["from"].get<int32_t>()}, ProcessId{j["to"].get<int32_t>()}};
    const std::string op = j["op"].get<std::string>();
    if (op == "deliver") {
      if (!j.contains("n") || !j["n"].is_number_integer()) throw fail("deliver needs integer \"n\"");
      step.action = StepAction::kDeliver;
      step.count = j["n"].get<int>();
      if (step.count < 1) throw fail("deliver count must be positive");
    } else if (op == "crash") {
      step = ScheduleStep::Crash(step.buffer);
    } else if (op == "restart") {
      step = ScheduleStep::Restart(step.buffer);
    } else {
      throw fail("unknown op \"" + op + "\"");
    }
    s.steps.push_back(step);
  }
  return s;
}

}  // namespace modelfuzz
