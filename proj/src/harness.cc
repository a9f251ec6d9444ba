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

#include "modelfuzz/harness.h"

#include <algorithm>

#include "modelfuzz/errors.h"
#include "modelfuzz/mapper.h"

namespace modelfuzz {

std::string_view ViolationKindName(ViolationKind k) {
  switch (k) {
    case ViolationKind::kAssertionFailure:
      return "AssertionFailure";
    case ViolationKind::kHandlerPanic:
      return "HandlerPanic";
    case ViolationKind::kSafetyProperty:
      return "SafetyProperty";
  }
  return "?";
}

std::string Violation::Key() const {
  return std::string(ViolationKindName(kind)) + ":" + description;
}

// ---------------------------------------------------------------------------

void SutContext::Send(ProcessId from, ProcessId to, Message msg) {
  HarnessState& st = harness_.state_;
  if (!harness_.IsAlive(to)) return;
  st.buffers[{from, to}].push_back(Envelope{std::move(msg), st.next_seq++});
}

void SutContext::Internal(ProcessId at, Message marker) {
  HarnessState& st = harness_.state_;
  ConcreteEvent e;
  e.kind = EventKind::kInternal;
  e.recv = at;
  e.payload = std::move(marker);
  e.step = harness_.current_step_;
  st.trace.events.push_back(std::move(e));
  st.message_seq.push_back(0);
}

void SutContext::Hit(uint32_t point) { harness_.state_.points_hit.push_back(point); }

void SutContext::Violate(ViolationKind kind, std::string description) {
  harness_.state_.violations.push_back(
      Violation{kind, std::move(description), harness_.current_step_});
}

uint64_t SutContext::seed() const { return harness_.seed_; }

int SutContext::step() const { return harness_.current_step_; }

// ---------------------------------------------------------------------------

Harness::Harness(std::unique_ptr<SystemUnderTest> sut) : sut_(std::move(sut)) { Reset(); }

Harness::Harness(const Harness& other)
    : sut_(other.sut_->Clone()),
      state_(other.state_),
      seed_(other.seed_),
      current_step_(other.current_step_) {}

Harness& Harness::operator=(const Harness& other) {
  if (this != &other) {
    sut_ = other.sut_->Clone();
    state_ = other.state_;
    seed_ = other.seed_;
    current_step_ = other.current_step_;
  }
  return *this;
}

const HarnessState& Harness::Reset() {
  state_ = HarnessState{};
  state_.alive.assign(static_cast<size_t>(sut_->process_count()), true);
  current_step_ = -1;
  SutContext ctx(*this);
  sut_->Init(ctx);
  return state_;
}

bool Harness::IsAlive(ProcessId p) const {
  if (p.is_environment()) return true;
  const auto i = static_cast<size_t>(p.value);
  return i < state_.alive.size() && state_.alive[i];
}

std::vector<BufferId> Harness::NonEmptyBuffers() const {
  std::vector<BufferId> out;
  for (const auto& [b, q] : state_.buffers) {
    if (!q.empty()) out.push_back(b);
  }
  return out;
}

ExecutionResult Harness::Execute(const Schedule& s) {
  Reset();
  seed_ = s.seed;
  for (size_t i = 0; i < s.steps.size(); ++i) Apply(s.steps[i], static_cast<int>(i));
  return Finish();
}

void Harness::Apply(const ScheduleStep& step, int index) {
  current_step_ = index;
  const ProcessId p = step.target();
  const bool real_process = !p.is_environment() && p.value < sut_->process_count();
  if (!real_process) {
    state_.trace.skipped.push_back(index);
    return;
  }
  switch (step.action) {
    case StepAction::kDeliver:
      Deliver(step.buffer, step.count, index);
      break;
    case StepAction::kCrash:
      if (sut_->supports_crashes() && IsAlive(p)) {
        Crash(p, index, /*emit_event=*/true);
      } else {
        state_.trace.skipped.push_back(index);
      }
      break;
    case StepAction::kRestart:
      if (sut_->supports_crashes() && !IsAlive(p)) {
        Restart(p, index);
      } else {
        state_.trace.skipped.push_back(index);
      }
      break;
  }
}

void Harness::Deliver(BufferId b, int count, int index) {
  auto it = state_.buffers.find(b);
  const size_t available = it == state_.buffers.end() ? 0 : it->second.size();
  const size_t n = std::min(static_cast<size_t>(std::max(count, 0)), available);
  if (n == 0 || !IsAlive(b.receiver)) {
    state_.trace.skipped.push_back(index);
    return;
  }
  SutContext ctx(*this);
  for (size_t k = 0; k < n; ++k) {
    if (!IsAlive(b.receiver)) break;
    // Handlers may insert into the map; re-find every time.
    auto& queue = state_.buffers[b];
    if (queue.empty()) break;
    Envelope env = std::move(queue.front());
    queue.pop_front();

    ConcreteEvent e;
    e.kind = EventKind::kMessageDeliver;
    e.recv = b.receiver;
    e.send = b.sender;
    e.payload = env.msg;
    e.step = index;
    state_.trace.events.push_back(std::move(e));
    state_.message_seq.push_back(env.seq);
    try {
      sut_->Handle(b.receiver, b.sender, env.msg, ctx);
    } catch (const HandlerFault& fault) {
      ctx.Violate(ViolationKind::kHandlerPanic, fault.what());
      Crash(b.receiver, index, /*emit_event=*/sut_->supports_crashes());
    }
  }
}

void Harness::Crash(ProcessId p, int index, bool emit_event) {
  state_.alive[static_cast<size_t>(p.value)] = false;
  for (auto& [b, q] : state_.buffers) {
    if (b.receiver == p) q.clear();
  }
  if (emit_event) {
    ConcreteEvent e;
    e.kind = EventKind::kCrash;
    e.recv = p;
    e.step = index;
    state_.trace.events.push_back(std::move(e));
    state_.message_seq.push_back(0);
  }
  SutContext ctx(*this);
  sut_->OnCrash(p, ctx);
}

void Harness::Restart(ProcessId p, int index) {
  state_.alive[static_cast<size_t>(p.value)] = true;
  ConcreteEvent e;
  e.kind = EventKind::kRestart;
  e.recv = p;
  e.step = index;
  state_.trace.events.push_back(std::move(e));
  state_.message_seq.push_back(0);
  SutContext ctx(*this);
  sut_->OnRestart(p, ctx);
}

ExecutionResult Harness::Finish() const {
  ExecutionResult r;
  r.trace = state_.trace;
  r.message_seq = state_.message_seq;
  r.points_hit = state_.points_hit;
  std::sort(r.points_hit.begin(), r.points_hit.end());
  r.points_hit.erase(std::unique(r.points_hit.begin(), r.points_hit.end()), r.points_hit.end());
  r.violations = state_.violations;
  r.final_states = sut_->Snapshot();
  return r;
}

nlohmann::ordered_json ExecutionResultToJson(const ExecutionResult& r) {
  nlohmann::ordered_json doc;
  doc["events"] = nlohmann::ordered_json::array();
  for (const ConcreteEvent& e : r.trace.events) doc["events"].push_back(EncodeEvent(e));
  doc["skipped"] = r.trace.skipped;
  doc["violations"] = nlohmann::ordered_json::array();
  for (const Violation& v : r.violations) {
    nlohmann::ordered_json j;
    j["kind"] = ViolationKindName(v.kind);
    j["description"] = v.description;
    j["step"] = v.step;
    doc["violations"].push_back(std::move(j));
  }
  doc["points"] = r.points_hit;
  return doc;
}

}  // namespace modelfuzz
