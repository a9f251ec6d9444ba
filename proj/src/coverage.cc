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

#include "modelfuzz/coverage.h"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

#include "modelfuzz/errors.h"
#include "modelfuzz/mapper.h"

namespace modelfuzz {

std::string_view NotionName(Notion n) {
  switch (n) {
    case Notion::kModel:
      return "model";
    case Notion::kTrace:
      return "trace";
    case Notion::kLine:
      return "line";
    case Notion::kRandom:
      return "random";
  }
  return "?";
}

Notion ParseNotion(std::string_view name) {
  if (name == "model") return Notion::kModel;
  if (name == "trace") return Notion::kTrace;
  if (name == "line") return Notion::kLine;
  if (name == "random") return Notion::kRandom;
  throw ConfigError("unknown notion '" + std::string(name) + "'");
}

std::vector<StateFingerprint> CoveredStates(const AbstractModel& model, const RunResult& run) {
  if (run.max_frontier > 1) return run.visited;
  std::vector<StateFingerprint> out;
  for (const ModelState& q : model.Abstract(run.path)) out.push_back(model.Fingerprint(q));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

CoverageReport Assess(Notion notion, const ExecutionResult& exec, const AbstractModel* model,
                      const RunResult* run) {
  const bool has_run = model != nullptr && run != nullptr;
  if ((notion == Notion::kModel) != has_run) {
    throw ParamError("assess: a model run is required for, and only for, the model notion");
  }
  CoverageReport r;
  r.notion = notion;
  switch (notion) {
    case Notion::kModel:
      for (const StateFingerprint& f : CoveredStates(*model, *run)) {
        r.items.push_back({CoverageTag::kState, f});
      }
      break;
    case Notion::kTrace:
      r.items.push_back({CoverageTag::kTrace, TraceFingerprint(exec.trace)});
      break;
    case Notion::kLine:
      for (uint32_t p : exec.points_hit) r.items.push_back({CoverageTag::kPoint, Digest128{0, p}});
      break;
    case Notion::kRandom:
      break;
  }
  std::sort(r.items.begin(), r.items.end());
  r.items.erase(std::unique(r.items.begin(), r.items.end()), r.items.end());
  return r;
}

// ---------------------------------------------------------------------------

namespace {

bool IsCrashLike(const ConcreteEvent& e) {
  return e.kind == EventKind::kCrash || e.kind == EventKind::kRestart;
}

bool Touches(const ConcreteEvent& e, ProcessId p) {
  return e.recv == p || (e.send.has_value() && *e.send == p);
}

std::vector<size_t> KahnLeast(const ConcreteEventTrace& trace,
                              const std::vector<std::vector<size_t>>& succ) {
  const size_t n = trace.events.size();
  std::vector<std::vector<uint8_t>> keys(n);
  for (size_t i = 0; i < n; ++i) keys[i] = EventKey(trace.events[i]);
  std::vector<size_t> indegree(n, 0);
  for (const auto& out : succ) {
    for (size_t j : out) ++indegree[j];
  }
  auto greater = [&](size_t a, size_t b) {
    if (keys[a] != keys[b]) return keys[a] > keys[b];
    return a > b;
  };
  std::priority_queue<size_t, std::vector<size_t>, decltype(greater)> ready(greater);
  for (size_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.push(i);
  }
  std::vector<size_t> order;
  order.reserve(n);
  while (!ready.empty()) {
    const size_t i = ready.top();
    ready.pop();
    order.push_back(i);
    for (size_t j : succ[i]) {
      if (--indegree[j] == 0) ready.push(j);
    }
  }
  return order;
}

Digest128 HashOrder(const ConcreteEventTrace& trace, const std::vector<size_t>& order) {
  ByteWriter w;
  w.U64(order.size());
  for (size_t i : order) {
    const std::vector<uint8_t> key = EventKey(trace.events[i]);
    w.U64(key.size());
    for (uint8_t b : key) w.U8(b);
  }
  return w.Digest();
}

}  // namespace

bool DefaultDependent(const ConcreteEvent& a, const ConcreteEvent& b) {
  if (a.recv == b.recv) return true;
  if (IsCrashLike(a) && Touches(b, a.recv)) return true;
  if (IsCrashLike(b) && Touches(a, b.recv)) return true;
  return false;
}

std::vector<uint8_t> EventKey(const ConcreteEvent& e) {
  ByteWriter w;
  w.U8(static_cast<uint8_t>(e.kind));
  w.I64(e.recv.value);
  w.I64(e.send.has_value() ? e.send->value : -2);
  w.Str(e.payload.verb);
  for (const auto& [k, v] : e.payload.fields.items()) {
    w.Str(k);
    if (const auto* i = std::get_if<int64_t>(&v)) {
      w.U8(0);
      w.I64(*i);
    } else {
      w.U8(1);
      w.Str(std::get<std::string>(v));
    }
  }
  const auto bytes = w.bytes();
  return {bytes.begin(), bytes.end()};
}

std::vector<size_t> CanonicalLinearization(const ConcreteEventTrace& trace) {
  // Edges generating the same order as DefaultDependent over all pairs:
  // a chain per receiver, plus crash/restart edges for events that touch
  // the process only as sender.
  const size_t n = trace.events.size();
  std::vector<std::vector<size_t>> succ(n);
  std::map<int32_t, size_t> last_at;             // last event with recv == p
  std::map<int32_t, size_t> last_crash;          // last crash/restart of p
  std::map<int32_t, std::vector<size_t>> sent;   // sender-side touches since last crash of p
  for (size_t i = 0; i < n; ++i) {
    const ConcreteEvent& e = trace.events[i];
    const int32_t r = e.recv.value;
    if (auto it = last_at.find(r); it != last_at.end()) succ[it->second].push_back(i);
    last_at[r] = i;
    if (IsCrashLike(e)) {
      for (size_t j : sent[r]) succ[j].push_back(i);
      sent[r].clear();
      last_crash[r] = i;
    }
    if (e.send.has_value() && *e.send != e.recv) {
      const int32_t s = e.send->value;
      if (auto it = last_crash.find(s); it != last_crash.end()) succ[it->second].push_back(i);
      sent[s].push_back(i);
    }
  }
  return KahnLeast(trace, succ);
}

std::vector<size_t> CanonicalLinearization(const ConcreteEventTrace& trace,
                                           const DependenceRelation& dependent) {
  const size_t n = trace.events.size();
  std::vector<std::vector<size_t>> succ(n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      if (dependent(trace.events[i], trace.events[j])) succ[i].push_back(j);
    }
  }
  return KahnLeast(trace, succ);
}

Digest128 TraceFingerprint(const ConcreteEventTrace& trace) {
  return HashOrder(trace, CanonicalLinearization(trace));
}

Digest128 TraceFingerprint(const ConcreteEventTrace& trace, const DependenceRelation& dependent) {
  return HashOrder(trace, CanonicalLinearization(trace, dependent));
}

// ---------------------------------------------------------------------------

namespace {

struct Enumerator {
  BenchmarkKind kind;
  const AbstractModel& model;
  const EnumerationOptions& opts;
  EnumerationResult& result;
  std::set<Digest128> classes;

  void Leaf(const Harness& h) {
    if (result.orderings >= opts.max_orderings) {
      result.truncated = true;
      return;
    }
    ++result.orderings;
    ExecutionResult exec = h.Finish();
    EnumeratedOrdering run;
    run.trace_id = TraceFingerprint(exec.trace);
    classes.insert(run.trace_id);
    const std::vector<ModelAction> actions = MapEvents(kind, exec.trace);
    run.states = CoveredStates(model, RunActions(model, actions));
    for (const Violation& v : exec.violations) run.violations.push_back(v.Key());
    std::sort(run.violations.begin(), run.violations.end());
    run.violations.erase(std::unique(run.violations.begin(), run.violations.end()),
                         run.violations.end());
    if (opts.keep_traces) run.trace = std::move(exec.trace);
    result.runs.push_back(std::move(run));
  }

  void Dfs(const Harness& h, int depth) {
    if (result.truncated) return;
    std::vector<BufferId> enabled;
    if (depth < opts.max_depth) {
      for (const BufferId& b : h.NonEmptyBuffers()) {
        if (h.state().alive[static_cast<size_t>(b.receiver.value)]) enabled.push_back(b);
      }
    }
    if (enabled.empty()) {
      Leaf(h);
      return;
    }
    for (const BufferId& b : enabled) {
      Harness child = h;
      child.Apply(ScheduleStep::Deliver(b, 1), depth);
      Dfs(child, depth + 1);
      if (result.truncated) return;
    }
  }
};

}  // namespace

EnumerationResult EnumerateOrderings(const SystemUnderTest& sut, BenchmarkKind kind,
                                     const AbstractModel& model, const EnumerationOptions& opts) {
  if (opts.max_depth < 0) throw ParamError("enumerate: negative depth");
  EnumerationResult result;
  Enumerator e{kind, model, opts, result, {}};
  Harness root(sut.Clone());
  e.Dfs(root, 0);
  result.trace_classes = e.classes.size();
  return result;
}

std::optional<std::pair<size_t, size_t>> CoveringPair(const EnumerationResult& r,
                                                      const std::vector<StateFingerprint>& target) {
  std::vector<StateFingerprint> want = target;
  std::sort(want.begin(), want.end());
  // Distinct state sets, remembering one ordering index for each.
  std::map<std::vector<StateFingerprint>, size_t> distinct;
  for (size_t i = 0; i < r.runs.size(); ++i) distinct.emplace(r.runs[i].states, i);
  std::vector<std::pair<const std::vector<StateFingerprint>*, size_t>> sets;
  for (const auto& [s, i] : distinct) sets.emplace_back(&s, i);
  std::vector<StateFingerprint> united;
  for (size_t a = 0; a < sets.size(); ++a) {
    for (size_t b = a; b < sets.size(); ++b) {
      united.clear();
      std::set_union(sets[a].first->begin(), sets[a].first->end(), sets[b].first->begin(),
                     sets[b].first->end(), std::back_inserter(united));
      if (united == want) return std::make_pair(sets[a].second, sets[b].second);
    }
  }
  return std::nullopt;
}

}  // namespace modelfuzz
