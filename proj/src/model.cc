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

#include "modelfuzz/model.h"

#include <algorithm>
#include <sstream>
#include <unordered_set>

namespace modelfuzz {

std::string ModelAction::ToString() const {
  std::ostringstream out;
  out << name << "(";
  bool first = true;
  for (const auto& [k, v] : args.items()) {
    if (!first) out << ", ";
    first = false;
    out << k << "=";
    if (const auto* i = std::get_if<int64_t>(&v)) {
      out << *i;
    } else {
      out << '"' << std::get<std::string>(v) << '"';
    }
  }
  out << ")";
  return out.str();
}

StateFingerprint AbstractModel::Fingerprint(const ModelState& q) const {
  thread_local ByteWriter w;
  w.Clear();
  w.Str(name());
  w.U64(q.words.size());
  for (int64_t x : q.words) w.I64(x);
  return w.Digest();
}

RunResult RunActions(const AbstractModel& model, std::span<const ModelAction> actions) {
  RunResult r;
  std::vector<ModelState> frontier = model.Initial();
  std::sort(frontier.begin(), frontier.end());
  frontier.erase(std::unique(frontier.begin(), frontier.end()), frontier.end());

  std::unordered_set<StateFingerprint> seen;
  auto visit = [&](const std::vector<ModelState>& f) {
    for (const ModelState& q : f) seen.insert(model.Fingerprint(q));
    r.max_frontier = std::max(r.max_frontier, f.size());
    if (!f.empty()) r.path.push_back(f.front());
  };
  visit(frontier);

  std::vector<ModelState> next;
  for (size_t i = 0; i < actions.size(); ++i) {
    next.clear();
    for (const ModelState& q : frontier) model.Successors(q, actions[i], next);
    if (next.empty()) {
      r.unmatched.push_back(static_cast<int>(i));
      continue;
    }
    if (next.size() > 1) {
      std::sort(next.begin(), next.end());
      next.erase(std::unique(next.begin(), next.end()), next.end());
    }
    frontier.swap(next);
    visit(frontier);
  }
  r.visited.assign(seen.begin(), seen.end());
  std::sort(r.visited.begin(), r.visited.end());
  return r;
}

BfsResult BfsReachable(const AbstractModel& model, int depth_limit, size_t max_states) {
  BfsResult r;
  std::unordered_set<StateFingerprint> seen;
  std::vector<ModelState> layer;
  for (ModelState& q : model.Initial()) {
    if (seen.insert(model.Fingerprint(q)).second) layer.push_back(std::move(q));
  }
  std::vector<ModelState> succ;
  int depth = 0;
  while (!layer.empty() && (depth_limit < 0 || depth < depth_limit)) {
    std::vector<ModelState> next_layer;
    for (const ModelState& q : layer) {
      for (const ModelAction& a : model.Actions(q)) {
        succ.clear();
        model.Successors(q, a, succ);
        for (ModelState& s : succ) {
          const StateFingerprint f = model.Fingerprint(s);
          if (seen.count(f) == 0) {
            if (seen.size() >= max_states) {
              r.truncated = true;
              r.depth_reached = depth + 1;
              r.states.assign(seen.begin(), seen.end());
              std::sort(r.states.begin(), r.states.end());
              return r;
            }
            seen.insert(f);
            next_layer.push_back(std::move(s));
          }
        }
      }
    }
    layer.swap(next_layer);
    ++depth;
  }
  r.depth_reached = depth;
  r.states.assign(seen.begin(), seen.end());
  std::sort(r.states.begin(), r.states.end());
  return r;
}

}  // namespace modelfuzz
