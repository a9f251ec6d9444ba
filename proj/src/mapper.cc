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

#include "modelfuzz/mapper.h"

#include "modelfuzz/errors.h"

namespace modelfuzz {
namespace {

ModelAction Act(std::string name, Fields args) { return {std::move(name), std::move(args)}; }

[[noreturn]] void Unmappable(BenchmarkKind kind, const ConcreteEvent& e) {
  throw MappingError(std::string(BenchmarkName(kind)) + " mapper: no rule for verb '" +
                     e.payload.verb + "'");
}

std::optional<ModelAction> MapMicro(const ConcreteEvent& e) {
  const Fields& f = e.payload.fields;
  const std::string& verb = e.payload.verb;
  if (verb == "Register") return Act("Register", {{"p", f.Int("who")}});
  if (verb == "Request") return Act("Request", {{"r", f.Int("req")}});
  if (verb == "Execute") return Act("Execute", {{"r", f.Int("req")}, {"task", f.Int("task")}});
  if (verb == "Next") return Act("Forward", {{"r", f.Int("req")}, {"task", f.Int("task")}});
  if (verb == "Terminate") return Act("Terminate", {{"w", f.Int("worker")}});
  if (verb == "Flush") return Act("Flush", {{"w", int64_t{e.recv.value}}});
  Unmappable(BenchmarkKind::kMicro, e);
}

std::optional<ModelAction> MapTpc(const ConcreteEvent& e) {
  const Fields& f = e.payload.fields;
  const std::string& verb = e.payload.verb;
  const int64_t to = e.recv.value;
  if (verb == "Request") return Act("TMRcvRequest", {{"tx", f.Int("tx")}});
  if (verb == "Prepare") return Act("RMRcvPrepare", {{"rm", to}, {"tx", f.Int("tx")}});
  if (verb == "Vote") {
    return Act("TMRcvVote",
               {{"rm", int64_t{e.send->value}}, {"tx", f.Int("tx")}, {"yes", f.Int("yes")}});
  }
  if (verb == "Commit") return Act("RMRcvCommit", {{"rm", to}, {"tx", f.Int("tx")}});
  if (verb == "Abort") return Act("RMRcvAbort", {{"rm", to}, {"tx", f.Int("tx")}});
  Unmappable(BenchmarkKind::kTpc, e);
}

std::optional<ModelAction> MapRaftDelivery(const ConcreteEvent& e) {
  const Fields& f = e.payload.fields;
  const std::string& verb = e.payload.verb;
  const int64_t p = e.recv.value;
  const int64_t from = e.send->value;
  if (verb == "Timeout") return Act("Timeout", {{"p", p}});
  if (verb == "ClientRequest") return Act("ClientRequest", {{"p", p}});
  if (verb == "RequestVote") {
    return Act("HandleRequestVoteRequest", {{"from", from}, {"p", p}, {"term", f.Int("term")}});
  }
  if (verb == "RequestVoteResponse") {
    return Act("HandleRequestVoteResponse",
               {{"from", from}, {"granted", f.Int("granted")}, {"p", p}, {"term", f.Int("term")}});
  }
  if (verb == "AppendEntries") {
    return Act("HandleAppendEntriesRequest", {{"commit", f.Int("commit")},
                                              {"entries", f.Str("entries")},
                                              {"from", from},
                                              {"p", p},
                                              {"prevIndex", f.Int("prevIndex")},
                                              {"prevTerm", f.Int("prevTerm")},
                                              {"term", f.Int("term")}});
  }
  if (verb == "AppendEntriesResponse") {
    if (f.Int("n") == 0) {
      return Act("HandleNilAppendEntriesResponse",
                 {{"from", from}, {"p", p}, {"success", f.Int("success")}, {"term", f.Int("term")}});
    }
    return Act("HandleAppendEntriesResponse", {{"from", from},
                                               {"match", f.Int("match")},
                                               {"p", p},
                                               {"success", f.Int("success")},
                                               {"term", f.Int("term")}});
  }
  Unmappable(BenchmarkKind::kRaftLite, e);
}

std::optional<ModelAction> MapRaftInternal(const ConcreteEvent& e) {
  const std::string& verb = e.payload.verb;
  const int64_t p = e.recv.value;
  if (verb == "AddProcess") return Act("AddProcess", {{"p", p}});
  if (verb == "ElectLeader") return Act("ElectLeader", {{"p", p}, {"term", e.payload.fields.Int("term")}});
  if (verb == "UpdateSnapshotIndex") {
    return Act("UpdateSnapshotIndex", {{"index", e.payload.fields.Int("index")}, {"p", p}});
  }
  Unmappable(BenchmarkKind::kRaftLite, e);
}

const char* KindName(EventKind k) {
  switch (k) {
    case EventKind::kMessageDeliver:
      return "deliver";
    case EventKind::kCrash:
      return "crash";
    case EventKind::kRestart:
      return "restart";
    case EventKind::kInternal:
      return "internal";
  }
  return "?";
}

[[noreturn]] void SchemaError(const std::string& path, const std::string& what) {
  throw ParseError("event JSON at " + (path.empty() ? std::string("/") : path) + ": " + what);
}

int32_t GetInt(const nlohmann::json& j, const char* key, const std::string& path) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_number_integer()) SchemaError(path + "/" + key, "expected integer");
  return it->get<int32_t>();
}

}  // namespace

std::optional<ModelAction> MapEvent(BenchmarkKind kind, const ConcreteEvent& e) {
  switch (e.kind) {
    case EventKind::kCrash:
      return Act("Crash", {{"p", int64_t{e.recv.value}}});
    case EventKind::kRestart:
      return Act("Restart", {{"p", int64_t{e.recv.value}}});
    case EventKind::kInternal:
      if (kind == BenchmarkKind::kRaftLite) return MapRaftInternal(e);
      return std::nullopt;
    case EventKind::kMessageDeliver:
      if (!e.send.has_value()) throw MappingError("delivery event without a sender");
      break;
  }
  switch (kind) {
    case BenchmarkKind::kMicro:
      return MapMicro(e);
    case BenchmarkKind::kTpc:
      return MapTpc(e);
    case BenchmarkKind::kRaftLite:
      return MapRaftDelivery(e);
  }
  Unmappable(kind, e);
}

std::vector<ModelAction> MapEvents(BenchmarkKind kind, const ConcreteEventTrace& trace) {
  std::vector<ModelAction> out;
  out.reserve(trace.events.size());
  for (const ConcreteEvent& e : trace.events) {
    if (auto a = MapEvent(kind, e)) out.push_back(std::move(*a));
  }
  return out;
}

nlohmann::ordered_json EncodeEvent(const ConcreteEvent& e) {
  nlohmann::ordered_json j;
  j["kind"] = KindName(e.kind);
  if (e.kind == EventKind::kCrash || e.kind == EventKind::kRestart) {
    j["proc"] = e.recv.value;
    j["step"] = e.step;
    return j;
  }
  if (e.kind == EventKind::kMessageDeliver) j["from"] = e.send ? e.send->value : -1;
  j["to"] = e.recv.value;
  j["verb"] = e.payload.verb;
  nlohmann::ordered_json fields = nlohmann::ordered_json::object();
  for (const auto& [k, v] : e.payload.fields.items()) {
    if (const auto* i = std::get_if<int64_t>(&v)) {
      fields[k] = *i;
    } else {
      fields[k] = std::get<std::string>(v);
    }
  }
  j["fields"] = std::move(fields);
  j["step"] = e.step;
  return j;
}

ConcreteEvent DecodeEvent(const nlohmann::json& j, const std::string& path) {
  if (!j.is_object()) SchemaError(path, "expected object");
  auto kind_it = j.find("kind");
  if (kind_it == j.end() || !kind_it->is_string()) SchemaError(path + "/kind", "expected string");
  const std::string kind = kind_it->get<std::string>();
  ConcreteEvent e;
  e.step = GetInt(j, "step", path);
  if (kind == "crash" || kind == "restart") {
    e.kind = kind == "crash" ? EventKind::kCrash : EventKind::kRestart;
    e.recv = ProcessId{GetInt(j, "proc", path)};
    return e;
  }
  if (kind == "deliver") {
    e.kind = EventKind::kMessageDeliver;
    e.send = ProcessId{GetInt(j, "from", path)};
  } else if (kind == "internal") {
    e.kind = EventKind::kInternal;
  } else {
    SchemaError(path + "/kind", "unknown kind '" + kind + "'");
  }
  e.recv = ProcessId{GetInt(j, "to", path)};
  auto verb = j.find("verb");
  if (verb == j.end() || !verb->is_string()) SchemaError(path + "/verb", "expected string");
  e.payload.verb = verb->get<std::string>();
  auto fields = j.find("fields");
  if (fields != j.end()) {
    if (!fields->is_object()) SchemaError(path + "/fields", "expected object");
    for (auto it = fields->begin(); it != fields->end(); ++it) {
      if (it->is_number_integer()) {
        e.payload.fields.Set(it.key(), it->get<int64_t>());
      } else if (it->is_string()) {
        e.payload.fields.Set(it.key(), it->get<std::string>());
      } else {
        SchemaError(path + "/fields/" + it.key(), "expected integer or string");
      }
    }
  }
  return e;
}

std::string EncodeTraceJson(const ConcreteEventTrace& trace) {
  nlohmann::ordered_json doc;
  nlohmann::ordered_json events = nlohmann::ordered_json::array();
  for (const ConcreteEvent& e : trace.events) events.push_back(EncodeEvent(e));
  doc["events"] = std::move(events);
  doc["skipped"] = trace.skipped;
  return doc.dump();
}

ConcreteEventTrace DecodeTraceJson(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("trace: malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) SchemaError("", "expected object");
  auto events = doc.find("events");
  if (events == doc.end() || !events->is_array()) SchemaError("/events", "expected array");
  ConcreteEventTrace trace;
  for (size_t i = 0; i < events->size(); ++i) {
    trace.events.push_back(DecodeEvent((*events)[i], "/events/" + std::to_string(i)));
  }
  auto skipped = doc.find("skipped");
  if (skipped != doc.end()) {
    if (!skipped->is_array()) SchemaError("/skipped", "expected array");
    for (size_t i = 0; i < skipped->size(); ++i) {
      if (!(*skipped)[i].is_number_integer()) {
        SchemaError("/skipped/" + std::to_string(i), "expected integer");
      }
      trace.skipped.push_back((*skipped)[i].get<int>());
    }
  }
  return trace;
}

}  // namespace modelfuzz
