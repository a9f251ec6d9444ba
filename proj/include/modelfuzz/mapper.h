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

#ifndef MODELFUZZ_MAPPER_H_
#define MODELFUZZ_MAPPER_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "modelfuzz/benchmarks.h"
#include "modelfuzz/model.h"
#include "modelfuzz/schedule.h"

namespace modelfuzz {

// Translates one implementation event into at most one model action.
// Throws MappingError for verbs the benchmark does not define.
std::optional<ModelAction> MapEvent(BenchmarkKind kind, const ConcreteEvent& e);

// Order-preserving map over a whole trace.
std::vector<ModelAction> MapEvents(BenchmarkKind kind, const ConcreteEventTrace& trace);

// Standard event encoding:
//   {"kind":"deliver","from":0,"to":1,"verb":"...","fields":{...},"step":3}
//   {"kind":"crash","proc":2,"step":17}
//   {"kind":"internal","to":1,"verb":"...","fields":{...},"step":-1}
nlohmann::ordered_json EncodeEvent(const ConcreteEvent& e);
// `path` prefixes error messages (e.g. "/events/4").
ConcreteEvent DecodeEvent(const nlohmann::json& j, const std::string& path = "");

// {"events":[...],"skipped":[...]}
std::string EncodeTraceJson(const ConcreteEventTrace& trace);
ConcreteEventTrace DecodeTraceJson(std::string_view text);

}  // namespace modelfuzz

#endif  // MODELFUZZ_MAPPER_H_
