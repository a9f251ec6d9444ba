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

#ifndef MODELFUZZ_ERRORS_H_
#define MODELFUZZ_ERRORS_H_

#include <stdexcept>
#include <string>

namespace modelfuzz {

// Invalid arguments to a generator, statistic or constructor.
class ParamError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed schedule, trace or config input.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The event mapper or the model received something outside its contract.
// Always a bug in a benchmark/mapper/model triple, never a user error.
class MappingError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A campaign configuration that cannot be run (e.g. crashes on a benchmark
// that does not model them).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised by benchmark handlers to signal an unexpected fault; the harness
// converts it into a HandlerPanic violation and crashes the process.
class HandlerFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace modelfuzz

#endif  // MODELFUZZ_ERRORS_H_
