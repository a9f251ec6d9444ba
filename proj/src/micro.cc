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

// The AppMaster / Worker / Terminator microbenchmark and its abstract model.
//
// Process layout: 0 = AppMaster, 1..m = workers, m+1 = terminator. The
// client request arrives on the environment channel into the AppMaster.
// Worker 1 runs the request as a chain of n tasks; every task after the
// first is relayed through the AppMaster (Next -> Execute) so that all
// traffic uses inter-process channels.

#include <sstream>

#include "modelfuzz/benchmarks.h"
#include "modelfuzz/errors.h"

namespace modelfuzz {
namespace {

constexpr int kAppMaster = 0;
constexpr int kRequest = 0;  // the single client request "r"

// Structural points.
enum MicroPoint : uint32_t {
  kPtRegisterWorker = 100,
  kPtRegisterTerminator,
  kPtRequestReady,
  kPtRequestDropped,
  kPtRelay,
  kPtExecuteTask,
  kPtExecuteContinue,
  kPtExecuteChainAborted,
  kPtExecuteFinal,
  kPtExecuteFinalNullBuffer,
  kPtFlush,
  kPtTerminate,
};

class MicroSystem final : public SystemUnderTest {
 public:
  MicroSystem(int m, int n, bool bug) : m_(m), n_(n), bug_(bug) {}

  std::string_view name() const override { return "micro"; }
  int process_count() const override { return m_ + 2; }
  bool supports_crashes() const override { return false; }

  std::vector<BufferId> Channels() const override {
    std::vector<BufferId> out;
    const ProcessId am{kAppMaster}, term{terminator()};
    out.push_back({ProcessId::Environment(), am});
    for (int w = 1; w <= m_; ++w) {
      out.push_back({ProcessId{w}, am});
      out.push_back({am, ProcessId{w}});
      out.push_back({term, ProcessId{w}});
    }
    out.push_back({term, am});
    out.push_back({am, term});
    return out;
  }

  void Init(SutContext& ctx) override {
    registered_.assign(static_cast<size_t>(process_count()), false);
    served_ = false;
    buffer_valid_ = true;
    completed_ = 0;
    const ProcessId am{kAppMaster};
    for (int w = 1; w <= m_; ++w) {
      ctx.Send(ProcessId{w}, am, Message{"Register", Fields{{"who", int64_t{w}}}});
    }
    ctx.Send(ProcessId{terminator()}, am,
             Message{"Register", Fields{{"who", int64_t{terminator()}}}});
    ctx.Send(ProcessId::Environment(), am, Message{"Request", Fields{{"req", int64_t{kRequest}}}});
  }

  void Handle(ProcessId to, ProcessId /*from*/, const Message& msg, SutContext& ctx) override {
    if (to.value == kAppMaster) {
      HandleAppMaster(msg, ctx);
    } else if (to.value == terminator()) {
      HandleTerminator(msg, ctx);
    } else {
      HandleWorker(to, msg, ctx);
    }
  }

  void OnCrash(ProcessId, SutContext&) override {}
  void OnRestart(ProcessId, SutContext&) override {}

  nlohmann::json Snapshot() const override {
    nlohmann::json j;
    j["registered"] = registered_;
    j["served"] = served_;
    j["buffer_valid"] = buffer_valid_;
    j["completed"] = completed_;
    return j;
  }

  std::unique_ptr<SystemUnderTest> Clone() const override {
    return std::make_unique<MicroSystem>(*this);
  }

 private:
  int terminator() const { return m_ + 1; }

  bool Ready() const {
    for (int p = 1; p <= terminator(); ++p) {
      if (!registered_[p]) return false;
    }
    return true;
  }

  void HandleAppMaster(const Message& msg, SutContext& ctx) {
    const ProcessId am{kAppMaster};
    if (msg.verb == "Register") {
      const int64_t who = msg.fields.Int("who");
      ctx.Hit(who == terminator() ? kPtRegisterTerminator : kPtRegisterWorker);
      registered_[static_cast<size_t>(who)] = true;
    } else if (msg.verb == "Request") {
      if (Ready()) {
        ctx.Hit(kPtRequestReady);
        served_ = true;
        const int64_t req = msg.fields.Int("req");
        ctx.Send(am, ProcessId{1}, Message{"Execute", Fields{{"req", req}, {"task", int64_t{1}}}});
        ctx.Send(am, ProcessId{terminator()},
                 Message{"Terminate", Fields{{"worker", int64_t{1}}}});
      } else {
        ctx.Hit(kPtRequestDropped);
      }
    } else if (msg.verb == "Next") {
      ctx.Hit(kPtRelay);
      ctx.Send(am, ProcessId{1},
               Message{"Execute", Fields{{"req", msg.fields.Int("req")},
                                         {"task", msg.fields.Int("task")}}});
    } else {
      throw HandlerFault("AppMaster: unexpected message " + msg.verb);
    }
  }

  void HandleWorker(ProcessId self, const Message& msg, SutContext& ctx) {
    if (msg.verb == "Execute") {
      const int64_t task = msg.fields.Int("task");
      ctx.Hit(kPtExecuteTask);
      completed_ |= 1LL << (task - 1);
      if (task == n_) {
        ctx.Hit(kPtExecuteFinal);
        if (!buffer_valid_) {
          ctx.Hit(kPtExecuteFinalNullBuffer);
          // The final task dereferences the buffer; without the guard a
          // prior Flush leaves it null.
          if (bug_) ctx.Violate(ViolationKind::kAssertionFailure, "NullDeref");
        }
      } else if (buffer_valid_) {
        ctx.Hit(kPtExecuteContinue);
        ctx.Send(self, ProcessId{kAppMaster},
                 Message{"Next", Fields{{"req", msg.fields.Int("req")}, {"task", task + 1}}});
      } else {
        ctx.Hit(kPtExecuteChainAborted);
      }
    } else if (msg.verb == "Flush") {
      ctx.Hit(kPtFlush);
      buffer_valid_ = false;
    } else {
      throw HandlerFault("Worker: unexpected message " + msg.verb);
    }
  }

  void HandleTerminator(const Message& msg, SutContext& ctx) {
    if (msg.verb != "Terminate") throw HandlerFault("Terminator: unexpected message " + msg.verb);
    ctx.Hit(kPtTerminate);
    const int64_t w = msg.fields.Int("worker");
    ctx.Send(ProcessId{terminator()}, ProcessId{static_cast<int32_t>(w)}, Message{"Flush", {}});
  }

  int m_;
  int n_;
  bool bug_;
  std::vector<bool> registered_;
  bool served_ = false;
  bool buffer_valid_ = true;  // worker 1's buffer
  int64_t completed_ = 0;     // bitmask of processed tasks
};

// State words: registered, requests, completed, toTerminate, terminated
// (all bitmasks; process bits for registered/toTerminate/terminated, task
// bits for completed).
class MicroModel final : public AbstractModel {
 public:
  MicroModel(int m, int n) : m_(m), n_(n) {}

  std::string_view name() const override { return "micro"; }

  std::vector<ModelState> Initial() const override { return {ModelState{{0, 0, 0, 0, 0}}}; }

  void Successors(const ModelState& q, const ModelAction& a,
                  std::vector<ModelState>& out) const override {
    int64_t registered = q.words[0], requests = q.words[1], completed = q.words[2],
            to_terminate = q.words[3], terminated = q.words[4];
    const int64_t all = AllRegistered();
    const std::string& act = a.name;
    if (act == "Register") {
      const int64_t p = a.args.Int("p");
      if (p < 1 || p > m_ + 1 || (registered & Bit(p))) return;
      registered |= Bit(p);
    } else if (act == "Request") {
      if (requests & Bit(a.args.Int("r"))) return;
      if (registered == all) requests |= Bit(a.args.Int("r"));
    } else if (act == "Execute") {
      const int64_t k = a.args.Int("task");
      if (!(requests & Bit(a.args.Int("r"))) || k < 1 || k > n_) return;
      if ((completed & Bit(k - 1)) || (k > 1 && !(completed & Bit(k - 2)))) return;
      completed |= Bit(k - 1);
    } else if (act == "Forward") {
      const int64_t k = a.args.Int("task");
      if (k < 2 || k > n_ || !(completed & Bit(k - 2)) || (completed & Bit(k - 1))) return;
    } else if (act == "Terminate") {
      const int64_t w = a.args.Int("w");
      if (!(requests & Bit(kRequest)) || (to_terminate & Bit(w))) return;
      to_terminate |= Bit(w);
    } else if (act == "Flush") {
      const int64_t w = a.args.Int("w");
      if (!(to_terminate & Bit(w)) || (terminated & Bit(w))) return;
      terminated |= Bit(w);
    } else {
      throw MappingError("micro model: unknown action " + act);
    }
    out.push_back(ModelState{{registered, requests, completed, to_terminate, terminated}});
  }

  std::vector<ModelAction> Actions(const ModelState&) const override {
    std::vector<ModelAction> out;
    for (int p = 1; p <= m_ + 1; ++p) out.push_back({"Register", Fields{{"p", int64_t{p}}}});
    out.push_back({"Request", Fields{{"r", int64_t{kRequest}}}});
    for (int k = 1; k <= n_; ++k) {
      out.push_back({"Execute", Fields{{"r", int64_t{kRequest}}, {"task", int64_t{k}}}});
      if (k >= 2) out.push_back({"Forward", Fields{{"r", int64_t{kRequest}}, {"task", int64_t{k}}}});
    }
    out.push_back({"Terminate", Fields{{"w", int64_t{1}}}});
    out.push_back({"Flush", Fields{{"w", int64_t{1}}}});
    return out;
  }

  std::string Describe(const ModelState& q) const override {
    std::ostringstream o;
    auto set = [&](int64_t mask, char prefix) {
      o << "{";
      bool first = true;
      for (int i = 0; i < 63; ++i) {
        if (mask & Bit(i)) {
          if (!first) o << ",";
          first = false;
          o << prefix << i;
        }
      }
      o << "}";
    };
    o << "<";
    set(q.words[0], 'p');
    o << ", ";
    set(q.words[1], 'r');
    o << ", ";
    set(q.words[2], 't');
    o << ", ";
    set(q.words[3], 'p');
    o << ", ";
    set(q.words[4], 'p');
    o << ">";
    return o.str();
  }

 private:
  static int64_t Bit(int64_t i) { return int64_t{1} << i; }
  int64_t AllRegistered() const {
    int64_t mask = 0;
    for (int p = 1; p <= m_ + 1; ++p) mask |= Bit(p);
    return mask;
  }

  int m_;
  int n_;
};

}  // namespace

std::unique_ptr<SystemUnderTest> BuildMicro(int m, int n, bool bug_enabled) {
  if (m < 1 || n < 1) throw ParamError("micro: need m >= 1 and n >= 1");
  if (n > 62) throw ParamError("micro: n > 62 not supported");
  return std::make_unique<MicroSystem>(m, n, bug_enabled);
}

std::unique_ptr<AbstractModel> BuildMicroModel(int m, int n) {
  if (m < 1 || n < 1) throw ParamError("micro model: need m >= 1 and n >= 1");
  return std::make_unique<MicroModel>(m, n);
}

}  // namespace modelfuzz
