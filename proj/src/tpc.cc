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

// Two-phase commit with per-RM lock tables and its abstract model.
//
// Process 0 is the transaction manager, 1..R are resource managers.
// Transaction requests arrive from the environment in order.

#include <sstream>

#include "modelfuzz/benchmarks.h"
#include "modelfuzz/errors.h"

namespace modelfuzz {

int TpcRequestVars(int tx, int vars) {
  const int combos = (1 << vars) - 1;
  return (tx % combos) + 1;
}

namespace {

constexpr int kTm = 0;

enum TmPhase : int64_t { kTmInit = 0, kTmWaiting, kTmCommitted, kTmAborted };
enum RmPhase : int64_t { kRmWorking = 0, kRmPrepared, kRmVotedNo, kRmCommitted, kRmAborted };

enum TpcPoint : uint32_t {
  kPtTmRequest = 200,
  kPtRmPrepareOk,
  kPtRmPrepareConflict,
  kPtTmVoteYes,
  kPtTmVoteNo,
  kPtTmCommit,
  kPtTmAbort,
  kPtTmLateVote,
  kPtRmCommit,
  kPtRmAbort,
  kPtRmAbortAfterNo,
  kPtRmReleaseLock,
};

class TpcSystem final : public SystemUnderTest {
 public:
  TpcSystem(int rms, int vars, int requests) : rms_(rms), vars_(vars), requests_(requests) {}

  std::string_view name() const override { return "tpc"; }
  int process_count() const override { return rms_ + 1; }
  bool supports_crashes() const override { return false; }

  std::vector<BufferId> Channels() const override {
    std::vector<BufferId> out;
    out.push_back({ProcessId::Environment(), ProcessId{kTm}});
    for (int rm = 1; rm <= rms_; ++rm) {
      out.push_back({ProcessId{kTm}, ProcessId{rm}});
      out.push_back({ProcessId{rm}, ProcessId{kTm}});
    }
    return out;
  }

  void Init(SutContext& ctx) override {
    tm_phase_.assign(requests_, kTmInit);
    tm_yes_.assign(requests_, 0);
    rm_phase_.assign(static_cast<size_t>(rms_ * requests_), kRmWorking);
    locks_.assign(static_cast<size_t>(rms_ * vars_), -1);
    for (int tx = 0; tx < requests_; ++tx) {
      ctx.Send(ProcessId::Environment(), ProcessId{kTm},
               Message{"Request", Fields{{"tx", int64_t{tx}},
                                         {"vars", int64_t{TpcRequestVars(tx, vars_)}}}});
    }
  }

  void Handle(ProcessId to, ProcessId from, const Message& msg, SutContext& ctx) override {
    if (to.value == kTm) {
      HandleTm(from, msg, ctx);
    } else {
      HandleRm(to.value, msg, ctx);
    }
  }

  void OnCrash(ProcessId, SutContext&) override {}
  void OnRestart(ProcessId, SutContext&) override {}

  nlohmann::json Snapshot() const override {
    nlohmann::json j;
    j["tm"] = tm_phase_;
    j["rm"] = rm_phase_;
    j["locks"] = locks_;
    return j;
  }

  std::unique_ptr<SystemUnderTest> Clone() const override {
    return std::make_unique<TpcSystem>(*this);
  }

 private:
  int64_t& Rm(int rm, int64_t tx) { return rm_phase_[static_cast<size_t>((rm - 1) * requests_ + tx)]; }
  int64_t& Lock(int rm, int var) { return locks_[static_cast<size_t>((rm - 1) * vars_ + var)]; }
  int64_t AllRms() const { return (int64_t{1} << rms_) - 1; }

  void CheckTx(int64_t tx, SutContext& ctx) {
    bool committed = false, aborted = false;
    for (int rm = 1; rm <= rms_; ++rm) {
      const int64_t p = Rm(rm, tx);
      committed |= p == kRmCommitted;
      aborted |= p == kRmAborted || p == kRmVotedNo;
    }
    if (committed && aborted) ctx.Violate(ViolationKind::kSafetyProperty, "Atomicity");
  }

  void HandleTm(ProcessId from, const Message& msg, SutContext& ctx) {
    const int64_t tx = msg.fields.Int("tx");
    if (msg.verb == "Request") {
      ctx.Hit(kPtTmRequest);
      tm_phase_[tx] = kTmWaiting;
      for (int rm = 1; rm <= rms_; ++rm) {
        ctx.Send(ProcessId{kTm}, ProcessId{rm},
                 Message{"Prepare", Fields{{"tx", tx}, {"vars", msg.fields.Int("vars")}}});
      }
    } else if (msg.verb == "Vote") {
      const bool yes = msg.fields.Int("yes") != 0;
      if (yes) {
        ctx.Hit(kPtTmVoteYes);
        tm_yes_[tx] |= int64_t{1} << (from.value - 1);
      } else {
        ctx.Hit(kPtTmVoteNo);
      }
      if (tm_phase_[tx] != kTmWaiting) {
        ctx.Hit(kPtTmLateVote);
        return;
      }
      if (!yes) {
        ctx.Hit(kPtTmAbort);
        tm_phase_[tx] = kTmAborted;
        Broadcast("Abort", tx, ctx);
      } else if (tm_yes_[tx] == AllRms()) {
        ctx.Hit(kPtTmCommit);
        tm_phase_[tx] = kTmCommitted;
        Broadcast("Commit", tx, ctx);
      }
    } else {
      throw HandlerFault("TM: unexpected message " + msg.verb);
    }
  }

  void Broadcast(const char* verb, int64_t tx, SutContext& ctx) {
    for (int rm = 1; rm <= rms_; ++rm) {
      ctx.Send(ProcessId{kTm}, ProcessId{rm}, Message{verb, Fields{{"tx", tx}}});
    }
  }

  void Release(int rm, int64_t tx, SutContext& ctx) {
    for (int v = 0; v < vars_; ++v) {
      if (Lock(rm, v) == tx) {
        ctx.Hit(kPtRmReleaseLock);
        Lock(rm, v) = -1;
      }
    }
  }

  void HandleRm(int rm, const Message& msg, SutContext& ctx) {
    const int64_t tx = msg.fields.Int("tx");
    int64_t& phase = Rm(rm, tx);
    if (msg.verb == "Prepare") {
      const int64_t vars = msg.fields.Int("vars");
      bool conflict = false;
      for (int v = 0; v < vars_; ++v) {
        if ((vars >> v & 1) && Lock(rm, v) != -1 && Lock(rm, v) != tx) conflict = true;
      }
      if (conflict) {
        ctx.Hit(kPtRmPrepareConflict);
        phase = kRmVotedNo;
      } else {
        ctx.Hit(kPtRmPrepareOk);
        for (int v = 0; v < vars_; ++v) {
          if (vars >> v & 1) Lock(rm, v) = tx;
        }
        phase = kRmPrepared;
      }
      ctx.Send(ProcessId{rm}, ProcessId{kTm},
               Message{"Vote", Fields{{"tx", tx}, {"yes", int64_t{conflict ? 0 : 1}}}});
    } else if (msg.verb == "Commit") {
      ctx.Hit(kPtRmCommit);
      if (phase != kRmPrepared) {
        ctx.Violate(ViolationKind::kSafetyProperty, "Stability");
      }
      phase = kRmCommitted;
      Release(rm, tx, ctx);
      CheckTx(tx, ctx);
    } else if (msg.verb == "Abort") {
      ctx.Hit(phase == kRmVotedNo ? kPtRmAbortAfterNo : kPtRmAbort);
      if (phase == kRmCommitted) {
        ctx.Violate(ViolationKind::kSafetyProperty, "Stability");
      }
      phase = kRmAborted;
      Release(rm, tx, ctx);
      CheckTx(tx, ctx);
    } else {
      throw HandlerFault("RM: unexpected message " + msg.verb);
    }
  }

  int rms_;
  int vars_;
  int requests_;
  std::vector<int64_t> tm_phase_;
  std::vector<int64_t> tm_yes_;
  std::vector<int64_t> rm_phase_;
  std::vector<int64_t> locks_;
};

// State layout, with N requests, R RMs, V variables:
//   [0, N)            TM phase per tx
//   [N, 2N)           RMs whose yes vote the TM has received, per tx
//   [2N, 2N+RN)       RM phase per (rm, tx)
//   [2N+RN, +RV)      lock holder per (rm, var), -1 if free
class TpcModel final : public AbstractModel {
 public:
  TpcModel(int rms, int vars, int requests) : r_(rms), v_(vars), n_(requests) {}

  std::string_view name() const override { return "tpc"; }

  std::vector<ModelState> Initial() const override {
    ModelState q;
    q.words.assign(static_cast<size_t>(2 * n_ + r_ * n_ + r_ * v_), 0);
    for (int i = 0; i < r_ * v_; ++i) q.words[LockAt(1, 0) + i] = -1;
    return {q};
  }

  void Successors(const ModelState& q, const ModelAction& a,
                  std::vector<ModelState>& out) const override {
    const std::string& act = a.name;
    const int64_t tx = a.args.Int("tx");
    if (tx < 0 || tx >= n_) return;
    ModelState s = q;
    if (act == "TMRcvRequest") {
      if (s.words[Tm(tx)] != kTmInit) return;
      s.words[Tm(tx)] = kTmWaiting;
    } else if (act == "RMRcvPrepare") {
      const int64_t rm = a.args.Int("rm");
      if (!ValidRm(rm) || s.words[Tm(tx)] == kTmInit || s.words[RmAt(rm, tx)] != kRmWorking) return;
      const int vars = TpcRequestVars(static_cast<int>(tx), v_);
      bool conflict = false;
      for (int v = 0; v < v_; ++v) {
        const int64_t holder = s.words[LockAt(rm, v)];
        if ((vars >> v & 1) && holder != -1 && holder != tx) conflict = true;
      }
      if (conflict) {
        s.words[RmAt(rm, tx)] = kRmVotedNo;
      } else {
        for (int v = 0; v < v_; ++v) {
          if (vars >> v & 1) s.words[LockAt(rm, v)] = tx;
        }
        s.words[RmAt(rm, tx)] = kRmPrepared;
      }
    } else if (act == "TMRcvVote") {
      const int64_t rm = a.args.Int("rm");
      const bool yes = a.args.Int("yes") != 0;
      if (!ValidRm(rm)) return;
      // The voter's phase must be one that follows casting this vote.
      const int64_t phase = s.words[RmAt(rm, tx)];
      const bool possible = yes ? (phase == kRmPrepared || phase == kRmCommitted || phase == kRmAborted)
                                : (phase == kRmVotedNo || phase == kRmAborted);
      if (!possible) return;
      if (yes) s.words[Prepared(tx)] |= int64_t{1} << (rm - 1);
      if (s.words[Tm(tx)] == kTmWaiting) {
        if (!yes) {
          s.words[Tm(tx)] = kTmAborted;
        } else if (s.words[Prepared(tx)] == (int64_t{1} << r_) - 1) {
          s.words[Tm(tx)] = kTmCommitted;
        }
      }
    } else if (act == "RMRcvCommit") {
      const int64_t rm = a.args.Int("rm");
      if (!ValidRm(rm) || s.words[Tm(tx)] != kTmCommitted || s.words[RmAt(rm, tx)] != kRmPrepared) return;
      s.words[RmAt(rm, tx)] = kRmCommitted;
      Release(s, rm, tx);
    } else if (act == "RMRcvAbort") {
      const int64_t rm = a.args.Int("rm");
      if (!ValidRm(rm) || s.words[Tm(tx)] != kTmAborted) return;
      const int64_t phase = s.words[RmAt(rm, tx)];
      if (phase != kRmPrepared && phase != kRmVotedNo) return;
      s.words[RmAt(rm, tx)] = kRmAborted;
      Release(s, rm, tx);
    } else {
      throw MappingError("tpc model: unknown action " + act);
    }
    out.push_back(std::move(s));
  }

  std::vector<ModelAction> Actions(const ModelState&) const override {
    std::vector<ModelAction> out;
    for (int64_t tx = 0; tx < n_; ++tx) {
      out.push_back({"TMRcvRequest", Fields{{"tx", tx}}});
      for (int64_t rm = 1; rm <= r_; ++rm) {
        out.push_back({"RMRcvPrepare", Fields{{"rm", rm}, {"tx", tx}}});
        out.push_back({"TMRcvVote", Fields{{"rm", rm}, {"tx", tx}, {"yes", int64_t{1}}}});
        out.push_back({"TMRcvVote", Fields{{"rm", rm}, {"tx", tx}, {"yes", int64_t{0}}}});
        out.push_back({"RMRcvCommit", Fields{{"rm", rm}, {"tx", tx}}});
        out.push_back({"RMRcvAbort", Fields{{"rm", rm}, {"tx", tx}}});
      }
    }
    return out;
  }

  std::string Describe(const ModelState& q) const override {
    std::ostringstream o;
    o << "tm=[";
    for (int tx = 0; tx < n_; ++tx) o << (tx ? "," : "") << q.words[Tm(tx)];
    o << "] rm=[";
    for (int rm = 1; rm <= r_; ++rm) {
      o << (rm > 1 ? " " : "");
      for (int tx = 0; tx < n_; ++tx) o << q.words[RmAt(rm, tx)];
    }
    o << "] locks=[";
    for (int rm = 1; rm <= r_; ++rm) {
      for (int v = 0; v < v_; ++v) o << (rm + v > 1 ? "," : "") << q.words[LockAt(rm, v)];
    }
    o << "]";
    return o.str();
  }

 private:
  bool ValidRm(int64_t rm) const { return rm >= 1 && rm <= r_; }
  size_t Tm(int64_t tx) const { return static_cast<size_t>(tx); }
  size_t Prepared(int64_t tx) const { return static_cast<size_t>(n_ + tx); }
  size_t RmAt(int64_t rm, int64_t tx) const {
    return static_cast<size_t>(2 * n_ + (rm - 1) * n_ + tx);
  }
  size_t LockAt(int64_t rm, int v) const {
    return static_cast<size_t>(2 * n_ + r_ * n_ + (rm - 1) * v_ + v);
  }
  void Release(ModelState& s, int64_t rm, int64_t tx) const {
    for (int v = 0; v < v_; ++v) {
      if (s.words[LockAt(rm, v)] == tx) s.words[LockAt(rm, v)] = -1;
    }
  }

  int r_;
  int v_;
  int n_;
};

}  // namespace

std::unique_ptr<SystemUnderTest> BuildTpc(int rms, int vars, int requests) {
  if (rms < 2 || vars < 1 || requests < 1) {
    throw ParamError("tpc: need rms >= 2, vars >= 1, requests >= 1");
  }
  if (rms > 30 || vars > 16) throw ParamError("tpc: too many RMs or variables");
  return std::make_unique<TpcSystem>(rms, vars, requests);
}

std::unique_ptr<AbstractModel> BuildTpcModel(int rms, int vars, int requests) {
  if (rms < 1 || vars < 1 || requests < 1) throw ParamError("tpc model: bad parameters");
  return std::make_unique<TpcModel>(rms, vars, requests);
}

}  // namespace modelfuzz
