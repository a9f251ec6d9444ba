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

// A small Raft: leader election, log replication, crash/restart and leader
// snapshots. Timeouts and client requests are tokens on dedicated
// channels so the schedule decides when they happen.

#include <algorithm>
#include <bit>
#include <map>
#include <sstream>

#include "modelfuzz/benchmarks.h"
#include "modelfuzz/errors.h"

namespace modelfuzz {

int RaftVoteQuorum(int procs, bool quorum_bug) {
  return quorum_bug ? procs / 3 + 1 : procs / 2 + 1;
}

namespace {

enum Role : int64_t { kFollower = 0, kCandidate = 1, kLeader = 2 };

struct Entry {
  int64_t term = 0;
  int64_t value = 0;

  friend bool operator==(const Entry&, const Entry&) = default;
};

std::string EncodeEntries(const std::vector<Entry>& log, size_t from) {
  std::string out;
  for (size_t i = from; i < log.size(); ++i) {
    if (!out.empty()) out += ',';
    out += std::to_string(log[i].term) + ":" + std::to_string(log[i].value);
  }
  return out;
}

std::vector<Entry> DecodeEntries(const std::string& s) {
  std::vector<Entry> out;
  size_t pos = 0;
  while (pos < s.size()) {
    size_t comma = s.find(',', pos);
    if (comma == std::string::npos) comma = s.size();
    const std::string item = s.substr(pos, comma - pos);
    const size_t colon = item.find(':');
    if (colon == std::string::npos) throw MappingError("raft: bad entry list '" + s + "'");
    out.push_back({std::stoll(item.substr(0, colon)), std::stoll(item.substr(colon + 1))});
    pos = comma + 1;
  }
  return out;
}

enum RaftPoint : uint32_t {
  kPtTimeoutStart = 300,
  kPtTimeoutLeader,
  kPtVoteGrant,
  kPtVoteDeny,
  kPtVoteCounted,
  kPtVoteStale,
  kPtBecomeLeader,
  kPtStepDown,
  kPtClientAppend,
  kPtClientIgnored,
  kPtAeStaleTerm,
  kPtAeLeaderConflict,
  kPtAePrevMismatch,
  kPtAeSnapshotConflict,
  kPtAeTruncate,
  kPtAeAccept,
  kPtAeCommit,
  kPtAerSuccess,
  kPtAerRetry,
  kPtAerIgnored,
  kPtLeaderCommit,
  kPtSnapshot,
  kPtRestart,
};

struct Node {
  // Persistent.
  int64_t term = 0;
  int64_t voted_for = -1;
  std::vector<Entry> log;  // log[i] holds index i + 1
  int64_t snapshot_index = 0;
  // Volatile.
  int64_t role = kFollower;
  uint64_t votes = 0;
  int64_t commit = 0;
  std::vector<int64_t> next_index;
  std::vector<int64_t> match_index;

  int64_t last_index() const { return static_cast<int64_t>(log.size()); }
  int64_t TermAt(int64_t index) const { return index == 0 ? 0 : log[index - 1].term; }
};

class RaftSystem final : public SystemUnderTest {
 public:
  RaftSystem(int procs, int requests, bool quorum_bug, int threshold)
      : n_(procs), requests_(requests), quorum_bug_(quorum_bug), threshold_(threshold) {}

  std::string_view name() const override { return "raftlite"; }
  int process_count() const override { return n_; }
  bool supports_crashes() const override { return true; }

  std::vector<BufferId> Channels() const override {
    std::vector<BufferId> out;
    for (int p = 0; p < n_; ++p) {
      out.push_back({ProcessId::Environment(), ProcessId{p}});
      for (int q = 0; q < n_; ++q) out.push_back({ProcessId{p}, ProcessId{q}});
    }
    return out;
  }

  void Init(SutContext& ctx) override {
    nodes_.assign(static_cast<size_t>(n_), Node{});
    leader_of_term_.clear();
    committed_.clear();
    client_next_ = 0;
    for (int p = 0; p < n_; ++p) {
      ctx.Internal(ProcessId{p}, Message{"AddProcess", {}});
      SendTokens(p, ctx);
    }
  }

  void Handle(ProcessId to, ProcessId from, const Message& msg, SutContext& ctx) override {
    const int p = to.value;
    if (msg.verb == "Timeout") {
      HandleTimeout(p, ctx);
    } else if (msg.verb == "ClientRequest") {
      HandleClient(p, ctx);
    } else if (msg.verb == "RequestVote") {
      HandleRequestVote(p, from.value, msg.fields, ctx);
    } else if (msg.verb == "RequestVoteResponse") {
      HandleRequestVoteResponse(p, from.value, msg.fields, ctx);
    } else if (msg.verb == "AppendEntries") {
      HandleAppendEntries(p, from.value, msg.fields, ctx);
    } else if (msg.verb == "AppendEntriesResponse") {
      HandleAppendEntriesResponse(p, from.value, msg.fields, ctx);
    } else {
      throw HandlerFault("raft: unexpected message " + msg.verb);
    }
  }

  void OnCrash(ProcessId p, SutContext&) override {
    Node& node = nodes_[p.value];
    node.role = kFollower;
    node.votes = 0;
    node.commit = 0;
    node.next_index.clear();
    node.match_index.clear();
  }

  void OnRestart(ProcessId p, SutContext& ctx) override {
    ctx.Hit(kPtRestart);
    Node& node = nodes_[p.value];
    node.commit = node.snapshot_index;
    SendTokens(p.value, ctx);
  }

  nlohmann::json Snapshot() const override {
    nlohmann::json j = nlohmann::json::array();
    for (const Node& node : nodes_) {
      nlohmann::json n;
      n["term"] = node.term;
      n["role"] = node.role;
      n["commit"] = node.commit;
      n["snapshot"] = node.snapshot_index;
      n["log"] = EncodeEntries(node.log, 0);
      j.push_back(n);
    }
    return j;
  }

  std::unique_ptr<SystemUnderTest> Clone() const override {
    return std::make_unique<RaftSystem>(*this);
  }

 private:
  void SendTokens(int p, SutContext& ctx) {
    ctx.Send(ProcessId{p}, ProcessId{p}, Message{"Timeout", {}});
    if (client_next_ < requests_) {
      ctx.Send(ProcessId::Environment(), ProcessId{p}, Message{"ClientRequest", {}});
    }
  }

  void StepDown(int p, int64_t term, SutContext& ctx) {
    Node& node = nodes_[p];
    if (term < node.term) ctx.Violate(ViolationKind::kSafetyProperty, "TermMonotonicity");
    ctx.Hit(kPtStepDown);
    if (term > node.term) node.voted_for = -1;
    node.term = term;
    node.role = kFollower;
    node.votes = 0;
  }

  void HandleTimeout(int p, SutContext& ctx) {
    ctx.Send(ProcessId{p}, ProcessId{p}, Message{"Timeout", {}});
    Node& node = nodes_[p];
    if (node.role == kLeader) {
      ctx.Hit(kPtTimeoutLeader);
      return;
    }
    ctx.Hit(kPtTimeoutStart);
    node.term += 1;
    node.role = kCandidate;
    node.voted_for = p;
    node.votes = uint64_t{1} << p;
    for (int q = 0; q < n_; ++q) {
      if (q == p) continue;
      ctx.Send(ProcessId{p}, ProcessId{q},
               Message{"RequestVote", Fields{{"lastIndex", node.last_index()},
                                             {"lastTerm", node.TermAt(node.last_index())},
                                             {"term", node.term}}});
    }
  }

  void HandleClient(int p, SutContext& ctx) {
    if (client_next_ < requests_) {
      ctx.Send(ProcessId::Environment(), ProcessId{p}, Message{"ClientRequest", {}});
    }
    Node& node = nodes_[p];
    if (node.role != kLeader || client_next_ >= requests_) {
      ctx.Hit(kPtClientIgnored);
      return;
    }
    ctx.Hit(kPtClientAppend);
    node.log.push_back({node.term, client_next_++});
    node.match_index[p] = node.last_index();
    for (int q = 0; q < n_; ++q) {
      if (q != p) SendAppend(p, q, ctx);
    }
  }

  void HandleRequestVote(int p, int c, const Fields& f, SutContext& ctx) {
    const int64_t term = f.Int("term");
    if (term > nodes_[p].term) StepDown(p, term, ctx);
    Node& node = nodes_[p];
    const int64_t last_term = node.TermAt(node.last_index());
    const bool up_to_date = f.Int("lastTerm") > last_term ||
                            (f.Int("lastTerm") == last_term && f.Int("lastIndex") >= node.last_index());
    const bool grant =
        term == node.term && (node.voted_for == -1 || node.voted_for == c) && up_to_date;
    if (grant) {
      ctx.Hit(kPtVoteGrant);
      node.voted_for = c;
    } else {
      ctx.Hit(kPtVoteDeny);
    }
    ctx.Send(ProcessId{p}, ProcessId{c},
             Message{"RequestVoteResponse",
                     Fields{{"granted", int64_t{grant ? 1 : 0}}, {"term", node.term}}});
  }

  void HandleRequestVoteResponse(int p, int from, const Fields& f, SutContext& ctx) {
    const int64_t term = f.Int("term");
    Node& node = nodes_[p];
    if (term > node.term) {
      StepDown(p, term, ctx);
      return;
    }
    if (node.role != kCandidate || term != node.term || f.Int("granted") == 0) {
      ctx.Hit(kPtVoteStale);
      return;
    }
    ctx.Hit(kPtVoteCounted);
    node.votes |= uint64_t{1} << from;
    if (std::popcount(node.votes) >= RaftVoteQuorum(n_, quorum_bug_)) BecomeLeader(p, ctx);
  }

  void BecomeLeader(int p, SutContext& ctx) {
    ctx.Hit(kPtBecomeLeader);
    Node& node = nodes_[p];
    node.role = kLeader;
    node.next_index.assign(static_cast<size_t>(n_), node.last_index() + 1);
    node.match_index.assign(static_cast<size_t>(n_), 0);
    node.match_index[p] = node.last_index();
    ctx.Internal(ProcessId{p}, Message{"ElectLeader", Fields{{"term", node.term}}});
    auto [it, inserted] = leader_of_term_.emplace(node.term, p);
    if (!inserted && it->second != p) {
      ctx.Violate(ViolationKind::kSafetyProperty, "ElectionSafety");
    }
    for (int q = 0; q < n_; ++q) {
      if (q != p) SendAppend(p, q, ctx);
    }
  }

  void SendAppend(int p, int q, SutContext& ctx) {
    const Node& node = nodes_[p];
    const int64_t prev = node.next_index[q] - 1;
    ctx.Send(ProcessId{p}, ProcessId{q},
             Message{"AppendEntries",
                     Fields{{"commit", node.commit},
                            {"entries", EncodeEntries(node.log, static_cast<size_t>(prev))},
                            {"n", node.last_index() - prev},
                            {"prevIndex", prev},
                            {"prevTerm", node.TermAt(prev)},
                            {"term", node.term}}});
  }

  void Reply(int p, int to, bool ok, int64_t match, int64_t count, SutContext& ctx) {
    ctx.Send(ProcessId{p}, ProcessId{to},
             Message{"AppendEntriesResponse", Fields{{"match", match},
                                                     {"n", count},
                                                     {"success", int64_t{ok ? 1 : 0}},
                                                     {"term", nodes_[p].term}}});
  }

  void HandleAppendEntries(int p, int leader, const Fields& f, SutContext& ctx) {
    const int64_t term = f.Int("term");
    const int64_t count = f.Int("n");
    if (term < nodes_[p].term) {
      ctx.Hit(kPtAeStaleTerm);
      Reply(p, leader, false, 0, count, ctx);
      return;
    }
    if (term > nodes_[p].term || nodes_[p].role == kCandidate) StepDown(p, term, ctx);
    Node& node = nodes_[p];
    if (node.role == kLeader) {
      // Two leaders in one term; only reachable with the quorum bug.
      ctx.Hit(kPtAeLeaderConflict);
      Reply(p, leader, false, 0, count, ctx);
      return;
    }
    const int64_t prev = f.Int("prevIndex");
    if (prev > node.last_index() || node.TermAt(prev) != f.Int("prevTerm")) {
      ctx.Hit(kPtAePrevMismatch);
      Reply(p, leader, false, 0, count, ctx);
      return;
    }
    const std::vector<Entry> entries = DecodeEntries(f.Str("entries"));
    int64_t index = prev;
    for (const Entry& e : entries) {
      ++index;
      if (index <= node.last_index() && node.TermAt(index) != e.term && index <= node.snapshot_index) {
        ctx.Hit(kPtAeSnapshotConflict);
        Reply(p, leader, false, 0, count, ctx);
        return;
      }
    }
    index = prev;
    for (const Entry& e : entries) {
      ++index;
      if (index <= node.last_index()) {
        if (node.TermAt(index) == e.term) continue;
        ctx.Hit(kPtAeTruncate);
        node.log.resize(static_cast<size_t>(index - 1));
      }
      node.log.push_back(e);
    }
    ctx.Hit(kPtAeAccept);
    const int64_t leader_commit = f.Int("commit");
    if (leader_commit > node.commit) {
      ctx.Hit(kPtAeCommit);
      AdvanceCommit(p, std::min(leader_commit, prev + count), ctx);
    }
    Reply(p, leader, true, prev + count, count, ctx);
  }

  void HandleAppendEntriesResponse(int p, int from, const Fields& f, SutContext& ctx) {
    const int64_t term = f.Int("term");
    if (term > nodes_[p].term) {
      StepDown(p, term, ctx);
      return;
    }
    Node& node = nodes_[p];
    if (node.role != kLeader || term != node.term) {
      ctx.Hit(kPtAerIgnored);
      return;
    }
    if (f.Int("success") == 0) {
      ctx.Hit(kPtAerRetry);
      node.next_index[from] = std::max<int64_t>(1, node.next_index[from] - 1);
      SendAppend(p, from, ctx);
      return;
    }
    ctx.Hit(kPtAerSuccess);
    node.match_index[from] = std::max(node.match_index[from], f.Int("match"));
    node.next_index[from] = node.match_index[from] + 1;
    for (int64_t idx = node.last_index(); idx > node.commit; --idx) {
      if (node.TermAt(idx) != node.term) break;
      int acks = 0;
      for (int q = 0; q < n_; ++q) acks += node.match_index[q] >= idx;
      if (acks >= n_ / 2 + 1) {
        ctx.Hit(kPtLeaderCommit);
        AdvanceCommit(p, idx, ctx);
        break;
      }
    }
    if (node.last_index() - node.snapshot_index > threshold_ && node.commit > node.snapshot_index) {
      ctx.Hit(kPtSnapshot);
      node.snapshot_index = node.commit;
      ctx.Internal(ProcessId{p}, Message{"UpdateSnapshotIndex",
                                         Fields{{"index", node.snapshot_index}}});
    }
  }

  void AdvanceCommit(int p, int64_t to, SutContext& ctx) {
    Node& node = nodes_[p];
    for (int64_t idx = node.commit + 1; idx <= to; ++idx) {
      const Entry& e = node.log[idx - 1];
      auto [it, inserted] = committed_.emplace(idx, e);
      if (!inserted && !(it->second == e)) {
        ctx.Violate(ViolationKind::kSafetyProperty, "LogMatching");
      }
    }
    node.commit = std::max(node.commit, to);
  }

  int n_;
  int requests_;
  bool quorum_bug_;
  int threshold_;
  std::vector<Node> nodes_;
  int64_t client_next_ = 0;
  // Oracle bookkeeping, not process state.
  std::map<int64_t, int> leader_of_term_;
  std::map<int64_t, Entry> committed_;
};

// State layout: [active mask, added mask, next client value] followed by one
// block per process: [term, role, snapshotIndex, logLen, t1, v1, t2, v2, ...].
struct ProcView {
  int64_t term = 0;
  int64_t role = kFollower;
  int64_t snapshot = 0;
  std::vector<Entry> log;
};

struct RaftView {
  int64_t active = 0;
  int64_t added = 0;
  int64_t client_next = 0;
  std::vector<ProcView> procs;

  static RaftView Decode(const ModelState& q, int n) {
    RaftView v;
    v.active = q.words[0];
    v.added = q.words[1];
    v.client_next = q.words[2];
    size_t i = 3;
    v.procs.resize(static_cast<size_t>(n));
    for (ProcView& p : v.procs) {
      p.term = q.words[i++];
      p.role = q.words[i++];
      p.snapshot = q.words[i++];
      const int64_t len = q.words[i++];
      for (int64_t k = 0; k < len; ++k, i += 2) p.log.push_back({q.words[i], q.words[i + 1]});
    }
    return v;
  }

  ModelState Encode() const {
    ModelState q;
    q.words = {active, added, client_next};
    for (const ProcView& p : procs) {
      q.words.insert(q.words.end(), {p.term, p.role, p.snapshot, static_cast<int64_t>(p.log.size())});
      for (const Entry& e : p.log) q.words.insert(q.words.end(), {e.term, e.value});
    }
    return q;
  }
};

// Offsets of the term word and role word of each process block.
std::vector<std::pair<size_t, size_t>> TermRoleOffsets(const ModelState& q, int n) {
  std::vector<std::pair<size_t, size_t>> out;
  size_t i = 3;
  for (int p = 0; p < n && i + 3 < q.words.size(); ++p) {
    out.emplace_back(i, i + 1);
    i += 4 + 2 * static_cast<size_t>(q.words[i + 3]);
  }
  return out;
}

bool DiffersOnlyInFollowerTerms(const ModelState& a, const ModelState& b, int n) {
  if (a.words.size() != b.words.size()) return false;
  const auto offsets = TermRoleOffsets(a, n);
  if (offsets != TermRoleOffsets(b, n)) return false;
  std::vector<bool> maskable(a.words.size(), false);
  for (auto [term, role] : offsets) {
    if (a.words[role] != kLeader && b.words[role] != kLeader) maskable[term] = true;
  }
  for (size_t i = 0; i < a.words.size(); ++i) {
    if (a.words[i] != b.words[i] && !maskable[i]) return false;
  }
  return true;
}

class RaftModel final : public AbstractModel {
 public:
  RaftModel(int procs, int requests) : n_(procs), requests_(requests) {}

  std::string_view name() const override { return "raftlite"; }

  std::vector<ModelState> Initial() const override {
    RaftView v;
    v.procs.resize(static_cast<size_t>(n_));
    return {v.Encode()};
  }

  void Successors(const ModelState& q, const ModelAction& a,
                  std::vector<ModelState>& out) const override {
    const std::string& act = a.name;
    const int64_t p = a.args.Int("p");
    if (p < 0 || p >= n_) return;
    RaftView v = RaftView::Decode(q, n_);
    const int64_t bit = int64_t{1} << p;
    ProcView& me = v.procs[p];
    if (act == "AddProcess") {
      if (v.added & bit) return;
      v.added |= bit;
      v.active |= bit;
      out.push_back(v.Encode());
      return;
    }
    if (act == "Restart") {
      if (!(v.added & bit) || (v.active & bit)) return;
      v.active |= bit;
      out.push_back(v.Encode());
      return;
    }
    if (!(v.active & bit)) return;
    if (act == "Crash") {
      v.active &= ~bit;
      me.role = kFollower;
    } else if (act == "Timeout") {
      if (me.role != kLeader) {
        me.term += 1;
        me.role = kCandidate;
      }
    } else if (act == "ElectLeader") {
      if (me.role != kCandidate || a.args.Int("term") != me.term) return;
      me.role = kLeader;
    } else if (act == "ClientRequest") {
      if (me.role == kLeader && v.client_next < requests_) me.log.push_back({me.term, v.client_next++});
    } else if (act == "HandleRequestVoteRequest" || act == "HandleRequestVoteResponse" ||
               act == "HandleAppendEntriesResponse" || act == "HandleNilAppendEntriesResponse") {
      const int64_t term = a.args.Int("term");
      if (term > me.term) {
        me.term = term;
        me.role = kFollower;
      }
    } else if (act == "HandleAppendEntriesRequest") {
      if (!AppendEntries(me, a.args)) return;
    } else if (act == "UpdateSnapshotIndex") {
      const int64_t idx = a.args.Int("index");
      if (idx < me.snapshot || idx > static_cast<int64_t>(me.log.size())) return;
      me.snapshot = idx;
    } else {
      throw MappingError("raft model: unknown action " + act);
    }
    out.push_back(v.Encode());
  }

  std::vector<ModelAction> Actions(const ModelState& q) const override {
    const RaftView v = RaftView::Decode(q, n_);
    std::vector<int64_t> terms;
    for (const ProcView& p : v.procs) terms.push_back(p.term);
    std::sort(terms.begin(), terms.end());
    terms.erase(std::unique(terms.begin(), terms.end()), terms.end());

    std::vector<ModelAction> out;
    for (int64_t p = 0; p < n_; ++p) {
      const ProcView& me = v.procs[p];
      out.push_back({"AddProcess", Fields{{"p", p}}});
      out.push_back({"Crash", Fields{{"p", p}}});
      out.push_back({"Restart", Fields{{"p", p}}});
      out.push_back({"Timeout", Fields{{"p", p}}});
      out.push_back({"ClientRequest", Fields{{"p", p}}});
      out.push_back({"ElectLeader", Fields{{"p", p}, {"term", me.term}}});
      for (int64_t t : terms) {
        out.push_back({"HandleRequestVoteRequest", Fields{{"p", p}, {"term", t}}});
      }
      for (int64_t idx = me.snapshot + 1; idx <= static_cast<int64_t>(me.log.size()); ++idx) {
        out.push_back({"UpdateSnapshotIndex", Fields{{"index", idx}, {"p", p}}});
      }
      for (int64_t l = 0; l < n_; ++l) {
        const ProcView& lead = v.procs[l];
        if (l == p || lead.role != kLeader) continue;
        for (size_t prev = 0; prev <= lead.log.size(); ++prev) {
          out.push_back({"HandleAppendEntriesRequest",
                         Fields{{"entries", EncodeEntries(lead.log, prev)},
                                {"p", p},
                                {"prevIndex", static_cast<int64_t>(prev)},
                                {"prevTerm", prev == 0 ? 0 : lead.log[prev - 1].term},
                                {"term", lead.term}}});
        }
      }
    }
    return out;
  }

  std::vector<ModelState> Abstract(const std::vector<ModelState>& path) const override {
    return AbstractRaftStates(path, n_);
  }

  std::string Describe(const ModelState& q) const override {
    const RaftView v = RaftView::Decode(q, n_);
    static constexpr const char* kRoles[] = {"F", "C", "L"};
    std::ostringstream o;
    o << "active=" << v.active << " next=" << v.client_next;
    for (size_t p = 0; p < v.procs.size(); ++p) {
      const ProcView& me = v.procs[p];
      o << " p" << p << "[" << kRoles[me.role] << " t" << me.term << " s" << me.snapshot << " "
        << EncodeEntries(me.log, 0) << "]";
    }
    return o.str();
  }

 private:
  // Mirrors the follower side of AppendEntries. Returns false when the
  // message is inconsistent with the state (cannot have been sent).
  static bool AppendEntries(ProcView& me, const Fields& args) {
    const int64_t term = args.Int("term");
    if (term < me.term) return true;
    if (term > me.term || me.role == kCandidate) {
      me.term = term;
      me.role = kFollower;
    }
    if (me.role == kLeader) return true;
    const int64_t prev = args.Int("prevIndex");
    const auto last = static_cast<int64_t>(me.log.size());
    auto term_at = [&](int64_t i) { return i == 0 ? 0 : me.log[i - 1].term; };
    if (prev > last || term_at(prev) != args.Int("prevTerm")) return true;
    const std::vector<Entry> entries = DecodeEntries(args.Str("entries"));
    int64_t index = prev;
    for (const Entry& e : entries) {
      ++index;
      if (index <= last && term_at(index) != e.term && index <= me.snapshot) return true;
    }
    index = prev;
    for (const Entry& e : entries) {
      ++index;
      if (index <= static_cast<int64_t>(me.log.size())) {
        if (term_at(index) == e.term) continue;
        me.log.resize(static_cast<size_t>(index - 1));
      }
      me.log.push_back(e);
    }
    return true;
  }

  int n_;
  int requests_;
};

}  // namespace

std::vector<ModelState> AbstractRaftStates(const std::vector<ModelState>& path, int procs) {
  std::vector<ModelState> out;
  out.reserve(path.size());
  for (const ModelState& q : path) {
    if (!out.empty() && DiffersOnlyInFollowerTerms(out.back(), q, procs)) {
      out.push_back(out.back());
    } else {
      out.push_back(q);
    }
  }
  return out;
}

std::unique_ptr<SystemUnderTest> BuildRaftLite(int procs, int requests, bool quorum_bug,
                                               int snapshot_threshold) {
  if (procs < 3 || procs % 2 == 0) throw ParamError("raftlite: procs must be odd and >= 3");
  if (procs > 31) throw ParamError("raftlite: procs > 31 not supported");
  if (requests < 1) throw ParamError("raftlite: requests must be >= 1");
  if (snapshot_threshold < 1) throw ParamError("raftlite: snapshot threshold must be >= 1");
  return std::make_unique<RaftSystem>(procs, requests, quorum_bug, snapshot_threshold);
}

std::unique_ptr<AbstractModel> BuildRaftModel(int procs, int requests) {
  if (procs < 1 || procs > 31 || requests < 1) throw ParamError("raft model: bad parameters");
  return std::make_unique<RaftModel>(procs, requests);
}

}  // namespace modelfuzz
