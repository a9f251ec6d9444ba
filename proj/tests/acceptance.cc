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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>

#include "modelfuzz/benchmarks.h"
#include "modelfuzz/coverage.h"
#include "modelfuzz/fuzzer.h"
#include "modelfuzz/harness.h"
#include "modelfuzz/mapper.h"
#include "modelfuzz/model.h"
#include "modelfuzz/stats.h"
#include "oracles.h"

namespace modelfuzz {
namespace {

constexpr uint64_t kMasterSeed = 1;

int Jobs() { return std::max(1u, std::min(8u, std::thread::hardware_concurrency())); }

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void Check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

// --- 1 --------------------------------------------------------------------

void Combinatorics(Outcome& o) {
  const auto sut = BuildMicro(1, 1, true);
  const auto model = BuildMicroModel(1, 1);
  const EnumerationResult r = EnumerateOrderings(*sut, BenchmarkKind::kMicro, *model, {});
  const BfsResult bfs = BfsReachable(*model, -1);
  const auto pair = CoveringPair(r, bfs.states);
  o.detail << "orderings=" << r.orderings << " traceClasses=" << r.trace_classes
           << " reachableStates=" << bfs.states.size() << " coveringPair=" << (pair ? "yes" : "no");
  o.Check(r.orderings == 10, "orderings == 10");
  o.Check(r.trace_classes == 8, "trace classes == 8");
  o.Check(bfs.states.size() == oracle::MicroReachable(1, 1), "reachable states == hand count");
  o.Check(pair.has_value(), "two executions cover every reachable state");
}

// --- 2 --------------------------------------------------------------------

void BugReproduction(Outcome& o) {
  const Schedule s = oracle::MicroBugSchedule();
  Harness on(BuildMicro(1, 1, true));
  Harness off(BuildMicro(1, 1, false));
  const ExecutionResult a = on.Execute(s);
  const ExecutionResult b = off.Execute(s);
  const bool found = a.violations.size() == 1 && a.violations[0].Key() == "AssertionFailure:NullDeref";
  o.detail << "bugEnabled violations=" << a.violations.size()
           << " bugDisabled violations=" << b.violations.size();
  o.Check(found, "NullDeref with the bug enabled");
  o.Check(b.violations.empty(), "no violation with the bug disabled");
}

// --- 3 --------------------------------------------------------------------

BenchmarkConfig Bench(BenchmarkKind kind, bool bug) {
  BenchmarkConfig c;
  c.kind = kind;
  c.micro = {2, 5, bug};
  c.raft.quorum_bug = false;
  return c;
}

constexpr BenchmarkKind kAllKinds[] = {BenchmarkKind::kMicro, BenchmarkKind::kTpc,
                                       BenchmarkKind::kRaftLite};

bool EnergyAndAccounting(std::ostringstream& log) {
  bool ok = AssignEnergy(3, 5) == 15 && AssignEnergy(1, 5) == 5 && AssignEnergy(0, 5) == 0;
  for (Notion n : {Notion::kModel, Notion::kTrace, Notion::kLine, Notion::kRandom}) {
    CampaignConfig c;
    c.bench = Bench(BenchmarkKind::kMicro, true);
    c.notion = n;
    c.budget = 2000;
    c.seed = kMasterSeed;
    const CampaignResult r = RunCampaign(c);
    ok &= r.executions + r.queue_remaining ==
          r.initial + r.spawned + r.repopulations * c.corpus_size;
    std::vector<int64_t> expected, got;
    size_t prev = 0;
    for (const TimelinePoint& p : r.timeline) {
      ok &= p.total_coverage >= prev;
      if (p.total_coverage > prev) expected.push_back(5 * static_cast<int64_t>(p.total_coverage - prev));
      prev = p.total_coverage;
    }
    for (const CorpusEntry& e : r.interesting) got.push_back(e.energy);
    ok &= got == expected;
  }
  log << " energy/accounting/monotone=" << (ok ? "ok" : "BAD");
  return ok;
}

bool FifoAndDeterminism(std::ostringstream& log) {
  bool ok = true;
  for (BenchmarkKind kind : kAllKinds) {
    const BenchmarkConfig cfg = Bench(kind, true);
    const GenParams params = DefaultGenParams(cfg);
    Harness h(BuildSystem(cfg));
    Harness twin(BuildSystem(cfg));
    Rng rng(kMasterSeed);
    for (int i = 0; i < 1000; ++i) {
      const Schedule s = GenerateRandomSchedule(params, rng);
      const ExecutionResult r = h.Execute(s);
      const ExecutionResult t = twin.Execute(s);
      ok &= r.trace == t.trace && r.violations == t.violations && r.points_hit == t.points_hit;
      std::map<BufferId, uint64_t> last;
      for (size_t e = 0; e < r.trace.events.size(); ++e) {
        const ConcreteEvent& ev = r.trace.events[e];
        if (ev.kind != EventKind::kMessageDeliver) continue;
        const BufferId b{*ev.send, ev.recv};
        ok &= r.message_seq[e] > last[b];
        last[b] = r.message_seq[e];
      }
    }
  }
  log << " fifo/determinism=" << (ok ? "ok" : "BAD");
  return ok;
}

bool MutationClosure(std::ostringstream& log) {
  bool ok = true;
  for (BenchmarkKind kind : kAllKinds) {
    const BenchmarkConfig cfg = Bench(kind, true);
    const GenParams params = DefaultGenParams(cfg);
    Harness h(BuildSystem(cfg));
    Rng rng(kMasterSeed);
    Schedule s = GenerateRandomSchedule(params, rng);
    for (int i = 0; i < 10000; ++i) {
      if (i % 100 == 0) s = GenerateRandomSchedule(params, rng);
      s = Mutate(s, MutationKind::kAuto, params, rng);
      ok &= !ValidateSchedule(s, params.limits()).has_value();
      if (i % 20 == 0) h.Execute(s);
    }
  }
  log << " mutationClosure=" << (ok ? "ok" : "BAD");
  return ok;
}

bool TraceSoundness(std::ostringstream& log) {
  struct Small {
    std::unique_ptr<SystemUnderTest> sut;
    std::unique_ptr<AbstractModel> model;
    BenchmarkKind kind;
  };
  std::vector<Small> instances;
  instances.push_back({BuildMicro(1, 1, true), BuildMicroModel(1, 1), BenchmarkKind::kMicro});
  instances.push_back({BuildMicro(1, 2, true), BuildMicroModel(1, 2), BenchmarkKind::kMicro});
  instances.push_back({BuildTpc(2, 1, 1), BuildTpcModel(2, 1, 1), BenchmarkKind::kTpc});
  bool ok = true;
  for (const Small& inst : instances) {
    EnumerationOptions opts;
    opts.keep_traces = true;
    const EnumerationResult r = EnumerateOrderings(*inst.sut, inst.kind, *inst.model, opts);
    for (size_t i = 0; i < r.runs.size(); ++i) {
      ok &= r.runs[i].trace.events.size() <= 10;
      const auto closure = oracle::SwapClosure(r.runs[i].trace.events);
      for (size_t j = 0; j < r.runs.size(); ++j) {
        const bool same = closure.count(oracle::Keys(r.runs[j].trace.events)) > 0;
        ok &= same == (r.runs[i].trace_id == r.runs[j].trace_id);
      }
    }
  }
  log << " traceSoundness=" << (ok ? "ok" : "BAD");
  return ok;
}

bool SimulationSoundness(std::ostringstream& log) {
  bool ok = true;
  log << " unmatched=";
  for (BenchmarkKind kind : kAllKinds) {
    const BenchmarkConfig cfg = Bench(kind, false);
    const GenParams params = DefaultGenParams(cfg);
    Harness h(BuildSystem(cfg));
    const auto model = BuildModel(cfg);
    Rng rng(kMasterSeed);
    size_t unmatched = 0;
    for (int i = 0; i < 10000; ++i) {
      const ExecutionResult r = h.Execute(GenerateRandomSchedule(params, rng));
      unmatched += RunActions(*model, MapEvents(kind, r.trace)).unmatched.size();
    }
    log << BenchmarkName(kind) << ":" << unmatched << (kind == BenchmarkKind::kRaftLite ? "" : ",");
    ok &= unmatched == 0;
  }
  return ok;
}

void AlgorithmFidelity(Outcome& o) {
  const auto start = Clock::now();
  std::ostringstream log;
  o.Check(EnergyAndAccounting(log), "energy, accounting and monotonicity");
  o.Check(FifoAndDeterminism(log), "FIFO and determinism");
  o.Check(MutationClosure(log), "mutation closure");
  o.Check(TraceSoundness(log), "trace fingerprint soundness");
  o.Check(SimulationSoundness(log), "simulation soundness");
  const double secs = Seconds(start);
  o.Check(secs < 600, "runtime < 10 min");
  o.detail << log.str().substr(1);
}

// --- 4, 5, 6 ----------------------------------------------------------------

std::string Join(const std::vector<double>& v) {
  std::ostringstream o;
  for (size_t i = 0; i < v.size(); ++i) o << (i ? "," : "") << v[i];
  return o.str();
}

void MicroGuidance(Outcome& o) {
  CompareConfig c;
  c.base.bench = Bench(BenchmarkKind::kMicro, true);
  c.base.budget = 10000;
  c.base.seed = kMasterSeed;
  c.base.stop_on = "AssertionFailure:NullDeref";
  c.notions = {Notion::kModel, Notion::kRandom, Notion::kTrace};
  c.runs = 10;
  c.bug_prefix = c.base.stop_on;
  c.workers = Jobs();
  const ComparisonResult r = CompareStrategies(c);
  const double model = Median(r.Of(Notion::kModel).first_bug);
  const double random = Median(r.Of(Notion::kRandom).first_bug);
  const double trace = Median(r.Of(Notion::kTrace).first_bug);
  // Lower first-bug iterations are better, so the effect size is the
  // probability that a random run needs more iterations than a model run.
  const double a12 = A12(r.Of(Notion::kRandom).first_bug, r.Of(Notion::kModel).first_bug);
  o.detail << "median first bug model=" << model << " random=" << random << " trace=" << trace
           << " A12(model vs random)=" << a12 << " model=[" << Join(r.Of(Notion::kModel).first_bug)
           << "] random=[" << Join(r.Of(Notion::kRandom).first_bug) << "]";
  o.Check(model <= random, "model median <= random median");
  o.Check(model <= trace, "model median <= trace median");
  o.Check(a12 >= 0.6, "A12 >= 0.6");
}

constexpr int64_t kTpcBudget = 2000;

void TpcGuidance(Outcome& o) {
  CompareConfig c;
  c.base.bench.kind = BenchmarkKind::kTpc;
  c.base.bench.tpc = {3, 2, 3};
  c.base.budget = kTpcBudget;
  c.base.seed = kMasterSeed;
  c.notions = {Notion::kModel, Notion::kRandom, Notion::kTrace, Notion::kLine};
  c.runs = 10;
  c.workers = Jobs();
  const ComparisonResult r = CompareStrategies(c);
  const double model = Mean(r.Of(Notion::kModel).model_states);
  const double random = Mean(r.Of(Notion::kRandom).model_states);
  const double trace = Mean(r.Of(Notion::kTrace).model_states);
  const double line = Mean(r.Of(Notion::kLine).model_states);
  const MannWhitneyResult mw =
      MannWhitneyU(r.Of(Notion::kModel).model_states, r.Of(Notion::kTrace).model_states);
  o.detail << "budget=" << kTpcBudget << " mean states model=" << model << " random=" << random
           << " trace=" << trace << " line=" << line << " p(model vs trace)=" << mw.p_two_sided;
  o.Check(model >= random, "model >= random");
  o.Check(model >= trace, "model >= trace");
  o.Check(model >= line, "model >= line");
  o.Check(mw.p_two_sided < 0.05, "Mann-Whitney p < 0.05");
}

void RaftBug(Outcome& o) {
  CompareConfig c;
  c.base.bench.kind = BenchmarkKind::kRaftLite;
  c.base.bench.raft.procs = 5;
  c.base.bench.raft.quorum_bug = true;
  c.base.budget = 10000;
  c.base.seed = kMasterSeed;
  c.base.stop_on = "SafetyProperty:ElectionSafety";
  c.notions = {Notion::kModel, Notion::kRandom, Notion::kTrace, Notion::kLine};
  c.runs = 10;
  c.bug_prefix = c.base.stop_on;
  c.workers = Jobs();
  const ComparisonResult r = CompareStrategies(c);
  for (const StrategyRuns& s : r.strategies) {
    o.detail << NotionName(s.notion) << "=" << s.found << "/10 ";
    o.Check(s.found >= 9, std::string(NotionName(s.notion)) + " finds the bug in >= 9/10 runs");
  }
}

// --- 7 --------------------------------------------------------------------

void StatsKernels(Outcome& o) {
  Rng rng(kMasterSeed);
  int splits = 0;
  int mismatches = 0;
  for (size_t n = 2; n <= 10; ++n) {
    for (size_t n1 = 1; n1 < n; ++n1) {
      for (uint64_t range : {3u, 6u, 1000u}) {
        std::vector<double> xs, ys;
        for (size_t i = 0; i < n1; ++i) xs.push_back(static_cast<double>(rng.Uniform(range)));
        for (size_t i = n1; i < n; ++i) ys.push_back(static_cast<double>(rng.Uniform(range)));
        const MannWhitneyResult r = MannWhitneyU(xs, ys);
        ++splits;
        if (!r.exact || r.u != oracle::PairU(xs, ys) ||
            std::fabs(r.p_two_sided - oracle::PermutationP(xs, ys)) > 1e-12) {
          ++mismatches;
        }
      }
    }
  }
  const std::vector<double> same{2, 7, 1, 8}, hi{5, 6}, lo{1, 2, 3};
  bool identities = A12(same, same) == 0.5 && A12(hi, lo) == 1.0 && A12(lo, hi) == 0.0;
  for (int i = 0; i < 200; ++i) {
    std::vector<double> x, y;
    for (int k = 0; k < 5; ++k) x.push_back(static_cast<double>(rng.Uniform(4)));
    for (int k = 0; k < 6; ++k) y.push_back(static_cast<double>(rng.Uniform(4)));
    identities &= A12(x, y) + A12(y, x) == 1.0;
  }
  const std::vector<double> a{1, 2, 3}, b{4, 5, 6};
  const MannWhitneyResult ex = MannWhitneyU(a, b);
  o.detail << "permutation splits=" << splits << " mismatches=" << mismatches
           << " a12 identities=" << (identities ? "ok" : "BAD") << " U([1,2,3],[4,5,6])=" << ex.u
           << " p=" << ex.p_two_sided;
  o.Check(mismatches == 0, "exact p equals permutation oracle");
  o.Check(identities, "a12 identities");
  o.Check(ex.u == 0 && std::fabs(ex.p_two_sided - 0.1) < 1e-12, "U=0, p=0.1 example");
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<void(Outcome&)> run;
};

}  // namespace
}  // namespace modelfuzz

int main() {
  using namespace modelfuzz;
  const std::vector<Criterion> criteria = {
      {1, "micro(1,1) orderings, trace classes, covering pair", 1, Combinatorics},
      {2, "micro(1,1) bug schedule with and without the bug", 1, BugReproduction},
      {3, "fuzzer algorithm fidelity and property suites", 600, AlgorithmFidelity},
      {4, "micro(2,5) first-bug iteration, model vs random/trace", 900, MicroGuidance},
      {5, "tpc(3,2,3) distinct model states, model vs others", 1200, TpcGuidance},
      {6, "raftlite(5) quorum bug found by every strategy", 1800, RaftBug},
      {7, "Mann-Whitney and A12 kernels", 60, StatsKernels},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    const auto start = Clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double secs = Seconds(start);
    if (secs >= c.limit_seconds) o.Check(false, "runtime limit");
    failed += o.pass ? 0 : 1;
    std::printf("%s criterion %d: %s: %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.str().c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
