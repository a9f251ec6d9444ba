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

#include <array>

#include <gtest/gtest.h>

#include "modelfuzz/benchmarks.h"
#include "modelfuzz/errors.h"
#include "modelfuzz/mapper.h"
#include "modelfuzz/model.h"
#include "oracles.h"

namespace modelfuzz {
namespace {

TEST(BfsReachable, MicroMatchesHandCount) {
  for (int m = 1; m <= 3; ++m) {
    for (int n = 1; n <= 6; ++n) {
      const auto model = BuildMicroModel(m, n);
      const BfsResult r = BfsReachable(*model, -1);
      EXPECT_FALSE(r.truncated);
      EXPECT_EQ(r.states.size(), oracle::MicroReachable(m, n)) << "m=" << m << " n=" << n;
    }
  }
}

TEST(BfsReachable, DepthLimitIsMonotone) {
  const auto model = BuildTpcModel(2, 1, 2);
  size_t prev = 0;
  for (int d = 0; d <= 8; ++d) {
    const size_t now = BfsReachable(*model, d).states.size();
    EXPECT_GE(now, prev);
    prev = now;
  }
  EXPECT_EQ(BfsReachable(*model, 0).states.size(), 1u);
}

TEST(BfsReachable, GuardTruncates) {
  const auto model = BuildTpcModel(3, 2, 3);
  const BfsResult r = BfsReachable(*model, -1, 50);
  EXPECT_TRUE(r.truncated);
  EXPECT_LE(r.states.size(), 50u);
}

TEST(RunActions, FollowsMappedBugPath) {
  const auto model = BuildMicroModel(1, 1);
  std::vector<ModelAction> acts = {
      {"Register", Fields{{"p", int64_t{1}}}},
      {"Register", Fields{{"p", int64_t{2}}}},
      {"Request", Fields{{"r", int64_t{0}}}},
      {"Terminate", Fields{{"w", int64_t{1}}}},
      {"Flush", Fields{{"w", int64_t{1}}}},
      {"Execute", Fields{{"r", int64_t{0}}, {"task", int64_t{1}}}},
  };
  const RunResult r = RunActions(*model, acts);
  EXPECT_TRUE(r.unmatched.empty());
  EXPECT_EQ(r.visited.size(), 7u);
  EXPECT_EQ(r.max_frontier, 1u);
  EXPECT_EQ(r.path.size(), acts.size() + 1);
}

TEST(RunActions, DisabledActionIsUnmatched) {
  const auto model = BuildMicroModel(1, 1);
  std::vector<ModelAction> acts = {{"Flush", Fields{{"w", int64_t{1}}}},
                                   {"Register", Fields{{"p", int64_t{1}}}}};
  const RunResult r = RunActions(*model, acts);
  EXPECT_EQ(r.unmatched, (std::vector<int>{0}));
  EXPECT_EQ(r.visited.size(), 2u);
}

TEST(RunActions, UnknownActionThrows) {
  const auto model = BuildMicroModel(1, 1);
  std::vector<ModelAction> acts = {{"Teleport", {}}};
  EXPECT_THROW(RunActions(*model, acts), MappingError);
}

TEST(Fingerprint, DependsOnModelNameAndWords) {
  const auto micro = BuildMicroModel(1, 1);
  const auto other = BuildMicroModel(2, 2);
  const ModelState q{{0, 0, 0, 0, 0}};
  EXPECT_EQ(micro->Fingerprint(q), other->Fingerprint(q));
  EXPECT_NE(micro->Fingerprint(q), micro->Fingerprint(ModelState{{2, 0, 0, 0, 0}}));
  const auto tpc = BuildTpcModel(2, 1, 1);
  EXPECT_NE(micro->Fingerprint(q), tpc->Fingerprint(q));
}

TEST(TpcModel, SmallInstanceIsFinite) {
  const auto model = BuildTpcModel(2, 1, 2);
  const BfsResult r = BfsReachable(*model, -1);
  EXPECT_FALSE(r.truncated);
  EXPECT_GT(r.states.size(), 10u);
}

TEST(TpcRequestVars, NonEmptySubset) {
  for (int vars = 1; vars <= 4; ++vars) {
    for (int tx = 0; tx < 20; ++tx) {
      const int mask = TpcRequestVars(tx, vars);
      EXPECT_GE(mask, 1);
      EXPECT_LT(mask, 1 << vars);
    }
  }
}

TEST(RaftVoteQuorum, BothFormulas) {
  // Majority n/2+1 and the seeded n/3+1, checked by direct arithmetic.
  EXPECT_EQ(RaftVoteQuorum(3, false), 2);
  EXPECT_EQ(RaftVoteQuorum(3, true), 2);
  EXPECT_EQ(RaftVoteQuorum(4, false), 3);
  EXPECT_EQ(RaftVoteQuorum(4, true), 2);
  EXPECT_EQ(RaftVoteQuorum(5, false), 3);
  EXPECT_EQ(RaftVoteQuorum(5, true), 2);
}

// Layout for 3 processes with empty logs: [active, added, next] then
// [term, role, snapshot, logLen] per process.
ModelState Raft3(std::array<int64_t, 3> terms, std::array<int64_t, 3> roles) {
  ModelState q{{7, 7, 0}};
  for (int p = 0; p < 3; ++p) {
    q.words.insert(q.words.end(), {terms[p], roles[p], 0, 0});
  }
  return q;
}

TEST(AbstractRaftStates, MergesFollowerTermChanges) {
  const ModelState a = Raft3({1, 1, 1}, {2, 0, 0});
  const ModelState b = Raft3({1, 2, 1}, {2, 0, 0});  // follower term bump
  const ModelState c = Raft3({2, 2, 1}, {2, 0, 0});  // leader term change
  const std::vector<ModelState> out = AbstractRaftStates({a, b, c}, 3);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(out[0], a);
  EXPECT_EQ(out[1], a);
  EXPECT_EQ(out[2], c);
}

TEST(AbstractRaftStates, RoleChangeIsKept) {
  const ModelState a = Raft3({1, 1, 1}, {0, 0, 0});
  const ModelState b = Raft3({1, 1, 1}, {1, 0, 0});
  const std::vector<ModelState> out = AbstractRaftStates({a, b}, 3);
  EXPECT_EQ(out[1], b);
}

TEST(BuildModels, RejectBadParameters) {
  EXPECT_THROW(BuildMicroModel(0, 1), ParamError);
  EXPECT_THROW(BuildTpc(1, 1, 1), ParamError);
  EXPECT_THROW(BuildRaftLite(4, 1, false), ParamError);
  EXPECT_THROW(BuildRaftLite(3, 0, false), ParamError);
  EXPECT_THROW(BuildMicro(1, 0, true), ParamError);
}

}  // namespace
}  // namespace modelfuzz
