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

#ifndef MODELFUZZ_STATS_H_
#define MODELFUZZ_STATS_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "modelfuzz/coverage.h"
#include "modelfuzz/fuzzer.h"

namespace modelfuzz {

struct MannWhitneyResult {
  double u = 0;  // #{(x, y): x > y} + ties / 2
  double p_two_sided = 1;
  bool exact = false;
};

// Samples with at most this many pooled values get an exact p-value.
inline constexpr size_t kExactMannWhitneyLimit = 20;

MannWhitneyResult MannWhitneyU(std::span<const double> xs, std::span<const double> ys);

// Vargha-Delaney effect size: probability that a draw from xs beats one
// from ys, ties counted half.
double A12(std::span<const double> xs, std::span<const double> ys);

struct CompareConfig {
  CampaignConfig base;  // notion and seed are overridden per run
  std::vector<Notion> notions;
  int runs = 10;
  // Violation key prefix for the first-bug metric; empty matches any.
  std::string bug_prefix;
  int workers = 1;  // runs executed concurrently
  std::string out_dir;
};

struct StrategyRuns {
  Notion notion = Notion::kRandom;
  std::vector<uint64_t> seeds;
  std::vector<double> final_coverage;
  std::vector<double> model_states;
  std::vector<double> first_bug;  // budget + 1 when never found
  int found = 0;
  double mean_first_bug = 0;  // over runs that found the bug; 0 if none
};

struct PairwiseStat {
  std::string metric;
  Notion a = Notion::kModel;
  Notion b = Notion::kRandom;
  MannWhitneyResult mw;
  double a12 = 0.5;  // a12(a, b)
};

struct ComparisonResult {
  std::vector<StrategyRuns> strategies;
  std::vector<PairwiseStat> pairwise;

  const StrategyRuns& Of(Notion n) const;
  const PairwiseStat& Pair(std::string_view metric, Notion a, Notion b) const;
  nlohmann::ordered_json ToJson() const;
};

double Median(std::vector<double> v);
double Mean(std::span<const double> v);

ComparisonResult CompareStrategies(const CompareConfig& cfg);

}  // namespace modelfuzz

#endif  // MODELFUZZ_STATS_H_
