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

#include "modelfuzz/stats.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <thread>

#include "modelfuzz/errors.h"
#include "modelfuzz/hash.h"

namespace modelfuzz {

namespace {

void RequireSamples(std::span<const double> xs, std::span<const double> ys, const char* what) {
  if (xs.empty() || ys.empty()) throw ParamError(std::string(what) + ": empty sample");
}

// Doubled midranks of the pooled sample (always integers).
std::vector<int64_t> DoubledRanks(const std::vector<double>& pooled) {
  const size_t n = pooled.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return pooled[a] < pooled[b]; });
  std::vector<int64_t> rank2(n);
  for (size_t i = 0; i < n;) {
    size_t j = i;
    while (j < n && pooled[order[j]] == pooled[order[i]]) ++j;
    // Ranks i+1..j share the midrank (i+1+j)/2.
    for (size_t k = i; k < j; ++k) rank2[order[k]] = static_cast<int64_t>(i + 1 + j);
    i = j;
  }
  return rank2;
}

}  // namespace

double A12(std::span<const double> xs, std::span<const double> ys) {
  RequireSamples(xs, ys, "a12");
  double wins = 0;
  for (double x : xs) {
    for (double y : ys) {
      if (x > y) {
        wins += 1;
      } else if (x == y) {
        wins += 0.5;
      }
    }
  }
  return wins / (static_cast<double>(xs.size()) * static_cast<double>(ys.size()));
}

MannWhitneyResult MannWhitneyU(std::span<const double> xs, std::span<const double> ys) {
  RequireSamples(xs, ys, "mann_whitney_u");
  const size_t n1 = xs.size();
  const size_t n2 = ys.size();
  const size_t n = n1 + n2;
  std::vector<double> pooled(xs.begin(), xs.end());
  pooled.insert(pooled.end(), ys.begin(), ys.end());
  const std::vector<int64_t> rank2 = DoubledRanks(pooled);

  // 2U = 2R1 - n1(n1+1).
  int64_t r1x2 = 0;
  for (size_t i = 0; i < n1; ++i) r1x2 += rank2[i];
  const int64_t offset2 = static_cast<int64_t>(n1 * (n1 + 1));
  MannWhitneyResult out;
  out.u = static_cast<double>(r1x2 - offset2) / 2.0;
  const double mean = static_cast<double>(n1 * n2) / 2.0;
  const double dev = std::fabs(out.u - mean);

  if (n <= kExactMannWhitneyLimit) {
    // ways[k][s]: subsets of size k whose doubled rank sum is s.
    const int64_t max_sum = std::accumulate(rank2.begin(), rank2.end(), int64_t{0});
    std::vector<std::vector<double>> ways(n1 + 1, std::vector<double>(max_sum + 1, 0.0));
    ways[0][0] = 1;
    for (size_t i = 0; i < n; ++i) {
      const int64_t r = rank2[i];
      for (size_t k = std::min(i + 1, n1); k >= 1; --k) {
        for (int64_t s = max_sum; s >= r; --s) ways[k][s] += ways[k - 1][s - r];
      }
    }
    double total = 0;
    double extreme = 0;
    for (int64_t s = 0; s <= max_sum; ++s) {
      const double c = ways[n1][s];
      if (c == 0) continue;
      total += c;
      const double u = static_cast<double>(s - offset2) / 2.0;
      if (std::fabs(u - mean) >= dev - 1e-9) extreme += c;
    }
    out.exact = true;
    out.p_two_sided = std::min(1.0, extreme / total);
    return out;
  }

  std::map<double, int64_t> ties;
  for (double v : pooled) ++ties[v];
  double tie_term = 0;
  for (const auto& [v, t] : ties) {
    tie_term += static_cast<double>(t * t * t - t);
  }
  const double nn = static_cast<double>(n);
  const double var = static_cast<double>(n1 * n2) / 12.0 * ((nn + 1) - tie_term / (nn * (nn - 1)));
  if (var <= 0) {
    out.p_two_sided = 1;
    return out;
  }
  const double z = std::max(0.0, dev - 0.5) / std::sqrt(var);
  out.p_two_sided = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
  return out;
}

double Median(std::vector<double> v) {
  if (v.empty()) throw ParamError("median: empty sample");
  std::sort(v.begin(), v.end());
  const size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : (v[m - 1] + v[m]) / 2.0;
}

double Mean(std::span<const double> v) {
  if (v.empty()) throw ParamError("mean: empty sample");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

const StrategyRuns& ComparisonResult::Of(Notion n) const {
  for (const StrategyRuns& s : strategies) {
    if (s.notion == n) return s;
  }
  throw ParamError("comparison has no strategy '" + std::string(NotionName(n)) + "'");
}

const PairwiseStat& ComparisonResult::Pair(std::string_view metric, Notion a, Notion b) const {
  for (const PairwiseStat& p : pairwise) {
    if (p.metric == metric && p.a == a && p.b == b) return p;
  }
  throw ParamError("comparison has no pair for metric '" + std::string(metric) + "'");
}

nlohmann::ordered_json ComparisonResult::ToJson() const {
  nlohmann::ordered_json j;
  nlohmann::ordered_json strat = nlohmann::ordered_json::object();
  for (const StrategyRuns& s : strategies) {
    nlohmann::ordered_json e;
    e["seeds"] = s.seeds;
    e["final_coverage"] = s.final_coverage;
    e["model_states"] = s.model_states;
    e["first_bug"] = s.first_bug;
    e["found"] = s.found;
    e["mean_first_bug"] = s.mean_first_bug;
    strat[std::string(NotionName(s.notion))] = std::move(e);
  }
  j["strategies"] = std::move(strat);
  nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
  for (const PairwiseStat& p : pairwise) {
    nlohmann::ordered_json e;
    e["metric"] = p.metric;
    e["a"] = NotionName(p.a);
    e["b"] = NotionName(p.b);
    e["U"] = p.mw.u;
    e["p"] = p.mw.p_two_sided;
    e["exact"] = p.mw.exact;
    e["a12"] = p.a12;
    pairs.push_back(std::move(e));
  }
  j["pairwise"] = std::move(pairs);
  return j;
}

ComparisonResult CompareStrategies(const CompareConfig& cfg) {
  if (cfg.runs < 2) throw ConfigError("compare: runs must be >= 2");
  if (cfg.notions.empty()) throw ConfigError("compare: no strategies given");
  if (cfg.workers < 1) throw ConfigError("compare: workers must be >= 1");
  ValidateCampaign(cfg.base);

  struct Job {
    size_t strategy;
    int run;
    CampaignConfig campaign;
  };
  std::vector<Job> jobs;
  ComparisonResult result;
  for (size_t si = 0; si < cfg.notions.size(); ++si) {
    StrategyRuns sr;
    sr.notion = cfg.notions[si];
    const std::string name(NotionName(sr.notion));
    for (int r = 0; r < cfg.runs; ++r) {
      CampaignConfig c = cfg.base;
      c.notion = sr.notion;
      c.seed = DeriveSeed(cfg.base.seed, name, static_cast<uint64_t>(r));
      c.out_dir.clear();
      if (!cfg.out_dir.empty()) {
        c.out_dir = (std::filesystem::path(cfg.out_dir) / name / ("run" + std::to_string(r))).string();
      }
      sr.seeds.push_back(c.seed);
      jobs.push_back({si, r, std::move(c)});
    }
    sr.final_coverage.assign(cfg.runs, 0);
    sr.model_states.assign(cfg.runs, 0);
    sr.first_bug.assign(cfg.runs, 0);
    result.strategies.push_back(std::move(sr));
  }

  auto finish = [&](const Job& job, const CampaignResult& cr) {
    StrategyRuns& sr = result.strategies[job.strategy];
    sr.final_coverage[job.run] = static_cast<double>(cr.total_coverage);
    sr.model_states[job.run] = static_cast<double>(cr.model_states);
    const std::optional<int64_t> first = cr.FirstBug(cfg.bug_prefix);
    sr.first_bug[job.run] = static_cast<double>(first.value_or(cfg.base.budget + 1));
  };

  if (cfg.workers == 1) {
    for (const Job& job : jobs) finish(job, RunCampaign(job.campaign));
  } else {
    std::mutex mu;
    size_t next = 0;
    std::exception_ptr error;
    std::vector<std::thread> pool;
    for (int w = 0; w < cfg.workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          size_t i;
          {
            std::lock_guard<std::mutex> lock(mu);
            if (next >= jobs.size() || error) return;
            i = next++;
          }
          try {
            CampaignResult cr = RunCampaign(jobs[i].campaign);
            std::lock_guard<std::mutex> lock(mu);
            finish(jobs[i], cr);
          } catch (...) {
            std::lock_guard<std::mutex> lock(mu);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
    for (std::thread& t : pool) t.join();
    if (error) std::rethrow_exception(error);
  }

  for (StrategyRuns& sr : result.strategies) {
    double sum = 0;
    for (double f : sr.first_bug) {
      if (f <= static_cast<double>(cfg.base.budget)) {
        ++sr.found;
        sum += f;
      }
    }
    sr.mean_first_bug = sr.found > 0 ? sum / sr.found : 0;
  }
  for (const char* metric : {"final_coverage", "model_states", "first_bug"}) {
    for (size_t a = 0; a < result.strategies.size(); ++a) {
      for (size_t b = a + 1; b < result.strategies.size(); ++b) {
        const StrategyRuns& sa = result.strategies[a];
        const StrategyRuns& sb = result.strategies[b];
        auto pick = [&](const StrategyRuns& s) -> const std::vector<double>& {
          const std::string_view m(metric);
          if (m == "final_coverage") return s.final_coverage;
          if (m == "model_states") return s.model_states;
          return s.first_bug;
        };
        PairwiseStat p;
        p.metric = metric;
        p.a = sa.notion;
        p.b = sb.notion;
        p.mw = MannWhitneyU(pick(sa), pick(sb));
        p.a12 = A12(pick(sa), pick(sb));
        result.pairwise.push_back(std::move(p));
      }
    }
  }

  if (!cfg.out_dir.empty()) {
    const std::filesystem::path dir(cfg.out_dir);
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "comparison.json") << result.ToJson().dump(2) << "\n";
    std::ofstream csv(dir / "runs.csv");
    csv << "strategy,run,seed,final_coverage,model_states,first_bug\n";
    for (const StrategyRuns& s : result.strategies) {
      for (int r = 0; r < cfg.runs; ++r) {
        csv << NotionName(s.notion) << ',' << r << ',' << s.seeds[r] << ',' << s.final_coverage[r]
            << ',' << s.model_states[r] << ',' << s.first_bug[r] << '\n';
      }
    }
  }
  return result;
}

}  // namespace modelfuzz
