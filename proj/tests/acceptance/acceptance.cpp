// Copyright 2026 The netlang Authors
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
// non-zero if any fails. Tolerances and budgets are fixed below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "netlang/experiment.hpp"
#include "netlang/io.hpp"
#include "oracles.hpp"

using namespace netlang;

namespace {

// Graph invariants.
constexpr std::size_t kGraphSeeds = 100;
constexpr double kErSigmas = 3.0;
constexpr double kGraphBudgetSec = 5.0;

// Centrality oracles.
constexpr int kOracleGraphs = 50;
constexpr std::size_t kOracleMaxNodes = 8;
constexpr double kBetweennessTol = 1e-10;
constexpr double kPageRankTol = 1e-8;
constexpr double kPageRankSumTol = 1e-9;
constexpr double kCentralityBudgetSec = 10.0;

// Sampler statistics.
constexpr std::size_t kSamplerDraws = 100000;
constexpr double kSamplerTol = 0.01;

// Gradient check.
constexpr std::size_t kFdCoordinates = 100;
constexpr std::size_t kFdBatch = 8;
constexpr double kFdEps = 1e-5;
constexpr double kFdRelTol = 1e-4;
constexpr double kFdRelFloor = 1e-5;
constexpr double kFdBudgetSec = 60.0;

// Chance level.
constexpr std::size_t kChanceGames = 100000;
constexpr double kChanceTol = 0.01;

// Single-pair learning.
constexpr std::size_t kPairGames = 20000;
constexpr std::size_t kPairWindow = 1000;
constexpr double kPairThreshold = 0.5;
constexpr double kPairBudgetSec = 600.0;

// Topology ordering and role balance.
constexpr double kOrderingBudgetSec = 7200.0;
constexpr double kRoleTol = 0.02;

const std::vector<std::uint64_t> kSeeds{0, 1, 2};

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Outcome graph_invariants() {
  const auto t0 = Clock::now();
  ExperimentConfig cfg;  // n = 16, e = 32
  bool ws_ok = true, ba_ok = true;
  double er_total = 0.0;
  for (std::uint64_t s = 0; s < kGraphSeeds; ++s) {
    for (auto kind : {TopologyKind::ER, TopologyKind::WS, TopologyKind::BA}) {
      cfg.topology = kind;
      Rng rng = make_rng(s, "graph");
      const std::size_t e = build_topology(cfg, rng).graph->edge_count();
      if (kind == TopologyKind::WS) ws_ok = ws_ok && e == 32;
      if (kind == TopologyKind::BA) ba_ok = ba_ok && e == 28;
      if (kind == TopologyKind::ER) er_total += static_cast<double>(e);
    }
  }
  const double er_mean = er_total / kGraphSeeds;
  const double sigma = std::sqrt(120 * 0.25 * 0.75 / kGraphSeeds);
  const bool er_ok = std::abs(er_mean - 30.0) <= kErSigmas * sigma;
  const double secs = seconds_since(t0);
  std::ostringstream os;
  os << "WS always 32: " << (ws_ok ? "yes" : "no") << ", BA always 28: " << (ba_ok ? "yes" : "no")
     << ", ER mean " << er_mean << " (30 +/- " << kErSigmas * sigma << "), " << fmt("%.2f", secs)
     << " s";
  return {ws_ok && ba_ok && er_ok && secs < kGraphBudgetSec, os.str()};
}

Outcome centrality_oracles() {
  const auto t0 = Clock::now();
  Rng rng = make_rng(2024, "acceptance-centrality");
  double bc_err = 0.0, pr_err = 0.0, sum_err = 0.0;
  for (int i = 0; i < kOracleGraphs; ++i) {
    const Graph g = oracle::random_small_graph(rng, kOracleMaxNodes);
    const auto bc = betweenness_centrality(g), bc_ref = oracle::betweenness_bruteforce(g);
    const auto pr = pagerank(g), pr_ref = oracle::pagerank_dense(g, 0.85);
    for (std::size_t v = 0; v < g.size(); ++v) {
      bc_err = std::max(bc_err, std::abs(bc[v] - bc_ref[v]));
      pr_err = std::max(pr_err, std::abs(pr[v] - pr_ref[v]));
    }
    sum_err = std::max(sum_err, std::abs(std::accumulate(pr.begin(), pr.end(), 0.0) - 1.0));
  }
  const double secs = seconds_since(t0);
  std::ostringstream os;
  os << "max |betweenness - oracle| " << fmt("%.2e", bc_err) << ", max |pagerank - oracle| "
     << fmt("%.2e", pr_err) << ", max |sum - 1| " << fmt("%.2e", sum_err) << ", " << fmt("%.2f", secs)
     << " s";
  return {bc_err <= kBetweennessTol && pr_err <= kPageRankTol && sum_err <= kPageRankSumTol &&
              secs < kCentralityBudgetSec,
          os.str()};
}

Outcome sampler_statistics() {
  double worst = 0.0;
  bool all_edges = true;
  std::size_t checked = 0;
  for (const Graph& g : {oracle::star(4), oracle::complete(5)}) {
    const auto scores = degree_centrality(g);
    const auto expected = softmax(scores);
    Rng rng = make_rng(g.edge_count(), "acceptance-sampler");
    const auto sched = sample_schedule(g, scores, kSamplerDraws, rng);
    std::vector<double> freq(g.size(), 0.0);
    for (auto [u, v] : sched) {
      all_edges = all_edges && g.has_edge(u, v);
      freq[u] += 1.0 / kSamplerDraws;
      ++checked;
    }
    for (std::size_t v = 0; v < g.size(); ++v) worst = std::max(worst, std::abs(freq[v] - expected[v]));
  }
  std::ostringstream os;
  os << "max |frequency - softmax| " << fmt("%.4f", worst) << " over star S5 and K5, " << checked
     << " sampled pairs all edges: " << (all_edges ? "yes" : "no");
  return {worst <= kSamplerTol && all_edges, os.str()};
}

Outcome gradient_check() {
  const auto t0 = Clock::now();
  Rng data_rng = make_rng(31, "dataset");
  const Dataset data = generate_dataset(DatasetConfig{}, data_rng);
  AgentShape shape;
  shape.factors = data.factors;
  Rng ra = make_rng(31, "agent", 0), rb = make_rng(31, "agent", 1);
  const AgentParams a = init_params(shape, ra), b = init_params(shape, rb);
  Rng rng = make_rng(31, "acceptance-fd");
  const std::array<std::size_t, 2> steps{0, 0};
  const auto fb = oracle::play_fixed_batch(a, b, shape, data, kFdBatch, 4, steps, rng);
  const auto grads = oracle::update_gradient(a, b, fb, steps);
  double worst = 0.0;
  std::string worst_name;
  std::array<std::size_t, 4> per_group{};
  std::size_t nonzero = 0;
  for (const auto& c : oracle::sample_coordinates(a, kFdCoordinates, rng, oracle::used_tokens(fb))) {
    const double numeric =
        oracle::central_difference(a, b, shape, fb.games, fb.baseline, fb.alphas, c, kFdEps);
    AgentParams g = grads[c.agent];
    const double analytic = oracle::coordinate_ref(g, c);
    const double err = oracle::relative_error(analytic, numeric, kFdRelFloor);
    nonzero += std::abs(analytic) > kFdRelFloor;
    ++per_group[static_cast<std::size_t>(c.group)];
    if (err > worst) {
      worst = err;
      worst_name = c.name;
    }
  }
  const double secs = seconds_since(t0);
  std::ostringstream os;
  os << kFdCoordinates << " coordinates (" << per_group[0] << " encoder, " << per_group[1]
     << " embedding, " << per_group[2] << " sender, " << per_group[3] << " receiver; " << nonzero
     << " with |gradient| > " << kFdRelFloor << "), max relative error " << fmt("%.2e", worst) << " at " << worst_name << ", " << fmt("%.2f", secs) << " s";
  return {worst < kFdRelTol && secs < kFdBudgetSec, os.str()};
}

Outcome chance_level() {
  ExperimentConfig cfg;
  const TrainedPopulation pop = prepare_population(cfg, 0);
  AgentShape shape = cfg.agent;
  shape.factors = pop.dataset.factors;
  Rng rng = make_rng(0, "acceptance-chance");
  long total = 0;
  for (std::size_t i = 0; i < kChanceGames; ++i) {
    const auto pair = random_baseline_schedule(cfg.n_agents, 1, rng)[0];
    const bool flip = coin_flip(rng);
    const auto& s = pop.agents[flip ? pair.first : pair.second];
    const auto& r = pop.agents[flip ? pair.second : pair.first];
    total += play_game(s, r, shape, sample_game(pop.dataset, Split::Train, cfg.x_size, rng), rng).reward;
  }
  const double mean = static_cast<double>(total) / kChanceGames;
  return {std::abs(mean - 0.25) <= kChanceTol,
          "untrained mean reward " + fmt("%.4f", mean) + " over " + std::to_string(kChanceGames) +
              " games (0.25 +/- " + fmt("%.2f", kChanceTol) + ")"};
}

Outcome single_pair_learning() {
  const auto t0 = Clock::now();
  ExperimentConfig cfg;
  cfg.n_agents = 2;
  int reached = 0;
  std::ostringstream os;
  os << "peak " << kPairWindow << "-game mean per seed:";
  for (std::uint64_t seed : kSeeds) {
    Rng data_rng = make_rng(seed, "dataset");
    const Dataset data = generate_dataset(cfg.dataset, data_rng);
    AgentShape shape = cfg.agent;
    shape.factors = data.factors;
    std::vector<AgentParams> agents;
    for (std::size_t i = 0; i < 2; ++i) {
      Rng r = make_rng(seed, "agent", i);
      agents.push_back(init_params(shape, r, cfg.init));
    }
    std::vector<std::size_t> steps(2, 0);
    std::vector<double> rewards;
    Rng rng = make_rng(seed, "train-games");
    std::size_t index = 0;
    train_pair(cfg, seed, Phase::Train, 0, 0, 1, kPairGames, data, Split::Train, agents, steps, rng,
               index, [&](const RunRecord& r) { rewards.push_back(r.reward); });
    const auto curve = windowed_mean(rewards, kPairWindow);
    const double peak = *std::max_element(curve.begin(), curve.end());
    reached += peak > kPairThreshold;
    os << ' ' << fmt("%.3f", peak);
  }
  const double secs = seconds_since(t0);
  os << "; " << reached << "/3 above " << kPairThreshold << ", " << fmt("%.1f", secs) << " s";
  return {reached >= 2 && secs < kPairBudgetSec, os.str()};
}

struct TopologyRuns {
  std::vector<TrainingResult> ba, random;
  double seconds = 0.0;
};

TopologyRuns train_topologies() {
  const auto t0 = Clock::now();
  TopologyRuns out;
  ExperimentConfig cfg;  // n = 16, e = 32, degree centrality, 2048 games per pairing
  for (std::uint64_t seed : kSeeds) {
    cfg.topology = TopologyKind::BA;
    out.ba.push_back(run_training(cfg, seed));
    cfg.topology = TopologyKind::RandomBaseline;
    out.random.push_back(run_training(cfg, seed));
  }
  out.seconds = seconds_since(t0);
  return out;
}

double final_tenth_mean(const std::vector<RunRecord>& records) {
  std::vector<double> r;
  for (const auto& rec : records) r.push_back(rec.reward);
  return summarize_rewards(0, r, 100).final_10pct_mean;
}

Outcome topology_ordering(const TopologyRuns& runs) {
  int wins = 0;
  std::ostringstream os;
  os << "final-10% mean BA vs random:";
  for (std::size_t i = 0; i < kSeeds.size(); ++i) {
    const double ba = final_tenth_mean(runs.ba[i].records);
    const double rnd = final_tenth_mean(runs.random[i].records);
    wins += ba >= rnd;
    os << " seed " << kSeeds[i] << ' ' << fmt("%.3f", ba) << '/' << fmt("%.3f", rnd);
  }
  os << "; BA ahead in " << wins << "/3, " << fmt("%.0f", runs.seconds) << " s";
  return {wins >= 2 && runs.seconds < kOrderingBudgetSec, os.str()};
}

Outcome determinism() {
  ExperimentConfig cfg;
  cfg.schedule_size = 4;
  cfg.games_per_pairing = 256;
  cfg.eval_pairs = 2;
  cfg.eval_games = 500;
  bool same = true;
  std::size_t bytes = 0;
  for (auto kind : {TopologyKind::BA, TopologyKind::ER, TopologyKind::RandomBaseline}) {
    cfg.topology = kind;
    std::ostringstream rec1, man1, rec2, man2;
    run_seed(cfg, 7, rec1, man1);
    run_seed(cfg, 7, rec2, man2);
    same = same && rec1.str() == rec2.str() && man1.str() == man2.str();
    bytes += rec1.str().size() + man1.str().size();
  }
  return {same, std::string("two runs per topology (ba, er, random) byte-identical: ") +
                    (same ? "yes" : "no") + " (" + std::to_string(bytes) + " bytes compared per run)"};
}

Outcome role_balance(const TopologyRuns& runs) {
  double worst = 0.0;
  std::size_t agents = 0;
  for (const auto* group : {&runs.ba, &runs.random})
    for (const auto& res : *group) {
      const std::size_t n = res.population.agents.size();
      std::vector<double> sent(n, 0.0), played(n, 0.0);
      for (const auto& r : res.records) {
        sent[r.sender_id] += 1;
        played[r.sender_id] += 1;
        played[r.receiver_id] += 1;
      }
      for (std::size_t i = 0; i < n; ++i) {
        if (played[i] == 0) continue;  // never scheduled
        worst = std::max(worst, std::abs(sent[i] / played[i] - 0.5));
        ++agents;
      }
    }
  return {worst <= kRoleTol, "max |sender fraction - 0.5| " + fmt("%.4f", worst) + " over " +
                                 std::to_string(agents) + " scheduled agents in 6 training runs"};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& check) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << id << "] " << name << ": " << o.detail << std::endl;
  };
  report(1, "graph invariants", graph_invariants);
  report(2, "centrality oracle equivalence", centrality_oracles);
  report(3, "sampler statistics", sampler_statistics);
  report(4, "gradient correctness", gradient_check);
  report(5, "chance level", chance_level);
  report(6, "single pair learns", single_pair_learning);
  TopologyRuns runs;
  try {
    runs = train_topologies();
  } catch (const std::exception& e) {
    std::cout << "training runs failed: " << e.what() << std::endl;
  }
  const bool have_runs = runs.ba.size() == kSeeds.size() && runs.random.size() == kSeeds.size();
  report(7, "BA vs random ordering", [&] {
    return have_runs ? topology_ordering(runs) : Outcome{false, "training runs missing"};
  });
  report(8, "determinism", determinism);
  report(9, "role balance", [&] {
    return have_runs ? role_balance(runs) : Outcome{false, "training runs missing"};
  });
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
