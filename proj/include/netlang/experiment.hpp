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

// End-to-end runs: topology, centrality, pair schedule, continual pair-based
// training, and evaluation on fresh pairs.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "netlang/agent.hpp"
#include "netlang/centrality.hpp"
#include "netlang/game_world.hpp"
#include "netlang/graph.hpp"
#include "netlang/pair_sampler.hpp"
#include "netlang/random.hpp"

namespace netlang {

inline constexpr const char* kVersion = "0.1.0";

struct ExperimentConfig {
  TopologyKind topology = TopologyKind::BA;
  CentralityKind centrality = CentralityKind::Degree;
  std::size_t n_agents = 16;
  std::size_t n_edges = 32;
  std::size_t schedule_size = 32;
  std::size_t games_per_pairing = 2048;
  std::size_t minibatch_size = 32;
  std::size_t x_size = 4;
  std::size_t eval_pairs = 10;
  std::size_t eval_games = 10000;
  std::vector<std::uint64_t> seeds{0, 1, 2};
  DatasetConfig dataset;
  AgentShape agent;
  SgdConfig sgd;
  InitScales init;
  double ws_rewire = 0.1;
  PageRankOptions pagerank;

  void validate() const {
    auto positive = [](std::size_t v, const char* name) {
      if (v == 0) throw ConfigError(std::string(name) + " must be positive");
    };
    positive(n_agents, "nodes");
    positive(schedule_size, "schedule-size");
    positive(games_per_pairing, "games-per-pairing");
    positive(minibatch_size, "minibatch-size");
    positive(x_size, "x-size");
    positive(eval_pairs, "eval-pairs");
    positive(eval_games, "eval-games");
    positive(dataset.train_size, "train-size");
    positive(dataset.test_size, "test-size");
    positive(agent.vocab, "vocab");
    positive(agent.max_len, "max-len");
    positive(agent.hidden, "hidden");
    positive(agent.token_dim, "token-dim");
    if (n_agents < 2) throw ConfigError("nodes must be >= 2");
    if (x_size < 2) throw ConfigError("x-size must be >= 2");
    if (agent.vocab < 2) throw ConfigError("vocab must be >= 2");
    if (seeds.empty()) throw ConfigError("at least one seed is required");
    if (games_per_pairing % minibatch_size != 0)
      throw ConfigError("minibatch-size must divide games-per-pairing");
    if (!(sgd.learning_rate > 0.0)) throw ConfigError("learning-rate must be positive");
    if (ws_rewire < 0.0 || ws_rewire > 1.0) throw ConfigError("ws-rewire must lie in [0, 1]");
  }
};

enum class Phase { Train, Eval };

inline std::string to_string(Phase p) { return p == Phase::Train ? "train" : "eval"; }

struct RunRecord {
  std::uint64_t seed = 0;
  Phase phase = Phase::Train;
  std::size_t game_index = 0;
  std::size_t pair_id = 0;
  std::size_t sender_id = 0;
  std::size_t receiver_id = 0;
  int reward = 0;

  bool operator==(const RunRecord&) const = default;
};

using RecordSink = std::function<void(const RunRecord&)>;

// The interaction graph plus how its parameters were resolved.
struct Topology {
  std::optional<Graph> graph;  // empty for the random-pairing baseline
  GraphParams params;
  std::vector<std::string> warnings;
};

inline Topology build_topology(const ExperimentConfig& cfg, Rng& rng) {
  Topology t;
  t.params.n = cfg.n_agents;
  t.params.e = cfg.n_edges;
  t.params.p_rewire_ws = cfg.ws_rewire;
  const std::size_t n = cfg.n_agents, e = cfg.n_edges;
  std::ostringstream w;
  switch (cfg.topology) {
    case TopologyKind::ER: {
      t.params.p_er = er_param(n, e);
      t.graph = generate_er(n, t.params.p_er, rng);
      const double expected = t.params.p_er * static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
      w << "er: p=" << t.params.p_er << " targets " << e << " edges via n^2/2; expected edge count is "
        << expected << ", realized " << t.graph->edge_count();
      t.warnings.push_back(w.str());
      break;
    }
    case TopologyKind::WS:
      t.params.k_ws = ws_param(n, e);
      t.graph = generate_ws(n, t.params.k_ws, cfg.ws_rewire, rng);
      break;
    case TopologyKind::BA: {
      t.params.m_ba = ba_param(n, e);
      t.graph = generate_ba(n, t.params.m_ba, rng);
      if (t.graph->edge_count() != e) {
        w << "ba: m=" << t.params.m_ba << " (floored smaller root) realizes " << t.graph->edge_count()
          << " edges, target " << e;
        t.warnings.push_back(w.str());
      }
      break;
    }
    case TopologyKind::RandomBaseline:
      break;
  }
  return t;
}

struct TrainedPopulation {
  std::vector<AgentParams> agents;
  std::vector<std::size_t> speaker_steps;
  Topology topology;
  CentralityScores scores;
  PairSchedule schedule;
  Dataset dataset;
};

struct TrainingResult {
  TrainedPopulation population;
  std::vector<RunRecord> records;
};

// Graph, scores, schedule and freshly initialized agents for one seed.
inline TrainedPopulation prepare_population(const ExperimentConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  TrainedPopulation pop;
  Rng data_rng = make_rng(seed, "dataset");
  pop.dataset = generate_dataset(cfg.dataset, data_rng);
  Rng graph_rng = make_rng(seed, "graph");
  pop.topology = build_topology(cfg, graph_rng);
  Rng schedule_rng = make_rng(seed, "schedule");
  if (pop.topology.graph) {
    pop.scores = compute_centrality(*pop.topology.graph, cfg.centrality, cfg.pagerank);
    pop.schedule = sample_schedule(*pop.topology.graph, pop.scores, cfg.schedule_size, schedule_rng);
  } else {
    pop.scores = uniform_scores(cfg.n_agents);
    pop.schedule = random_baseline_schedule(cfg.n_agents, cfg.schedule_size, schedule_rng);
  }
  AgentShape shape = cfg.agent;
  shape.factors = cfg.dataset.factors;
  pop.agents.reserve(cfg.n_agents);
  for (std::size_t i = 0; i < cfg.n_agents; ++i) {
    Rng init_rng = make_rng(seed, "agent", i);
    pop.agents.push_back(init_params(shape, init_rng, cfg.init));
  }
  pop.speaker_steps.assign(cfg.n_agents, 0);
  return pop;
}

// Sender flags for one minibatch: half the games each way, in random order.
// An odd leftover game gets a coin flip.
inline std::vector<bool> balanced_roles(std::size_t size, Rng& rng) {
  std::vector<bool> a_sends(size, false);
  for (std::size_t k = 0; k < size / 2; ++k) a_sends[k] = true;
  if (size % 2 == 1) a_sends[size - 1] = coin_flip(rng);
  for (std::size_t k = size; k > 1; --k) {
    const std::size_t j = uniform_index(rng, k);
    const bool tmp = a_sends[k - 1];
    a_sends[k - 1] = a_sends[j];
    a_sends[j] = tmp;
  }
  return a_sends;
}

// Trains one pair in place for `games` games drawn from `split`. Roles are
// assigned per game by balanced_roles; updates happen once per minibatch, and
// a final short minibatch covers any remainder.
inline void train_pair(const ExperimentConfig& cfg, std::uint64_t seed, Phase phase,
                       std::size_t pair_id, std::size_t a, std::size_t b, std::size_t games,
                       const Dataset& data, Split split, std::vector<AgentParams>& agents,
                       std::vector<std::size_t>& speaker_steps, Rng& rng,
                       std::size_t& game_index, const RecordSink& sink) {
  AgentShape shape = cfg.agent;
  shape.factors = data.factors;
  std::vector<PlayedGame> batch;
  batch.reserve(cfg.minibatch_size);
  for (std::size_t start = 0; start < games; start += cfg.minibatch_size) {
    batch.clear();
    const std::size_t size = std::min(cfg.minibatch_size, games - start);
    const std::vector<bool> roles = balanced_roles(size, rng);
    for (std::size_t k = 0; k < size; ++k) {
      const bool a_sends = roles[k];
      GameInstance game = sample_game(data, split, cfg.x_size, rng);
      const AgentParams& s = agents[a_sends ? a : b];
      const AgentParams& r = agents[a_sends ? b : a];
      PlayedGame pg = play_game(s, r, shape, std::move(game), rng);
      pg.first_is_sender = a_sends;
      batch.push_back(std::move(pg));
    }
    apply_update(agents[a], agents[b], batch, cfg.sgd, {speaker_steps[a], speaker_steps[b]});
    for (const auto& pg : batch) {
      const std::size_t sender = pg.first_is_sender ? a : b;
      const std::size_t receiver = pg.first_is_sender ? b : a;
      ++speaker_steps[sender];
      RunRecord rec{seed, phase, game_index++, pair_id, sender, receiver, pg.reward};
      if (sink) sink(rec);
    }
  }
}

// Pair-based continual training: schedule entries are trained in order and
// agents keep their parameters between pairings.
inline TrainingResult run_training(const ExperimentConfig& cfg, std::uint64_t seed,
                                   const RecordSink& sink = {}) {
  TrainingResult result;
  result.population = prepare_population(cfg, seed);
  auto& pop = result.population;
  result.records.reserve(cfg.schedule_size * cfg.games_per_pairing);
  const RecordSink collect = [&](const RunRecord& r) {
    result.records.push_back(r);
    if (sink) sink(r);
  };
  Rng rng = make_rng(seed, "train-games");
  std::size_t game_index = 0;
  for (std::size_t pid = 0; pid < pop.schedule.size(); ++pid) {
    const auto [a, b] = pop.schedule[pid];
    train_pair(cfg, seed, Phase::Train, pid, a, b, cfg.games_per_pairing, pop.dataset, Split::Train,
               pop.agents, pop.speaker_steps, rng, game_index, collect);
  }
  return result;
}

// Uniform unordered pairs drawn for evaluation, ignoring the graph.
inline PairSchedule eval_schedule(const ExperimentConfig& cfg, std::uint64_t seed) {
  Rng rng = make_rng(seed, "eval-pairs");
  return random_baseline_schedule(cfg.n_agents, cfg.eval_pairs, rng);
}

// Called before each evaluation pair trains, with the pair's starting params.
using PairStartHook = std::function<void(std::size_t pair_id, std::size_t a, std::size_t b,
                                         const AgentParams& pa, const AgentParams& pb)>;

// Each evaluation pair starts from the post-training snapshot of both
// agents, so nothing learned with one partner carries over to the next.
inline std::vector<RunRecord> run_eval(const TrainedPopulation& pop, const ExperimentConfig& cfg,
                                       std::uint64_t seed, const RecordSink& sink = {},
                                       const PairStartHook& on_pair_start = {}) {
  cfg.validate();
  if (pop.agents.size() != cfg.n_agents) throw ConfigError("population size differs from config");
  std::vector<RunRecord> records;
  records.reserve(cfg.eval_pairs * cfg.eval_games);
  const RecordSink collect = [&](const RunRecord& r) {
    records.push_back(r);
    if (sink) sink(r);
  };
  const PairSchedule pairs = eval_schedule(cfg, seed);
  Rng rng = make_rng(seed, "eval-games");
  std::size_t game_index = 0;
  for (std::size_t pid = 0; pid < pairs.size(); ++pid) {
    const auto [a, b] = pairs[pid];
    std::vector<AgentParams> agents = pop.agents;
    std::vector<std::size_t> steps = pop.speaker_steps;
    if (on_pair_start) on_pair_start(pid, a, b, agents[a], agents[b]);
    train_pair(cfg, seed, Phase::Eval, pid, a, b, cfg.eval_games, pop.dataset, Split::Test, agents,
               steps, rng, game_index, collect);
  }
  return records;
}

// ---------------------------------------------------------------------------
// Reporting.

// Means over full trailing windows; element j covers games j .. j+window-1.
inline std::vector<double> windowed_mean(const std::vector<double>& xs, std::size_t window) {
  if (window == 0) throw ConfigError("window must be >= 1");
  std::vector<double> out;
  if (xs.size() < window) return out;
  out.reserve(xs.size() - window + 1);
  double sum = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sum += xs[i];
    if (i >= window) sum -= xs[i - window];
    if (i + 1 >= window) out.push_back(sum / static_cast<double>(window));
  }
  return out;
}

inline double mean_of(const std::vector<double>& xs, std::size_t begin, std::size_t end) {
  if (begin >= end) return 0.0;
  double s = 0.0;
  for (std::size_t i = begin; i < end; ++i) s += xs[i];
  return s / static_cast<double>(end - begin);
}

struct SeedSummary {
  std::uint64_t seed = 0;
  std::size_t games = 0;
  double mean_reward = 0.0;
  double first_1000_mean = 0.0;  // sample-efficiency proxy
  double final_10pct_mean = 0.0;
  double peak_windowed = 0.0;
};

struct CurveSummary {
  std::size_t window = 1;
  std::vector<std::uint64_t> seeds;
  std::vector<std::vector<double>> per_seed;  // windowed curves
  std::vector<double> mean;                   // across seeds, truncated to the shortest curve
  std::vector<double> stddev;                 // population std across seeds
  std::vector<SeedSummary> stats;
};

// Reward of each game per seed, ordered by game index.
inline std::vector<std::pair<std::uint64_t, std::vector<double>>> rewards_by_seed(
    const std::vector<RunRecord>& records, Phase phase) {
  std::vector<std::pair<std::uint64_t, std::vector<std::pair<std::size_t, double>>>> groups;
  for (const auto& r : records) {
    if (r.phase != phase) continue;
    auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == r.seed; });
    if (it == groups.end()) {
      groups.emplace_back(r.seed, std::vector<std::pair<std::size_t, double>>{});
      it = std::prev(groups.end());
    }
    it->second.emplace_back(r.game_index, static_cast<double>(r.reward));
  }
  std::vector<std::pair<std::uint64_t, std::vector<double>>> out;
  for (auto& [seed, rows] : groups) {
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& x, const auto& y) { return x.first < y.first; });
    std::vector<double> rewards;
    rewards.reserve(rows.size());
    for (const auto& row : rows) rewards.push_back(row.second);
    out.emplace_back(seed, std::move(rewards));
  }
  return out;
}

inline SeedSummary summarize_rewards(std::uint64_t seed, const std::vector<double>& rewards,
                                     std::size_t window) {
  SeedSummary s;
  s.seed = seed;
  s.games = rewards.size();
  s.mean_reward = mean_of(rewards, 0, rewards.size());
  s.first_1000_mean = mean_of(rewards, 0, std::min<std::size_t>(1000, rewards.size()));
  const std::size_t tail = std::max<std::size_t>(1, rewards.size() / 10);
  s.final_10pct_mean = mean_of(rewards, rewards.size() - std::min(tail, rewards.size()), rewards.size());
  const auto curve = windowed_mean(rewards, std::min(window, std::max<std::size_t>(1, rewards.size())));
  s.peak_windowed = curve.empty() ? 0.0 : *std::max_element(curve.begin(), curve.end());
  return s;
}

// Sliding-window reward curves per seed plus the across-seed mean and
// standard-deviation band.
inline CurveSummary summarize(const std::vector<RunRecord>& records, std::size_t window,
                              Phase phase = Phase::Train) {
  if (window == 0) throw ConfigError("summarize: window must be >= 1");
  const auto groups = rewards_by_seed(records, phase);
  if (groups.empty()) throw ConfigError("summarize: no records for phase " + to_string(phase));
  CurveSummary out;
  out.window = window;
  std::size_t common = SIZE_MAX;
  for (const auto& [seed, rewards] : groups) {
    out.seeds.push_back(seed);
    out.per_seed.push_back(windowed_mean(rewards, window));
    out.stats.push_back(summarize_rewards(seed, rewards, window));
    common = std::min(common, out.per_seed.back().size());
  }
  out.mean.assign(common, 0.0);
  out.stddev.assign(common, 0.0);
  const double k = static_cast<double>(groups.size());
  for (std::size_t i = 0; i < common; ++i) {
    double m = 0.0;
    for (const auto& c : out.per_seed) m += c[i];
    m /= k;
    double v = 0.0;
    for (const auto& c : out.per_seed) v += (c[i] - m) * (c[i] - m);
    out.mean[i] = m;
    out.stddev[i] = std::sqrt(v / k);
  }
  return out;
}

// Indices of the minimum, median and maximum centrality agents. Agents are
// ranked by (score, index) ascending and positions 0, n/2 and n-1 taken.
inline std::array<std::size_t, 3> rank_agents(const CentralityScores& scores) {
  if (scores.empty()) throw ConfigError("rank_agents: empty scores");
  std::vector<std::size_t> order(scores.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return scores[x] < scores[y]; });
  return {order.front(), order[order.size() / 2], order.back()};
}

struct SeedRun {
  std::vector<RunRecord> records;
  CentralityScores scores;
};

struct AgentTrajectory {
  std::string rank;                          // "min", "median" or "max"
  std::vector<std::size_t> agent_per_seed;
  std::vector<std::vector<double>> per_seed;  // rewards of games the agent played, either role
  std::vector<double> mean;                  // truncated to the shortest seed
  bool empty = false;                        // some seed never scheduled this agent
};

// Training-phase reward sequences of the min/median/max-centrality agents.
inline std::array<AgentTrajectory, 3> agent_trajectories(const std::vector<SeedRun>& runs) {
  std::array<AgentTrajectory, 3> out;
  const std::array<const char*, 3> labels{"min", "median", "max"};
  for (std::size_t k = 0; k < 3; ++k) out[k].rank = labels[k];
  for (const auto& run : runs) {
    const auto picks = rank_agents(run.scores);
    std::vector<std::pair<std::size_t, double>> rows[3];
    for (const auto& r : run.records) {
      if (r.phase != Phase::Train) continue;
      for (std::size_t k = 0; k < 3; ++k)
        if (r.sender_id == picks[k] || r.receiver_id == picks[k])
          rows[k].emplace_back(r.game_index, static_cast<double>(r.reward));
    }
    for (std::size_t k = 0; k < 3; ++k) {
      std::stable_sort(rows[k].begin(), rows[k].end(),
                       [](const auto& x, const auto& y) { return x.first < y.first; });
      std::vector<double> seq;
      for (const auto& row : rows[k]) seq.push_back(row.second);
      out[k].agent_per_seed.push_back(picks[k]);
      if (seq.empty()) out[k].empty = true;
      out[k].per_seed.push_back(std::move(seq));
    }
  }
  for (auto& t : out) {
    if (t.per_seed.empty()) continue;
    std::size_t common = SIZE_MAX;
    for (const auto& s : t.per_seed) common = std::min(common, s.size());
    t.mean.assign(common, 0.0);
    for (const auto& s : t.per_seed)
      for (std::size_t i = 0; i < common; ++i) t.mean[i] += s[i];
    for (double& v : t.mean) v /= static_cast<double>(t.per_seed.size());
  }
  return out;
}

}  // namespace netlang
