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

// Run records CSV, run manifest JSON, and key = value settings.

#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>
#include "netlang/experiment.hpp"

namespace netlang {

inline constexpr const char* kRecordHeader = "seed,phase,game_index,pair_id,sender_id,receiver_id,reward";

inline void write_record_header(std::ostream& os) { os << kRecordHeader << '\n'; }

inline void write_record(std::ostream& os, const RunRecord& r) {
  os << r.seed << ',' << to_string(r.phase) << ',' << r.game_index << ',' << r.pair_id << ','
     << r.sender_id << ',' << r.receiver_id << ',' << r.reward << '\n';
}

inline std::vector<RunRecord> read_records(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kRecordHeader)
    throw ConfigError("records: missing header '" + std::string(kRecordHeader) + "'");
  std::vector<RunRecord> out;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::vector<std::string> f;
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (f.size() != 7) throw ConfigError("records: line " + std::to_string(lineno) + " needs 7 fields");
    RunRecord r;
    try {
      r.seed = std::stoull(f[0]);
      if (f[1] == "train")
        r.phase = Phase::Train;
      else if (f[1] == "eval")
        r.phase = Phase::Eval;
      else
        throw ConfigError("bad phase");
      r.game_index = std::stoull(f[2]);
      r.pair_id = std::stoull(f[3]);
      r.sender_id = std::stoull(f[4]);
      r.receiver_id = std::stoull(f[5]);
      r.reward = std::stoi(f[6]);
    } catch (const std::exception&) {
      throw ConfigError("records: malformed line " + std::to_string(lineno));
    }
    if (r.reward != 0 && r.reward != 1)
      throw ConfigError("records: reward must be 0 or 1 on line " + std::to_string(lineno));
    out.push_back(r);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Settings. Keys match the CLI flag names without the leading dashes.

using Settings = std::map<std::string, std::string>;

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Lines of `key = value`; blank lines and lines starting with '#' are skipped.
inline Settings parse_settings(std::istream& is) {
  Settings out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(t.substr(0, eq));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    out[key] = trim(t.substr(eq + 1));
  }
  return out;
}

inline std::vector<std::uint64_t> parse_seed_list(const std::string& v) {
  std::vector<std::uint64_t> out;
  std::istringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    std::size_t used = 0;
    const auto seed = std::stoull(item, &used);
    if (used != item.size()) throw ConfigError("bad seed '" + item + "'");
    out.push_back(seed);
  }
  if (out.empty()) throw ConfigError("empty seed list");
  return out;
}

// Every experiment setting key, in the order written to manifests and help.
inline const std::vector<std::pair<std::string, std::string>>& setting_keys() {
  static const std::vector<std::pair<std::string, std::string>> keys = {
      {"topology", "er|ws|ba|random"},
      {"centrality", "degree|betweenness|pagerank|uniform"},
      {"nodes", "number of agents"},
      {"edges", "target edge count"},
      {"schedule-size", "pairs drawn for training"},
      {"games-per-pairing", "training games per scheduled pair"},
      {"eval-games", "games per evaluation pair"},
      {"eval-pairs", "number of evaluation pairs"},
      {"seed", "single seed"},
      {"seeds", "comma-separated seeds"},
      {"minibatch-size", "games per update"},
      {"x-size", "candidates per game"},
      {"vocab", "vocabulary size including the end symbol"},
      {"max-len", "maximum message length"},
      {"token-dim", "token embedding width"},
      {"hidden", "encoder output and LSTM hidden width"},
      {"encoder-hidden", "encoder hidden layer width"},
      {"train-size", "training objects"},
      {"test-size", "held-out objects"},
      {"shapes", "shape cardinality"},
      {"object-colors", "object color cardinality"},
      {"floor-colors", "floor color cardinality"},
      {"learning-rate", "SGD step size"},
      {"clip-norm", "gradient norm clip (0 disables)"},
      {"init-scale", "uniform init half-width"},
      {"init-embedding-scale", "token embedding init half-width"},
      {"init-output-scale", "sender output projection init half-width"},
      {"ws-rewire", "Watts-Strogatz rewiring probability"},
      {"pagerank-damping", "PageRank damping"},
      {"pagerank-tol", "PageRank L1 tolerance"},
      {"pagerank-max-iter", "PageRank iteration cap"},
  };
  return keys;
}

inline std::size_t parse_count(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    if (!v.empty() && v[0] == '-') throw ConfigError("negative");
    const auto x = std::stoull(v, &used);
    if (used != v.size()) throw ConfigError("trailing characters");
    return static_cast<std::size_t>(x);
  } catch (const std::exception&) {
    throw ConfigError("setting '" + key + "' expects a non-negative integer, got '" + v + "'");
  }
}

inline double parse_real(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw ConfigError("trailing characters");
    return x;
  } catch (const std::exception&) {
    throw ConfigError("setting '" + key + "' expects a number, got '" + v + "'");
  }
}

inline void apply_setting(ExperimentConfig& c, const std::string& key, const std::string& v) {
  if (key == "topology") c.topology = parse_topology(v);
  else if (key == "centrality") c.centrality = parse_centrality(v);
  else if (key == "nodes") c.n_agents = parse_count(key, v);
  else if (key == "edges") c.n_edges = parse_count(key, v);
  else if (key == "schedule-size") c.schedule_size = parse_count(key, v);
  else if (key == "games-per-pairing") c.games_per_pairing = parse_count(key, v);
  else if (key == "eval-games") c.eval_games = parse_count(key, v);
  else if (key == "eval-pairs") c.eval_pairs = parse_count(key, v);
  else if (key == "seed") c.seeds = {parse_count(key, v)};
  else if (key == "seeds") c.seeds = parse_seed_list(v);
  else if (key == "minibatch-size") c.minibatch_size = parse_count(key, v);
  else if (key == "x-size") c.x_size = parse_count(key, v);
  else if (key == "vocab") c.agent.vocab = parse_count(key, v);
  else if (key == "max-len") c.agent.max_len = parse_count(key, v);
  else if (key == "token-dim") c.agent.token_dim = parse_count(key, v);
  else if (key == "hidden") c.agent.hidden = parse_count(key, v);
  else if (key == "encoder-hidden") c.agent.encoder_hidden = parse_count(key, v);
  else if (key == "train-size") c.dataset.train_size = parse_count(key, v);
  else if (key == "test-size") c.dataset.test_size = parse_count(key, v);
  else if (key == "shapes") c.dataset.factors.shapes = parse_count(key, v);
  else if (key == "object-colors") c.dataset.factors.object_colors = parse_count(key, v);
  else if (key == "floor-colors") c.dataset.factors.floor_colors = parse_count(key, v);
  else if (key == "learning-rate") c.sgd.learning_rate = parse_real(key, v);
  else if (key == "clip-norm") c.sgd.clip_norm = parse_real(key, v);
  else if (key == "init-scale") c.init.base = parse_real(key, v);
  else if (key == "init-embedding-scale") c.init.embedding = parse_real(key, v);
  else if (key == "init-output-scale") c.init.sender_output = parse_real(key, v);
  else if (key == "ws-rewire") c.ws_rewire = parse_real(key, v);
  else if (key == "pagerank-damping") c.pagerank.damping = parse_real(key, v);
  else if (key == "pagerank-tol") c.pagerank.tol = parse_real(key, v);
  else if (key == "pagerank-max-iter") c.pagerank.max_iter = parse_count(key, v);
  else throw ConfigError("unknown setting '" + key + "'");
}

inline void apply_settings(ExperimentConfig& c, const Settings& s) {
  // "seeds" wins over "seed" when both are present.
  for (const auto& [k, v] : s)
    if (k != "seeds") apply_setting(c, k, v);
  if (auto it = s.find("seeds"); it != s.end()) apply_setting(c, it->first, it->second);
}

// ---------------------------------------------------------------------------
// Manifest.

using Json = nlohmann::ordered_json;

inline Json config_to_json(const ExperimentConfig& c) {
  Json j;
  j["topology"] = to_string(c.topology);
  j["centrality"] = to_string(c.centrality);
  j["nodes"] = c.n_agents;
  j["edges"] = c.n_edges;
  j["schedule-size"] = c.schedule_size;
  j["games-per-pairing"] = c.games_per_pairing;
  j["eval-games"] = c.eval_games;
  j["eval-pairs"] = c.eval_pairs;
  j["seeds"] = c.seeds;
  j["minibatch-size"] = c.minibatch_size;
  j["x-size"] = c.x_size;
  j["vocab"] = c.agent.vocab;
  j["max-len"] = c.agent.max_len;
  j["token-dim"] = c.agent.token_dim;
  j["hidden"] = c.agent.hidden;
  j["encoder-hidden"] = c.agent.encoder_hidden;
  j["train-size"] = c.dataset.train_size;
  j["test-size"] = c.dataset.test_size;
  j["shapes"] = c.dataset.factors.shapes;
  j["object-colors"] = c.dataset.factors.object_colors;
  j["floor-colors"] = c.dataset.factors.floor_colors;
  j["learning-rate"] = c.sgd.learning_rate;
  j["clip-norm"] = c.sgd.clip_norm;
  j["init-scale"] = c.init.base;
  j["init-embedding-scale"] = c.init.embedding;
  j["init-output-scale"] = c.init.sender_output;
  j["ws-rewire"] = c.ws_rewire;
  j["pagerank-damping"] = c.pagerank.damping;
  j["pagerank-tol"] = c.pagerank.tol;
  j["pagerank-max-iter"] = c.pagerank.max_iter;
  return j;
}

inline Json pairs_to_json(const std::vector<Edge>& pairs) {
  Json arr = Json::array();
  for (auto [u, v] : pairs) arr.push_back({u, v});
  return arr;
}

inline Json make_manifest(const ExperimentConfig& cfg, std::uint64_t seed, const TrainedPopulation& pop,
                          const PairSchedule& eval_pairs) {
  Json m;
  m["tool"] = "netlang";
  m["version"] = kVersion;
  m["seed"] = seed;
  m["config"] = config_to_json(cfg);
  Json g;
  g["kind"] = to_string(cfg.topology);
  g["n"] = pop.topology.params.n;
  g["target_edges"] = pop.topology.params.e;
  switch (cfg.topology) {
    case TopologyKind::ER: g["p_er"] = pop.topology.params.p_er; break;
    case TopologyKind::WS:
      g["k_ws"] = pop.topology.params.k_ws;
      g["p_rewire_ws"] = pop.topology.params.p_rewire_ws;
      break;
    case TopologyKind::BA: g["m_ba"] = pop.topology.params.m_ba; break;
    case TopologyKind::RandomBaseline: break;
  }
  if (pop.topology.graph) {
    g["realized_edges"] = pop.topology.graph->edge_count();
    g["edge_list"] = pairs_to_json(pop.topology.graph->edges());
    Json hist = Json::object();
    for (auto [deg, count] : degree_distribution(*pop.topology.graph)) hist[std::to_string(deg)] = count;
    g["degree_distribution"] = hist;
  } else {
    g["realized_edges"] = nullptr;
    g["edge_list"] = nullptr;
  }
  m["graph"] = g;
  m["centrality"] = {{"kind", pop.topology.graph ? to_string(cfg.centrality) : "uniform"},
                     {"scores", pop.scores}};
  m["schedule"] = pairs_to_json(pop.schedule);
  m["eval_pairs"] = pairs_to_json(eval_pairs);
  m["warnings"] = pop.topology.warnings;
  return m;
}

// Seed and centrality scores from a manifest; used by reporting.
inline std::pair<std::uint64_t, CentralityScores> manifest_scores(const Json& m) {
  try {
    return {m.at("seed").get<std::uint64_t>(), m.at("centrality").at("scores").get<CentralityScores>()};
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("manifest: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// One seed end to end: training and evaluation records streamed to `records`
// (header first), then the manifest written to `manifest`. Rows already
// streamed are flushed before an error propagates.

struct SeedOutputs {
  TrainingResult training;
  std::vector<RunRecord> eval;
  Json manifest;
};

inline SeedOutputs run_seed(const ExperimentConfig& cfg, std::uint64_t seed, std::ostream& records,
                            std::ostream& manifest) {
  SeedOutputs out;
  const RecordSink sink = [&](const RunRecord& r) { write_record(records, r); };
  write_record_header(records);
  try {
    out.training = run_training(cfg, seed, sink);
    out.eval = run_eval(out.training.population, cfg, seed, sink);
  } catch (...) {
    records.flush();
    throw;
  }
  records.flush();
  out.manifest = make_manifest(cfg, seed, out.training.population, eval_schedule(cfg, seed));
  manifest << out.manifest.dump(2) << '\n';
  return out;
}

}  // namespace netlang
