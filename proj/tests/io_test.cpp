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

#include <gtest/gtest.h>

#include <sstream>

#include "netlang/io.hpp"

namespace netlang {
namespace {

TEST(RecordsTest, RoundTrip) {
  std::vector<RunRecord> recs{{3, Phase::Train, 0, 0, 4, 9, 1}, {3, Phase::Eval, 1, 2, 9, 4, 0}};
  std::stringstream ss;
  write_record_header(ss);
  for (const auto& r : recs) write_record(ss, r);
  EXPECT_EQ(ss.str(), std::string(kRecordHeader) + "\n3,train,0,0,4,9,1\n3,eval,1,2,9,4,0\n");
  EXPECT_EQ(read_records(ss), recs);
}

TEST(RecordsTest, RejectsMalformedInput) {
  std::stringstream no_header("3,train,0,0,4,9,1\n");
  EXPECT_THROW(read_records(no_header), ConfigError);
  const std::string h = std::string(kRecordHeader) + "\n";
  for (const char* body : {"3,train,0,0,4,9\n", "3,test,0,0,4,9,1\n", "3,train,x,0,4,9,1\n",
                           "3,train,0,0,4,9,2\n"}) {
    std::stringstream ss(h + body);
    EXPECT_THROW(read_records(ss), ConfigError) << body;
  }
}

TEST(SettingsTest, ParsesKeyValueLines) {
  std::stringstream ss("# comment\n\ntopology = ws\n  games-per-pairing=128  \nseeds = 1, 2,3\n");
  const auto s = parse_settings(ss);
  EXPECT_EQ(s.at("topology"), "ws");
  EXPECT_EQ(s.at("games-per-pairing"), "128");
  ExperimentConfig cfg;
  apply_settings(cfg, s);
  EXPECT_EQ(cfg.topology, TopologyKind::WS);
  EXPECT_EQ(cfg.games_per_pairing, 128u);
  EXPECT_EQ(cfg.seeds, (std::vector<std::uint64_t>{1, 2, 3}));
}

TEST(SettingsTest, SeedsWinOverSeed) {
  ExperimentConfig cfg;
  apply_settings(cfg, Settings{{"seeds", "4,5"}, {"seed", "9"}});
  EXPECT_EQ(cfg.seeds, (std::vector<std::uint64_t>{4, 5}));
}

TEST(SettingsTest, EveryKeyIsAccepted) {
  const Settings sample{
      {"topology", "er"}, {"centrality", "pagerank"}, {"seeds", "7"}, {"ws-rewire", "0.2"},
      {"pagerank-tol", "1e-9"}, {"learning-rate", "0.1"}, {"init-output-scale", "1.5"}};
  for (const auto& [key, help] : setting_keys()) {
    ExperimentConfig cfg;
    const auto it = sample.find(key);
    EXPECT_NO_THROW(apply_setting(cfg, key, it != sample.end() ? it->second : "3")) << key;
  }
  // Every key also appears in the manifest's config block.
  const Json j = config_to_json(ExperimentConfig{});
  for (const auto& [key, help] : setting_keys())
    if (key != "seed") {
      EXPECT_TRUE(j.contains(key)) << key;
    }
}

TEST(SettingsTest, Errors) {
  ExperimentConfig cfg;
  EXPECT_THROW(apply_setting(cfg, "colour", "1"), ConfigError);
  EXPECT_THROW(apply_setting(cfg, "nodes", "-3"), ConfigError);
  EXPECT_THROW(apply_setting(cfg, "nodes", "3x"), ConfigError);
  EXPECT_THROW(apply_setting(cfg, "learning-rate", "fast"), ConfigError);
  EXPECT_THROW(apply_setting(cfg, "seeds", ","), ConfigError);
  EXPECT_THROW(apply_setting(cfg, "topology", "lattice"), ConfigError);
  std::stringstream ss("topology ws\n");
  EXPECT_THROW(parse_settings(ss), ConfigError);
}

TEST(ManifestTest, ContainsResolvedRun) {
  ExperimentConfig cfg;
  cfg.schedule_size = 4;
  cfg.games_per_pairing = 32;
  cfg.eval_pairs = 2;
  cfg.eval_games = 32;
  cfg.seeds = {2};
  std::stringstream records, manifest;
  const auto out = run_seed(cfg, 2, records, manifest);
  const Json m = Json::parse(manifest.str());
  EXPECT_EQ(m["version"], kVersion);
  EXPECT_EQ(m["seed"], 2);
  EXPECT_EQ(m["config"]["games-per-pairing"], 32);
  EXPECT_EQ(m["graph"]["m_ba"], 2);
  EXPECT_EQ(m["graph"]["edge_list"].size(), 28u);
  EXPECT_EQ(m["schedule"].size(), 4u);
  EXPECT_EQ(m["eval_pairs"].size(), 2u);
  EXPECT_EQ(m["warnings"].size(), 1u);
  const auto [seed, scores] = manifest_scores(m);
  EXPECT_EQ(seed, 2u);
  EXPECT_EQ(scores, out.training.population.scores);
  const auto recs = read_records(records);
  EXPECT_EQ(recs.size(), 4u * 32 + 2u * 32);
}

TEST(ManifestTest, RandomBaselineHasNoGraph) {
  ExperimentConfig cfg;
  cfg.topology = TopologyKind::RandomBaseline;
  cfg.schedule_size = 2;
  cfg.games_per_pairing = 32;
  cfg.eval_pairs = 1;
  cfg.eval_games = 32;
  std::stringstream records, manifest;
  run_seed(cfg, 0, records, manifest);
  const Json m = Json::parse(manifest.str());
  EXPECT_TRUE(m["graph"]["edge_list"].is_null());
  EXPECT_EQ(m["centrality"]["kind"], "uniform");
}

TEST(ManifestTest, MissingFieldsAreReported) {
  EXPECT_THROW(manifest_scores(Json::parse(R"({"seed": 1})")), ConfigError);
}

TEST(RunSeedTest, PartialRecordsSurviveAFailure) {
  ExperimentConfig cfg;
  cfg.schedule_size = 2;
  cfg.games_per_pairing = 32;
  cfg.dataset.test_size = 1;  // evaluation cannot find distractors
  std::stringstream records, manifest;
  EXPECT_THROW(run_seed(cfg, 0, records, manifest), ConfigError);
  EXPECT_EQ(read_records(records).size(), 64u);
  EXPECT_TRUE(manifest.str().empty());
}

}  // namespace
}  // namespace netlang
