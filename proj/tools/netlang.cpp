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

// netlang run    - train a population on a topology and evaluate fresh pairs
// netlang report - turn record CSVs into reward curves and a text summary

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "netlang/experiment.hpp"
#include "netlang/io.hpp"

namespace fs = std::filesystem;
using namespace netlang;

namespace {

std::ofstream open_out(const fs::path& p) {
  std::ofstream os(p);
  if (!os) throw ConfigError("cannot write " + p.string());
  return os;
}

std::ifstream open_in(const fs::path& p) {
  std::ifstream is(p);
  if (!is) throw ConfigError("cannot read " + p.string());
  return is;
}

struct RunOptions {
  std::string config_file;
  std::string out_dir = "runs";
  bool save_params = false;
  bool dump_dataset = false;
  std::map<std::string, std::string> flags;
};

int do_run(CLI::App& app, RunOptions& opt) {
  ExperimentConfig cfg;
  if (!opt.config_file.empty()) {
    auto is = open_in(opt.config_file);
    apply_settings(cfg, parse_settings(is));
  }
  Settings overrides;
  for (const auto& [key, value] : opt.flags)
    if (app.count("--" + key) > 0) overrides[key] = value;
  apply_settings(cfg, overrides);
  cfg.validate();

  fs::create_directories(opt.out_dir);
  const fs::path dir(opt.out_dir);
  for (std::uint64_t seed : cfg.seeds) {
    const std::string tag = "seed" + std::to_string(seed);
    const auto t0 = std::chrono::steady_clock::now();
    auto records = open_out(dir / ("records_" + tag + ".csv"));
    auto manifest = open_out(dir / ("manifest_" + tag + ".json"));
    const SeedOutputs out = run_seed(cfg, seed, records, manifest);
    const auto& pop = out.training.population;
    for (const auto& w : pop.topology.warnings) std::cerr << "warning: " << w << '\n';
    if (pop.topology.graph) {
      auto g = open_out(dir / ("graph_" + tag + ".txt"));
      write_graph(g, *pop.topology.graph);
    }
    if (opt.dump_dataset) {
      auto d = open_out(dir / ("dataset_" + tag + ".txt"));
      write_dataset(d, pop.dataset);
    }
    if (opt.save_params) {
      const fs::path pdir = dir / ("params_" + tag);
      fs::create_directories(pdir);
      for (std::size_t i = 0; i < pop.agents.size(); ++i) {
        auto p = open_out(pdir / ("agent" + std::to_string(i) + ".txt"));
        write_params(p, pop.agents[i]);
      }
    }
    std::vector<double> train, eval;
    for (const auto& r : out.training.records) train.push_back(r.reward);
    for (const auto& r : out.eval) eval.push_back(r.reward);
    const auto s = summarize_rewards(seed, train, 100);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << std::fixed << std::setprecision(4) << "seed " << seed << ": train mean "
              << s.mean_reward << ", final 10% " << s.final_10pct_mean << ", eval mean "
              << mean_of(eval, 0, eval.size()) << " (" << std::setprecision(1) << secs << " s)\n";
  }
  return 0;
}

struct ReportOptions {
  std::vector<std::string> records;
  std::vector<std::string> manifests;
  std::size_t window = 100;
  std::string out_dir = "report";
};

void write_curve(const fs::path& path, const CurveSummary& c) {
  auto os = open_out(path);
  os << "game,mean,std";
  for (auto s : c.seeds) os << ",seed_" << s;
  os << '\n' << std::setprecision(10);
  for (std::size_t i = 0; i < c.mean.size(); ++i) {
    // Label each point with the last game its window covers.
    os << i + c.window - 1 << ',' << c.mean[i] << ',' << c.stddev[i];
    for (const auto& curve : c.per_seed) os << ',' << curve[i];
    os << '\n';
  }
}

void write_summary(std::ostream& os, const std::string& phase, const CurveSummary& c) {
  os << "[" << phase << "] window " << c.window << '\n';
  os << std::fixed << std::setprecision(4);
  for (const auto& s : c.stats)
    os << "  seed " << s.seed << ": games " << s.games << ", mean " << s.mean_reward
       << ", first-1000 mean " << s.first_1000_mean << ", final-10% mean " << s.final_10pct_mean
       << ", peak windowed " << s.peak_windowed << '\n';
  if (!c.mean.empty()) {
    double peak = 0.0;
    for (double v : c.mean) peak = std::max(peak, v);
    os << "  across seeds: peak windowed mean " << peak << ", last windowed mean " << c.mean.back()
       << " +/- " << c.stddev.back() << '\n';
  }
  os.unsetf(std::ios::floatfield);
}

int do_report(const ReportOptions& opt) {
  std::vector<RunRecord> all;
  for (const auto& f : opt.records) {
    auto is = open_in(f);
    auto rs = read_records(is);
    all.insert(all.end(), rs.begin(), rs.end());
  }
  if (all.empty()) throw ConfigError("report: no records in the given files");
  fs::create_directories(opt.out_dir);
  const fs::path dir(opt.out_dir);
  auto summary = open_out(dir / "summary.txt");
  for (Phase phase : {Phase::Train, Phase::Eval}) {
    const bool present =
        std::any_of(all.begin(), all.end(), [&](const RunRecord& r) { return r.phase == phase; });
    if (!present) continue;
    const auto c = summarize(all, opt.window, phase);
    write_curve(dir / ("curve_" + to_string(phase) + ".csv"), c);
    write_summary(summary, to_string(phase), c);
  }

  if (!opt.manifests.empty()) {
    std::vector<SeedRun> runs;
    for (const auto& f : opt.manifests) {
      auto is = open_in(f);
      const auto [seed, scores] = manifest_scores(Json::parse(is));
      SeedRun run;
      run.scores = scores;
      for (const auto& r : all)
        if (r.seed == seed) run.records.push_back(r);
      if (run.records.empty())
        throw ConfigError("report: manifest " + f + " has no matching records (seed " +
                          std::to_string(seed) + ")");
      runs.push_back(std::move(run));
    }
    const auto traj = agent_trajectories(runs);
    auto os = open_out(dir / "trajectories.csv");
    os << "game";
    for (const auto& t : traj) os << ',' << t.rank;
    os << '\n';
    std::size_t len = 0;
    for (const auto& t : traj) len = std::max(len, t.mean.size());
    for (std::size_t i = 0; i < len; ++i) {
      os << i;
      for (const auto& t : traj) {
        os << ',';
        if (i < t.mean.size()) os << t.mean[i];
      }
      os << '\n';
    }
    summary << "[trajectories]\n";
    for (const auto& t : traj) {
      summary << "  " << t.rank << ": agents";
      for (auto a : t.agent_per_seed) summary << ' ' << a;
      summary << ", common length " << t.mean.size();
      if (t.empty) summary << " (EMPTY in some seed)";
      summary << '\n';
    }
  }
  std::cout << "wrote " << (dir / "summary.txt").string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Population-based referential game training on interaction graphs"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  RunOptions run_opt;
  auto* run = app.add_subcommand("run", "train and evaluate one configuration over its seeds");
  run->add_option("--config", run_opt.config_file, "key = value settings file (flags override it)")
      ->check(CLI::ExistingFile);
  run->add_option("--out-dir", run_opt.out_dir, "output directory")->capture_default_str();
  run->add_flag("--save-params", run_opt.save_params, "write trained agent parameters");
  run->add_flag("--dump-dataset", run_opt.dump_dataset, "write the object dataset");
  for (const auto& [key, help] : setting_keys()) run->add_option("--" + key, run_opt.flags[key], help);

  ReportOptions rep_opt;
  auto* report = app.add_subcommand("report", "reward curves and summary from record CSVs");
  report->add_option("records", rep_opt.records, "record CSV files")->required()->check(CLI::ExistingFile);
  report->add_option("--manifest", rep_opt.manifests, "run manifests, for per-agent trajectories")
      ->check(CLI::ExistingFile);
  report->add_option("--window", rep_opt.window, "smoothing window in games")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  report->add_option("--out-dir", rep_opt.out_dir, "output directory")->capture_default_str();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return do_run(*run, run_opt);
    return do_report(rep_opt);
  } catch (const Error& e) {
    std::cerr << "netlang: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "netlang: " << e.what() << '\n';
    return 1;
  }
}
