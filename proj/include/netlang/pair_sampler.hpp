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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "netlang/centrality.hpp"
#include "netlang/graph.hpp"
#include "netlang/random.hpp"

namespace netlang {

// Ordered list of agent pairs; each pair trains in turn.
using PairSchedule = std::vector<Edge>;

// Max-shifted softmax.
inline std::vector<double> softmax(std::span<const double> scores) {
  if (scores.empty()) throw Error("softmax: empty score vector");
  const double top = *std::max_element(scores.begin(), scores.end());
  if (!std::isfinite(top)) throw Error("softmax: non-finite score");
  std::vector<double> p(scores.size());
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i])) throw Error("softmax: non-finite score");
    p[i] = std::exp(scores[i] - top);
    total += p[i];
  }
  for (double& x : p) x /= total;
  return p;
}

// Probability that each node is drawn as the first endpoint of a pair:
// softmax of the scores restricted to non-isolated nodes, renormalized.
inline std::vector<double> first_endpoint_distribution(const Graph& g,
                                                       const CentralityScores& scores) {
  if (scores.size() != g.size()) throw ConfigError("score vector length differs from node count");
  std::vector<double> p = softmax(scores);
  double total = 0.0;
  for (std::size_t v = 0; v < p.size(); ++v) {
    if (g.degree(v) == 0) p[v] = 0.0;
    total += p[v];
  }
  if (total <= 0.0) throw ConfigError("pair sampling needs a graph with at least one edge");
  for (double& x : p) x /= total;
  return p;
}

// Draws count pairs with replacement: the first endpoint by softmaxed
// centrality, the second uniformly among its neighbors.
inline PairSchedule sample_schedule(const Graph& g, const CentralityScores& scores,
                                    std::size_t count, Rng& rng) {
  if (g.edge_count() == 0) throw ConfigError("sample_schedule: graph has no edges");
  const std::vector<double> first = first_endpoint_distribution(g, scores);
  PairSchedule out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t u = sample_categorical(first, rng);
    const auto& nb = g.neighbors(u);
    out.emplace_back(u, nb[uniform_index(rng, nb.size())]);
  }
  return out;
}

// Uniform unordered pairs with replacement, ignoring any graph. Emitted as
// (a, b) with a < b.
inline PairSchedule random_baseline_schedule(std::size_t n, std::size_t count, Rng& rng) {
  if (n < 2) throw ConfigError("random_baseline_schedule: need n >= 2");
  const std::size_t pairs = n * (n - 1) / 2;
  PairSchedule out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    // Unrank r into the r-th pair of the row-major upper triangle.
    std::size_t r = uniform_index(rng, pairs);
    std::size_t a = 0;
    while (r >= n - 1 - a) {
      r -= n - 1 - a;
      ++a;
    }
    out.emplace_back(a, a + 1 + r);
  }
  return out;
}

}  // namespace netlang
