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

#include <cmath>
#include <cstddef>
#include <deque>
#include <string>
#include <vector>

#include "netlang/graph.hpp"
#include "netlang/random.hpp"

namespace netlang {

enum class CentralityKind { Degree, Betweenness, PageRank, Uniform };

inline std::string to_string(CentralityKind k) {
  switch (k) {
    case CentralityKind::Degree: return "degree";
    case CentralityKind::Betweenness: return "betweenness";
    case CentralityKind::PageRank: return "pagerank";
    case CentralityKind::Uniform: return "uniform";
  }
  return "?";
}

inline CentralityKind parse_centrality(const std::string& s) {
  if (s == "degree") return CentralityKind::Degree;
  if (s == "betweenness") return CentralityKind::Betweenness;
  if (s == "pagerank") return CentralityKind::PageRank;
  if (s == "uniform") return CentralityKind::Uniform;
  throw ConfigError("unknown centrality '" + s + "' (expected degree|betweenness|pagerank|uniform)");
}

// Per-node scores, finite and non-negative.
using CentralityScores = std::vector<double>;

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// deg(v) / (n - 1).
inline CentralityScores degree_centrality(const Graph& g) {
  const std::size_t n = g.size();
  if (n < 2) throw ConfigError("degree_centrality: need n >= 2");
  CentralityScores s(n);
  for (std::size_t v = 0; v < n; ++v)
    s[v] = static_cast<double>(g.degree(v)) / static_cast<double>(n - 1);
  return s;
}

// Brandes' algorithm for unweighted graphs. Scores are normalized by
// 2 / ((n-1)(n-2)) so a star center scores 1. Returns zeros for n < 3.
inline CentralityScores betweenness_centrality(const Graph& g) {
  const std::size_t n = g.size();
  CentralityScores bc(n, 0.0);
  if (n < 3) return bc;

  std::vector<std::size_t> order;  // vertices in non-decreasing distance
  std::vector<std::vector<std::size_t>> preds(n);
  std::vector<double> sigma(n), delta(n);
  std::vector<long> dist(n);
  std::deque<std::size_t> queue;

  for (std::size_t s = 0; s < n; ++s) {
    order.clear();
    for (std::size_t v = 0; v < n; ++v) {
      preds[v].clear();
      sigma[v] = 0.0;
      delta[v] = 0.0;
      dist[v] = -1;
    }
    sigma[s] = 1.0;
    dist[s] = 0;
    queue.push_back(s);
    while (!queue.empty()) {
      const std::size_t v = queue.front();
      queue.pop_front();
      order.push_back(v);
      for (std::size_t w : g.neighbors(v)) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          queue.push_back(w);
        }
        if (dist[w] == dist[v] + 1) {
          sigma[w] += sigma[v];
          preds[w].push_back(v);
        }
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const std::size_t w = *it;
      for (std::size_t v : preds[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      if (w != s) bc[w] += delta[w];
    }
  }
  // Each unordered pair was counted from both endpoints.
  const double scale = 1.0 / (static_cast<double>(n - 1) * static_cast<double>(n - 2));
  for (double& x : bc) x *= scale;
  return bc;
}

struct PageRankOptions {
  double damping = 0.85;
  double tol = 1e-10;
  std::size_t max_iter = 10000;
};

// Power iteration on the bidirected graph. Isolated nodes spread their mass
// uniformly. Stops when the L1 change between iterates drops below tol.
inline CentralityScores pagerank(const Graph& g, const PageRankOptions& opt = {}) {
  const std::size_t n = g.size();
  if (!(opt.damping > 0.0 && opt.damping < 1.0))
    throw ConfigError("pagerank: damping must lie in (0, 1)");
  if (n == 0) return {};
  const double inv_n = 1.0 / static_cast<double>(n);
  std::vector<double> x(n, inv_n), next(n);
  double residual = 0.0;
  for (std::size_t iter = 0; iter < opt.max_iter; ++iter) {
    double dangling = 0.0;
    for (std::size_t v = 0; v < n; ++v)
      if (g.degree(v) == 0) dangling += x[v];
    const double base = (1.0 - opt.damping) * inv_n + opt.damping * dangling * inv_n;
    for (std::size_t v = 0; v < n; ++v) {
      double in = 0.0;
      for (std::size_t u : g.neighbors(v)) in += x[u] / static_cast<double>(g.degree(u));
      next[v] = base + opt.damping * in;
    }
    residual = 0.0;
    for (std::size_t v = 0; v < n; ++v) residual += std::abs(next[v] - x[v]);
    x.swap(next);
    if (residual < opt.tol) return x;
  }
  throw ConvergenceError("pagerank: no convergence after " + std::to_string(opt.max_iter) +
                             " iterations (L1 residual " + std::to_string(residual) + ")",
                         residual);
}

inline CentralityScores uniform_scores(std::size_t n) {
  if (n < 1) throw ConfigError("uniform_scores: need n >= 1");
  return CentralityScores(n, 1.0 / static_cast<double>(n));
}

inline CentralityScores compute_centrality(const Graph& g, CentralityKind kind,
                                           const PageRankOptions& opt = {}) {
  switch (kind) {
    case CentralityKind::Degree: return degree_centrality(g);
    case CentralityKind::Betweenness: return betweenness_centrality(g);
    case CentralityKind::PageRank: return pagerank(g, opt);
    case CentralityKind::Uniform: return uniform_scores(g.size());
  }
  throw ConfigError("compute_centrality: unknown kind");
}

}  // namespace netlang
