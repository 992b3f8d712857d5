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

// Population topologies: Erdos-Renyi, Watts-Strogatz and Barabasi-Albert
// generators, plus the parameter formulas that target a given edge count.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "netlang/random.hpp"

namespace netlang {

using Edge = std::pair<std::size_t, std::size_t>;

// Undirected simple graph over nodes 0..n-1 with sorted adjacency lists.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n) : adj_(n) {}

  // Builds from an edge list; duplicates and orientation are normalized.
  // Self-loops and out-of-range endpoints are rejected.
  static Graph from_edges(std::size_t n, const std::vector<Edge>& edges) {
    Graph g(n);
    for (auto [u, v] : edges) {
      if (u >= n || v >= n) throw ConfigError("edge endpoint out of range");
      if (u == v) throw ConfigError("self-loop in edge list");
      g.adj_[u].push_back(v);
      g.adj_[v].push_back(u);
    }
    for (auto& a : g.adj_) {
      std::sort(a.begin(), a.end());
      a.erase(std::unique(a.begin(), a.end()), a.end());
    }
    return g;
  }

  std::size_t size() const { return adj_.size(); }

  const std::vector<std::size_t>& neighbors(std::size_t u) const { return adj_[u]; }

  std::size_t degree(std::size_t u) const { return adj_[u].size(); }

  bool has_edge(std::size_t u, std::size_t v) const {
    if (u >= size() || v >= size()) return false;
    return std::binary_search(adj_[u].begin(), adj_[u].end(), v);
  }

  std::size_t edge_count() const {
    std::size_t total = 0;
    for (const auto& a : adj_) total += a.size();
    return total / 2;
  }

  // Edges as (u, v) with u < v, ascending.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (std::size_t u = 0; u < size(); ++u)
      for (std::size_t v : adj_[u])
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  bool operator==(const Graph&) const = default;

 private:
  std::vector<std::vector<std::size_t>> adj_;
};

enum class TopologyKind { ER, WS, BA, RandomBaseline };

inline std::string to_string(TopologyKind k) {
  switch (k) {
    case TopologyKind::ER: return "er";
    case TopologyKind::WS: return "ws";
    case TopologyKind::BA: return "ba";
    case TopologyKind::RandomBaseline: return "random";
  }
  return "?";
}

inline TopologyKind parse_topology(const std::string& s) {
  if (s == "er") return TopologyKind::ER;
  if (s == "ws") return TopologyKind::WS;
  if (s == "ba") return TopologyKind::BA;
  if (s == "random") return TopologyKind::RandomBaseline;
  throw ConfigError("unknown topology '" + s + "' (expected er|ws|ba|random)");
}

// Resolved generator parameters. Only the fields of the chosen topology are
// meaningful.
struct GraphParams {
  std::size_t n = 16;
  std::size_t e = 32;
  double p_er = 0.0;
  std::size_t k_ws = 0;
  double p_rewire_ws = 0.1;
  std::size_t m_ba = 0;
};

// Edge probability p = e / (n^2 / 2). The formula approximates C(n,2) by
// n^2/2, so the realized expected edge count is e * (n-1) / n.
inline double er_param(std::size_t n, std::size_t e) {
  if (n < 2) throw ConfigError("er_param: need n >= 2");
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(e) / (nn * nn / 2.0);
  if (p > 1.0) {
    std::ostringstream os;
    os << "er_param: (n=" << n << ", e=" << e << ") gives p=" << p << " > 1";
    throw ConfigError(os.str());
  }
  return p;
}

// Ring degree k = 2e / n; must be a positive even integer below n.
inline std::size_t ws_param(std::size_t n, std::size_t e) {
  std::ostringstream os;
  os << "ws_param: (n=" << n << ", e=" << e << ") ";
  if (n < 3) throw ConfigError(os.str() + "needs n >= 3");
  if ((2 * e) % n != 0) throw ConfigError(os.str() + "2e/n is not an integer");
  const std::size_t k = 2 * e / n;
  if (k % 2 != 0) throw ConfigError(os.str() + "ring degree k=" + std::to_string(k) + " is odd");
  if (k == 0 || k >= n)
    throw ConfigError(os.str() + "ring degree k=" + std::to_string(k) + " outside (0, n)");
  return k;
}

// Floor of the smaller root of m^2 - n m + e = 0. The realized edge count
// m (n - m) never exceeds e.
inline std::size_t ba_param(std::size_t n, std::size_t e) {
  std::ostringstream os;
  os << "ba_param: (n=" << n << ", e=" << e << ") ";
  if (n < 2) throw ConfigError(os.str() + "needs n >= 2");
  const std::uint64_t nn = n;
  const std::uint64_t four_e = 4 * static_cast<std::uint64_t>(e);
  if (nn * nn < four_e) throw ConfigError(os.str() + "has no real root (n^2 < 4e)");
  const std::uint64_t disc = nn * nn - four_e;
  std::uint64_t s = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(disc)));
  while (s * s > disc) --s;
  while ((s + 1) * (s + 1) <= disc) ++s;
  // (n - sqrt(disc)) / 2, floored exactly for both perfect and non-perfect squares.
  const std::uint64_t m = (s * s == disc) ? (nn - s) / 2 : (nn - s - 1) / 2;
  if (m < 1 || m >= nn)
    throw ConfigError(os.str() + "attachment count m=" + std::to_string(m) + " outside [1, n)");
  return static_cast<std::size_t>(m);
}

// Each unordered pair is present independently with probability p.
inline Graph generate_er(std::size_t n, double p, Rng& rng) {
  if (p < 0.0 || p > 1.0) throw ConfigError("generate_er: p outside [0, 1]");
  std::vector<Edge> edges;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (uniform01(rng) < p) edges.emplace_back(u, v);
  return Graph::from_edges(n, edges);
}

// Ring lattice of degree k, then each lattice edge (u, u+j) is rewired with
// probability p by replacing v with a uniform node that is neither u nor an
// existing neighbor of u. Edge count stays n k / 2.
inline Graph generate_ws(std::size_t n, std::size_t k, double p, Rng& rng) {
  if (k % 2 != 0 || k == 0 || k >= n) throw ConfigError("generate_ws: need even k in (0, n)");
  if (p < 0.0 || p > 1.0) throw ConfigError("generate_ws: p outside [0, 1]");
  std::vector<std::set<std::size_t>> adj(n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t j = 1; j <= k / 2; ++j) {
      const std::size_t v = (u + j) % n;
      adj[u].insert(v);
      adj[v].insert(u);
    }
  for (std::size_t j = 1; j <= k / 2; ++j) {
    for (std::size_t u = 0; u < n; ++u) {
      const std::size_t v = (u + j) % n;
      if (uniform01(rng) >= p) continue;
      if (!adj[u].contains(v)) continue;  // already rewired away
      if (adj[u].size() >= n - 1) continue;
      std::size_t w;
      do {
        w = uniform_index(rng, n);
      } while (w == u || adj[u].contains(w));
      adj[u].erase(v);
      adj[v].erase(u);
      adj[u].insert(w);
      adj[w].insert(u);
    }
  }
  std::vector<Edge> edges;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v : adj[u])
      if (u < v) edges.emplace_back(u, v);
  return Graph::from_edges(n, edges);
}

// Preferential attachment from m isolated seed nodes. Each arriving node links
// to m distinct existing nodes drawn proportionally to degree; the first
// arrival links to every seed. Edge count is m (n - m).
inline Graph generate_ba(std::size_t n, std::size_t m, Rng& rng) {
  if (m < 1 || m >= n) throw ConfigError("generate_ba: need 1 <= m < n");
  std::vector<Edge> edges;
  edges.reserve(m * (n - m));
  // One entry per edge endpoint: drawing uniformly from it is degree-proportional.
  std::vector<std::size_t> endpoints;
  endpoints.reserve(2 * m * (n - m));
  std::vector<std::size_t> targets(m);
  for (std::size_t i = 0; i < m; ++i) targets[i] = i;
  for (std::size_t node = m; node < n; ++node) {
    for (std::size_t t : targets) {
      edges.emplace_back(t, node);
      endpoints.push_back(t);
      endpoints.push_back(node);
    }
    std::set<std::size_t> chosen;
    while (chosen.size() < m) chosen.insert(endpoints[uniform_index(rng, endpoints.size())]);
    targets.assign(chosen.begin(), chosen.end());
  }
  return Graph::from_edges(n, edges);
}

// Degree -> number of nodes with that degree.
inline std::map<std::size_t, std::size_t> degree_distribution(const Graph& g) {
  std::map<std::size_t, std::size_t> hist;
  for (std::size_t u = 0; u < g.size(); ++u) ++hist[g.degree(u)];
  return hist;
}

// Mean local clustering coefficient; nodes of degree < 2 contribute zero.
inline double average_clustering(const Graph& g) {
  if (g.size() == 0) return 0.0;
  double total = 0.0;
  for (std::size_t u = 0; u < g.size(); ++u) {
    const auto& nb = g.neighbors(u);
    if (nb.size() < 2) continue;
    std::size_t links = 0;
    for (std::size_t i = 0; i < nb.size(); ++i)
      for (std::size_t j = i + 1; j < nb.size(); ++j)
        if (g.has_edge(nb[i], nb[j])) ++links;
    total += 2.0 * static_cast<double>(links) /
             (static_cast<double>(nb.size()) * static_cast<double>(nb.size() - 1));
  }
  return total / static_cast<double>(g.size());
}

// Text dump: "n e" header, then one "u v" line per edge with u < v, ascending.
inline void write_graph(std::ostream& os, const Graph& g) {
  os << g.size() << ' ' << g.edge_count() << '\n';
  for (auto [u, v] : g.edges()) os << u << ' ' << v << '\n';
}

inline Graph read_graph(std::istream& is) {
  std::size_t n = 0, e = 0;
  if (!(is >> n >> e)) throw ConfigError("read_graph: missing 'n e' header");
  std::vector<Edge> edges(e);
  for (auto& [u, v] : edges)
    if (!(is >> u >> v)) throw ConfigError("read_graph: truncated edge list");
  Graph g = Graph::from_edges(n, edges);
  if (g.edge_count() != e) throw ConfigError("read_graph: duplicate edges in dump");
  return g;
}

}  // namespace netlang
