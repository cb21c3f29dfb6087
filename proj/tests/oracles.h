// Copyright 2026 The lcgraph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Straight-line reference implementations shared by the unit tests and the
// acceptance runner. Nothing here calls into the library code under test
// except for Graph accessors and PropertySpec storage.

#ifndef LCGRAPH_TESTS_ORACLES_H_
#define LCGRAPH_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "lcgraph/graph.h"

namespace lcgraph::testing {

using BoolMatrix = std::vector<std::vector<bool>>;

// ---- Brute-force oracles, independent of graph.cc ----

// Reachability within k steps for every k by repeated boolean products;
// distance(i, j) is the first k at which j becomes reachable.
inline std::vector<std::vector<int>> OracleDistances(const Graph& g) {
  const int cap = g.capacity();
  BoolMatrix adj(cap, std::vector<bool>(cap, false));
  for (int i = 0; i < cap; ++i) {
    for (int j = 0; j < cap; ++j) adj[i][j] = g.HasEdge(i, j);
  }
  std::vector<std::vector<int>> dist(cap, std::vector<int>(cap, -1));
  BoolMatrix reach(cap, std::vector<bool>(cap, false));
  for (int i = 0; i < cap; ++i) {
    if (g.active(i)) {
      reach[i][i] = true;
      dist[i][i] = 0;
    }
  }
  for (int step = 1; step < cap; ++step) {
    BoolMatrix next = reach;
    for (int i = 0; i < cap; ++i) {
      for (int k = 0; k < cap; ++k) {
        if (!reach[i][k]) continue;
        for (int j = 0; j < cap; ++j) {
          if (adj[k][j]) next[i][j] = true;
        }
      }
    }
    for (int i = 0; i < cap; ++i) {
      for (int j = 0; j < cap; ++j) {
        if (next[i][j] && dist[i][j] < 0) dist[i][j] = step;
      }
    }
    reach = std::move(next);
  }
  return dist;
}

inline bool DfsFindsBackEdge(const Graph& g, int u, int parent, std::vector<int>& state) {
  state[u] = 1;
  for (int v = 0; v < g.capacity(); ++v) {
    if (!g.HasEdge(u, v) || v == parent) continue;
    if (state[v] == 1) return true;
    if (state[v] == 0 && DfsFindsBackEdge(g, v, u, state)) return true;
  }
  state[u] = 2;
  return false;
}

inline PropertySpec OracleProperties(const Graph& g) {
  const int cap = g.capacity();
  int n = 0, edges = 0, min_deg = 1 << 30, max_deg = 0;
  for (int i = 0; i < cap; ++i) {
    if (!g.active(i)) continue;
    ++n;
    int d = 0;
    for (int j = 0; j < cap; ++j) d += g.HasEdge(i, j);
    min_deg = std::min(min_deg, d);
    max_deg = std::max(max_deg, d);
    for (int j = i + 1; j < cap; ++j) edges += g.HasEdge(i, j);
  }
  if (n == 0) min_deg = 0;

  const auto dist = OracleDistances(g);
  int diam = 0;
  std::vector<int> component(cap, -1);
  int components = 0;
  for (int i = 0; i < cap; ++i) {
    if (!g.active(i) || component[i] >= 0) continue;
    for (int j = 0; j < cap; ++j) {
      if (dist[i][j] >= 0) component[j] = components;
    }
    ++components;
  }
  for (int i = 0; i < cap; ++i) {
    for (int j = 0; j < cap; ++j) diam = std::max(diam, dist[i][j]);
  }

  std::vector<int> state(cap, 0);
  bool cycle = false;
  for (int i = 0; i < cap && !cycle; ++i) {
    if (g.active(i) && state[i] == 0) cycle = DfsFindsBackEdge(g, i, -1, state);
  }

  PropertySpec p;
  p.set(PropertyKind::kNode, n);
  p.set(PropertyKind::kEdge, edges);
  p.set(PropertyKind::kMinDeg, min_deg);
  p.set(PropertyKind::kMaxDeg, max_deg);
  p.set(PropertyKind::kDiam, diam);
  p.set(PropertyKind::kCCNum, components);
  p.set(PropertyKind::kCycle, cycle ? 1 : 0);
  return p;
}

// Scores straight from the definitions: exact-match fraction and mean of
// exp(-(predicted - requested)^2) over the requested properties.
inline std::pair<double, double> OracleScore(const PropertySpec& spec,
                                             const PropertySpec& predicted) {
  std::vector<double> matches, closeness;
  for (PropertyKind k : kAllProperties) {
    if (!spec.has(k)) continue;
    const double d = double(*predicted.get(k)) - double(*spec.get(k));
    matches.push_back(d == 0 ? 1.0 : 0.0);
    closeness.push_back(std::exp(-std::pow(d, 2)));
  }
  double m = 0, c = 0;
  for (double v : matches) m += v / matches.size();
  for (double v : closeness) c += v / closeness.size();
  return {m, c};
}

inline Graph RandomTestGraph(std::mt19937_64& rng, int max_capacity = 12) {
  const int cap = std::uniform_int_distribution<int>(1, max_capacity)(rng);
  const double p_active = std::uniform_real_distribution<double>(0.2, 1.0)(rng);
  const double p_edge = std::uniform_real_distribution<double>(0.0, 0.7)(rng);
  std::bernoulli_distribution active(p_active), edge(p_edge);
  Graph g(cap);
  for (int i = 0; i < cap; ++i) {
    if (active(rng)) g.Activate(i);
  }
  for (int i = 0; i < cap; ++i) {
    for (int j = i + 1; j < cap; ++j) {
      if (g.active(i) && g.active(j) && edge(rng)) g.AddEdge(i, j);
    }
  }
  return g;
}

}  // namespace lcgraph::testing

#endif  // LCGRAPH_TESTS_ORACLES_H_
