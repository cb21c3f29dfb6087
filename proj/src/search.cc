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

#include "lcgraph/search.h"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <utility>

#include "lcgraph/errors.h"
#include "lcgraph/metrics.h"
#include "lcgraph/random.h"

namespace lcgraph {

namespace {

struct Scored {
  double closeness = 0;
  double match = 0;
};

Scored Evaluate(const PropertySpec& spec, const Graph& g) {
  const RecordScore s = ScoreProperties(spec, ComputeProperties(g));
  return {s.closeness, s.match};
}

bool NotWorse(const Scored& a, const Scored& b) {
  return std::tie(a.closeness, a.match) >= std::tie(b.closeness, b.match);
}

bool Better(const Scored& a, const Scored& b) {
  return std::tie(a.closeness, a.match) > std::tie(b.closeness, b.match);
}

Graph InitialGraph(const PropertySpec& spec, const SearchConfig& cfg, Rng& rng) {
  if (spec.has(PropertyKind::kNode)) {
    const int n = std::clamp(spec.at(PropertyKind::kNode), 0, cfg.capacity);
    if (n == 0) return Graph(cfg.capacity);
    return SampleGraphWithNodes(cfg.families, n, cfg.capacity, rng).graph;
  }
  // Segments are clipped to the capacity so a small capacity still works.
  FamilyConfig fits = cfg.families;
  std::erase_if(fits.segments,
                [&](const NodeSegment& s) { return s.min_nodes > cfg.capacity; });
  for (NodeSegment& s : fits.segments) s.max_nodes = std::min(s.max_nodes, cfg.capacity);
  if (fits.segments.empty()) fits = FamilyConfig::Restricted(1, cfg.capacity);
  return SampleGraph(fits, cfg.capacity, rng).graph;
}

// Applies one random move in place.
void Move(Graph& g, const SearchConfig& cfg, Rng& rng) {
  const std::vector<int> active = g.ActiveNodes();
  if (active.size() < 2 || Uniform01(rng) < cfg.node_move_prob) {
    const int v = UniformInt(rng, 0, cfg.capacity - 1);
    if (g.active(v)) {
      g.Deactivate(v);
    } else {
      g.Activate(v);
    }
    return;
  }
  const int n = static_cast<int>(active.size());
  const int a = UniformInt(rng, 0, n - 1);
  int b = UniformInt(rng, 0, n - 2);
  if (b >= a) ++b;
  g.ToggleEdge(active[a], active[b]);
}

struct RestartResult {
  Graph graph;
  Scored score;
  long moves = 0;
};

RestartResult RunRestart(const PropertySpec& spec, const SearchConfig& cfg,
                         int restart, int moves) {
  Rng rng(MixSeed(cfg.seed, static_cast<std::uint64_t>(restart)));
  Graph current = InitialGraph(spec, cfg, rng);
  Scored current_score = Evaluate(spec, current);
  RestartResult best{current, current_score, 0};
  const double cooling =
      moves > 1 ? std::pow(cfg.t_end / cfg.t_start, 1.0 / (moves - 1)) : 1.0;
  double temperature = cfg.t_start;
  for (int step = 0; step < moves && best.score.match < 1.0; ++step) {
    Graph next = current;
    Move(next, cfg, rng);
    const Scored s = Evaluate(spec, next);
    ++best.moves;
    bool accept = NotWorse(s, current_score);
    if (!accept && cfg.anneal) {
      const double delta = s.closeness - current_score.closeness;
      accept = Uniform01(rng) < std::exp(delta / temperature);
    }
    if (accept) {
      current = std::move(next);
      current_score = s;
      if (Better(current_score, best.score)) {
        best.graph = current;
        best.score = current_score;
      }
    }
    temperature *= cooling;
  }
  return best;
}

}  // namespace

void SearchConfig::Validate() const {
  if (budget < 1) throw DataError("search budget must be >= 1");
  if (restarts < 1) throw DataError("search restarts must be >= 1");
  if (!(t_start > 0) || !(t_end > 0) || t_end > t_start) {
    throw DataError("search temperatures must be positive and decreasing");
  }
  if (!(node_move_prob >= 0 && node_move_prob <= 1)) {
    throw DataError("node_move_prob must be in [0, 1]");
  }
  if (capacity < 1) throw DataError("search capacity must be positive");
  families.Validate();
}

SearchResult Synthesize(const PropertySpec& spec, const SearchConfig& cfg) {
  cfg.Validate();
  if (spec.empty()) throw DataError("cannot synthesize for an empty spec");
  const int per_restart = std::max(1, cfg.budget / cfg.restarts);
  SearchResult result;
  bool have = false;
  for (int r = 0; r < cfg.restarts; ++r) {
    RestartResult rr = RunRestart(spec, cfg, r, per_restart);
    result.moves += rr.moves;
    if (!have || std::tie(rr.score.match, rr.score.closeness) >
                     std::tie(result.prop_match, result.closeness)) {
      result.graph = std::move(rr.graph);
      result.prop_match = rr.score.match;
      result.closeness = rr.score.closeness;
      result.restart = r;
      have = true;
    }
    if (result.prop_match >= 1.0) break;
  }
  return result;
}

}  // namespace lcgraph
