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

#ifndef LCGRAPH_SEARCH_H_
#define LCGRAPH_SEARCH_H_

#include <cstdint>

#include "lcgraph/dataset.h"
#include "lcgraph/graph.h"

namespace lcgraph {

struct SearchConfig {
  // Total moves over all restarts; each restart gets budget / restarts.
  int budget = 10000;
  int restarts = 5;
  // Off: greedy, accepting moves that do not lower the objective.
  bool anneal = false;
  double t_start = 1.0;
  double t_end = 0.01;
  // Probability that a move toggles a node rather than an edge.
  double node_move_prob = 0.1;
  std::uint64_t seed = 0;
  int capacity = kDefaultCapacity;
  FamilyConfig families;

  // Throws DataError.
  void Validate() const;
};

struct SearchResult {
  Graph graph;
  double prop_match = 0;
  double closeness = 0;
  int restart = 0;  // index of the restart that produced the graph
  long moves = 0;   // moves made over all restarts
};

// Hill climbing on (closeness, prop_match), compared lexicographically.
// Restart r starts from a graph sampled with Rng(MixSeed(seed, r)), with n
// set to the spec's Node value when present. The best restart is chosen by
// (prop_match, closeness, lower index); a restart reaching prop_match 1
// ends the search. Unsatisfiable specs return the best graph found.
// Throws DataError on an empty spec.
SearchResult Synthesize(const PropertySpec& spec, const SearchConfig& cfg);

}  // namespace lcgraph

#endif  // LCGRAPH_SEARCH_H_
