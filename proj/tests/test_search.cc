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

#include "doctest.h"
#include "lcgraph/errors.h"
#include "lcgraph/metrics.h"
#include "lcgraph/search.h"
#include "oracles.h"

using lcgraph::PropertyKind;
using lcgraph::PropertySpec;
using lcgraph::SearchConfig;

TEST_CASE("a tree spec is solved") {
  PropertySpec s;
  s.set(PropertyKind::kNode, 5);
  s.set(PropertyKind::kEdge, 4);
  s.set(PropertyKind::kCycle, 0);
  SearchConfig cfg;
  cfg.seed = 1;
  const auto r = lcgraph::Synthesize(s, cfg);
  CHECK(r.prop_match == 1.0);
  CHECK(r.closeness == 1.0);
  CHECK(r.graph.SatisfiesInvariants());
  const PropertySpec got = lcgraph::testing::OracleProperties(r.graph);
  CHECK(got.at(PropertyKind::kNode) == 5);
  CHECK(got.at(PropertyKind::kEdge) == 4);
  CHECK(got.at(PropertyKind::kCycle) == 0);
  CHECK(got.at(PropertyKind::kCCNum) == 1);
  CHECK(r.moves <= cfg.budget);
}

TEST_CASE("an infeasible spec returns a best effort") {
  PropertySpec s;
  s.set(PropertyKind::kNode, 3);
  s.set(PropertyKind::kEdge, 8);
  SearchConfig cfg;
  cfg.seed = 2;
  const auto r = lcgraph::Synthesize(s, cfg);
  CHECK(r.prop_match < 1.0);
  CHECK(r.graph.SatisfiesInvariants());
  const PropertySpec got = lcgraph::ComputeProperties(r.graph);
  // Either the node count or the edge count has to give.
  CHECK(r.prop_match == 0.5);
  if (got.at(PropertyKind::kNode) == 3) CHECK(got.at(PropertyKind::kEdge) == 3);
}

TEST_CASE("simple dataset specs are solved within the budget") {
  lcgraph::SplitConfig data;
  data.split = "test";
  data.size = 200;
  data.seed = 31;
  data.families = lcgraph::FamilyConfig::Restricted(5, 15);
  int solved = 0;
  lcgraph::EvalAccumulator acc;
  for (const auto& r : lcgraph::GenerateRecords(data)) {
    SearchConfig cfg;
    cfg.seed = r.id;
    const auto res = lcgraph::Synthesize(r.spec, cfg);
    solved += res.prop_match == 1.0;
    acc.Add({r.spec, res.graph, r.graph});
    CHECK(res.prop_match == doctest::Approx(lcgraph::ScoreRecord({r.spec, res.graph, r.graph}).match));
  }
  MESSAGE("solved " << solved << " / 200");
  CHECK(solved >= 190);
  CHECK(acc.Report().prop_match >= 0.95);
}

TEST_CASE("search is deterministic and honours the capacity") {
  PropertySpec s;
  s.set(PropertyKind::kNode, 6);
  s.set(PropertyKind::kEdge, 7);
  s.set(PropertyKind::kDiam, 3);
  SearchConfig cfg;
  cfg.seed = 77;
  cfg.anneal = true;
  cfg.capacity = 8;
  const auto a = lcgraph::Synthesize(s, cfg), b = lcgraph::Synthesize(s, cfg);
  CHECK(a.graph == b.graph);
  CHECK(a.moves == b.moves);
  CHECK(a.graph.capacity() == 8);

  PropertySpec big;
  big.set(PropertyKind::kNode, 12);
  const auto c = lcgraph::Synthesize(big, cfg);
  CHECK(c.graph.NumActive() <= 8);
  CHECK(c.prop_match == 0.0);

  PropertySpec edges_only;
  edges_only.set(PropertyKind::kEdge, 5);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    cfg.seed = seed;
    const auto d = lcgraph::Synthesize(edges_only, cfg);
    CHECK(d.graph.capacity() == 8);
    CHECK(d.prop_match == 1.0);
  }
}

TEST_CASE("search config validation") {
  SearchConfig cfg;
  cfg.budget = 0;
  CHECK_THROWS_AS(cfg.Validate(), lcgraph::DataError);
  cfg = SearchConfig{};
  cfg.node_move_prob = 1.5;
  CHECK_THROWS_AS(cfg.Validate(), lcgraph::DataError);
  cfg = SearchConfig{};
  cfg.t_end = 2.0;
  cfg.anneal = true;
  CHECK_THROWS_AS(cfg.Validate(), lcgraph::DataError);
}
