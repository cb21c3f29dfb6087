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

#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "lcgraph/metrics.h"
#include "oracles.h"

using lcgraph::EvalPair;
using lcgraph::Graph;
using lcgraph::PropertyKind;
using lcgraph::PropertySpec;

namespace {

Graph PathWithEdges(int n, int edges) {
  Graph g = Graph::WithActiveNodes(n, n);
  for (int i = 0; i + 1 < n && edges > 0; ++i, --edges) g.AddEdge(i, i + 1);
  return g;
}

}  // namespace

TEST_CASE("record score examples") {
  const Graph tri = Graph::FromEdges(3, std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {0, 2}}, 3);
  const PropertySpec full = lcgraph::ComputeProperties(tri);
  const auto perfect = lcgraph::ScoreRecord({full, tri, std::nullopt});
  CHECK(perfect.match == 1.0);
  CHECK(perfect.closeness == 1.0);

  PropertySpec s;
  s.set(PropertyKind::kNode, 5);
  s.set(PropertyKind::kEdge, 6);
  const auto half = lcgraph::ScoreRecord({s, PathWithEdges(5, 4), std::nullopt});
  CHECK(half.match == 0.5);
  CHECK(half.closeness == doctest::Approx((1 + std::exp(-4.0)) / 2).epsilon(1e-12));
  CHECK(half.closeness == doctest::Approx(0.5092).epsilon(1e-4));

  PropertySpec cyc;
  cyc.set(PropertyKind::kCycle, 1);
  const auto acyclic = lcgraph::ScoreRecord({cyc, PathWithEdges(4, 3), std::nullopt});
  CHECK(acyclic.match == 0.0);
  CHECK(acyclic.closeness == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

  CHECK_THROWS_AS(lcgraph::ScoreProperties(PropertySpec{}, full), std::invalid_argument);
}

TEST_CASE("aggregation examples") {
  PropertySpec n2;
  n2.set(PropertyKind::kNode, 2);
  PropertySpec got0;
  got0.set(PropertyKind::kNode, 2);
  lcgraph::EvalAccumulator one;
  one.Add(n2, got0, 2);
  auto r = one.Report();
  CHECK(r.prop_match == 1.0);
  CHECK(r.closeness == 1.0);
  CHECK(r.count == 1);

  // Integer distances cannot hit closeness 0.2 exactly; the mean is
  // checked against the arithmetic mean of what they do produce.
  lcgraph::EvalAccumulator two;
  two.Add(n2, got0, 2);
  PropertySpec far;
  far.set(PropertyKind::kNode, 2);
  PropertySpec off;
  off.set(PropertyKind::kNode, 40);
  two.Add(far, off, 2);
  r = two.Report();
  CHECK(r.prop_match == 0.5);
  CHECK(r.closeness == doctest::Approx((1 + std::exp(-38.0 * 38.0)) / 2));
  CHECK(r.buckets[0]->count == 2);
  CHECK_FALSE(r.buckets[1].has_value());
  CHECK(r.per_property[lcgraph::PropertyIndex(PropertyKind::kNode)]->count == 2);
  CHECK_FALSE(r.per_property[lcgraph::PropertyIndex(PropertyKind::kEdge)].has_value());

  CHECK_THROWS_AS(lcgraph::EvalAccumulator{}.Report(), std::invalid_argument);
}

TEST_CASE("buckets") {
  CHECK(lcgraph::BucketFor(1) == 0);
  CHECK(lcgraph::BucketFor(5) == 0);
  CHECK(lcgraph::BucketFor(6) == 1);
  CHECK(lcgraph::BucketFor(25) == 2);
  CHECK(lcgraph::BucketFor(50) == 3);
  CHECK_FALSE(lcgraph::BucketFor(0).has_value());
  CHECK_FALSE(lcgraph::BucketFor(51).has_value());
}

TEST_CASE("metrics agree with the direct-formula oracle on 1000 random pairs") {
  std::mt19937_64 rng(2026);
  std::bernoulli_distribution keep(0.5);
  std::vector<EvalPair> pairs;
  double sum_m = 0, sum_c = 0;
  for (int t = 0; t < 1000; ++t) {
    const Graph truth = lcgraph::testing::RandomTestGraph(rng);
    const Graph pred = lcgraph::testing::RandomTestGraph(rng);
    const PropertySpec full = lcgraph::ComputeProperties(truth);
    PropertySpec spec;
    for (PropertyKind k : lcgraph::kAllProperties) {
      if (keep(rng)) spec.set(k, full.at(k));
    }
    if (spec.empty()) spec.set(PropertyKind::kNode, full.at(PropertyKind::kNode));

    const auto [m, c] = lcgraph::testing::OracleScore(spec, lcgraph::testing::OracleProperties(pred));
    const auto got = lcgraph::ScoreRecord({spec, pred, truth});
    CHECK(std::abs(got.match - m) <= 1e-12);
    CHECK(std::abs(got.closeness - c) <= 1e-12);
    CHECK(got.match <= got.closeness);
    CHECK(got.closeness <= 1.0);
    sum_m += m;
    sum_c += c;
    pairs.push_back({spec, pred, truth});
  }
  const auto report = lcgraph::Aggregate(pairs);
  CHECK(report.count == 1000);
  CHECK(std::abs(report.prop_match - sum_m / 1000) <= 1e-12);
  CHECK(std::abs(report.closeness - sum_c / 1000) <= 1e-12);
  CHECK(report.prop_match <= report.closeness);
}

TEST_CASE("merging accumulators matches a single pass") {
  std::mt19937_64 rng(9);
  lcgraph::EvalAccumulator all, left, right;
  for (int t = 0; t < 200; ++t) {
    const Graph truth = lcgraph::testing::RandomTestGraph(rng);
    const Graph pred = lcgraph::testing::RandomTestGraph(rng);
    const EvalPair p{lcgraph::ComputeProperties(truth), pred, truth};
    all.Add(p);
    (t % 3 ? left : right).Add(p);
  }
  left.Merge(right);
  const auto a = all.Report(), b = left.Report();
  CHECK(a.count == b.count);
  CHECK(a.prop_match == doctest::Approx(b.prop_match).epsilon(1e-12));
  CHECK(a.closeness == doctest::Approx(b.closeness).epsilon(1e-12));
}

TEST_CASE("report rendering") {
  PropertySpec s;
  s.set(PropertyKind::kNode, 3);
  lcgraph::EvalAccumulator acc;
  acc.Add(s, s, 3);
  const auto r = acc.Report();
  const auto j = lcgraph::ReportToJson(r);
  CHECK(j["prop_match"] == 1.0);
  CHECK(j["count"] == 1);
  const std::string table = lcgraph::FormatReportTable(r, "demo");
  CHECK(table.find("demo") != std::string::npos);
  CHECK(table.find("Node") != std::string::npos);
  CHECK(lcgraph::FormatReportTable(r, "demo", false, false).size() < table.size());
}
