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

#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "doctest.h"
#include "lcgraph/dataset.h"
#include "lcgraph/errors.h"
#include "lcgraph/random.h"

using lcgraph::Family;
using lcgraph::PropertyKind;
using lcgraph::Rng;
using lcgraph::SelectionMode;

namespace fs = std::filesystem;

namespace {

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path TempDir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("lcgraph_test_dataset_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

lcgraph::PropertySpec FullSpec() {
  lcgraph::PropertySpec s;
  for (PropertyKind k : lcgraph::kAllProperties) s.set(k, k == PropertyKind::kCycle ? 1 : 4);
  return s;
}

}  // namespace

TEST_CASE("family generators respect their structure") {
  Rng rng(1);
  for (int n = 1; n <= 30; ++n) {
    const auto tree = lcgraph::ComputeProperties(lcgraph::UniformTree(n, 50, rng));
    CHECK(tree.at(PropertyKind::kNode) == n);
    CHECK(tree.at(PropertyKind::kEdge) == n - 1);
    CHECK(tree.at(PropertyKind::kCycle) == 0);
    CHECK(tree.at(PropertyKind::kCCNum) == 1);
  }
  for (Family f : {Family::kScaleFree, Family::kErdosRenyi, Family::kRandomGeometric,
                   Family::kUniformTree}) {
    for (int n : {1, 2, 3, 9, 40}) {
      const lcgraph::Graph g =
          lcgraph::GenerateFamily(f, n, lcgraph::FamilyConfig{}.segments[0], 50, rng);
      CHECK(g.SatisfiesInvariants());
      CHECK(g.NumActive() == n);
    }
  }
  CHECK_THROWS(lcgraph::UniformTree(9, 8, rng));
}

TEST_CASE("Erdos-Renyi edge counts match the binomial mean") {
  Rng rng(2);
  const auto seg = lcgraph::FamilyConfig{}.segments[0];
  for (int n = seg.min_nodes; n <= seg.max_nodes; ++n) {
    const int samples = 2000;
    const double pairs = n * (n - 1) / 2.0;
    double sum = 0;
    for (int i = 0; i < samples; ++i) sum += lcgraph::ErdosRenyi(n, 0.3, 50, rng).NumEdges();
    const double mean = sum / samples;
    const double se = std::sqrt(pairs * 0.3 * 0.7 / samples);
    CAPTURE(n);
    CHECK(std::abs(mean - 0.3 * pairs) <= 3 * se);
  }
}

TEST_CASE("family mixture frequencies") {
  Rng rng(3);
  const lcgraph::FamilyConfig cfg;
  std::array<int, lcgraph::kNumFamilies> counts{};
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    ++counts[static_cast<int>(lcgraph::SampleGraph(cfg, 50, rng).family)];
  }
  for (int f = 0; f < lcgraph::kNumFamilies; ++f) {
    CHECK(std::abs(counts[f] / double(draws) - cfg.weights[f]) <= 0.02);
  }
}

TEST_CASE("node counts stay inside the configured segments") {
  Rng rng(4);
  const auto cfg = lcgraph::FamilyConfig::Restricted(3, 8);
  for (int i = 0; i < 2000; ++i) {
    const int n = lcgraph::SampleGraph(cfg, 8, rng).graph.NumActive();
    CHECK(n >= 3);
    CHECK(n <= 8);
  }
  lcgraph::FamilyConfig bad;
  bad.weights = {0.5, 0.5, 0.5, 0.0};
  CHECK_THROWS_AS(bad.Validate(), std::invalid_argument);
}

TEST_CASE("simple selection keeps exactly nodes and edges") {
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const auto s = lcgraph::SelectProperties(FullSpec(), SelectionMode::kSimple, rng);
    CHECK(s.kinds() == std::vector<PropertyKind>{PropertyKind::kNode, PropertyKind::kEdge});
  }
}

TEST_CASE("complex selection co-occurrence") {
  Rng rng(6);
  const int draws = 100000;
  int both = 0;
  for (int i = 0; i < draws; ++i) {
    const auto s = lcgraph::SelectProperties(FullSpec(), SelectionMode::kComplex, rng);
    REQUIRE(s.has(PropertyKind::kNode));
    REQUIRE(s.has(PropertyKind::kEdge));
    both += s.has(PropertyKind::kMaxDeg) && s.has(PropertyKind::kDiam);
  }
  CHECK(std::abs(both / double(draws) - 0.30) <= 0.01);
}

TEST_CASE("anyprop selection draws k uniformly") {
  Rng rng(7);
  const int draws = 100000;
  std::map<int, int> counts;
  for (int i = 0; i < draws; ++i) {
    const auto s = lcgraph::SelectProperties(FullSpec(), SelectionMode::kAnyProp, rng);
    ++counts[s.size()];
    CHECK(s.IsSubsetOf(FullSpec()));
  }
  CHECK(counts.size() == 6);
  for (int k = 2; k <= 7; ++k) CHECK(std::abs(counts[k] / double(draws) - 1.0 / 6) <= 0.01);

  for (int k = 1; k <= 7; ++k) CHECK(lcgraph::SelectKProperties(FullSpec(), k, rng).size() == k);
}

TEST_CASE("records are consistent and round-trip through JSON") {
  lcgraph::SplitConfig cfg;
  cfg.split = "test";
  cfg.size = 300;
  cfg.seed = 17;
  cfg.mode = SelectionMode::kComplex;
  for (const auto& r : lcgraph::GenerateRecords(cfg)) {
    CHECK(r.full_props == lcgraph::ComputeProperties(r.graph));
    CHECK(r.spec.IsSubsetOf(r.full_props));
    CHECK(lcgraph::ParseDescription(r.text.text) == r.spec);
    const auto back = lcgraph::RecordFromJson(lcgraph::RecordToJson(r));
    CHECK(back.id == r.id);
    CHECK(back.spec == r.spec);
    CHECK(back.full_props == r.full_props);
    CHECK(back.text.text == r.text.text);
    CHECK(lcgraph::RecordToJson(back).dump() == lcgraph::RecordToJson(r).dump());
  }
}

TEST_CASE("records with inconsistent specs are rejected") {
  lcgraph::SplitConfig cfg;
  cfg.size = 1;
  auto j = lcgraph::RecordToJson(lcgraph::GenerateRecord(cfg, 0));
  j["spec"]["Node"] = j["n"].get<int>() + 1;
  CHECK_THROWS_AS(lcgraph::RecordFromJson(j), lcgraph::DataError);
  auto k = lcgraph::RecordToJson(lcgraph::GenerateRecord(cfg, 0));
  k.erase("edges");
  CHECK_THROWS_AS(lcgraph::RecordFromJson(k), lcgraph::DataError);
}

TEST_CASE("generation is deterministic across workers and runs") {
  lcgraph::SplitConfig cfg;
  cfg.split = "test";
  cfg.size = 500;
  cfg.seed = 99;
  cfg.text_mode = lcgraph::DescriptionMode::kWordNumber;
  const fs::path dir = TempDir("determinism");
  lcgraph::GenerateSplit(cfg, dir / "a.jsonl", 1);
  lcgraph::GenerateSplit(cfg, dir / "b.jsonl", 3);
  lcgraph::GenerateSplit(cfg, dir / "c.jsonl", 1);
  const std::string a = Slurp(dir / "a.jsonl");
  CHECK(a == Slurp(dir / "b.jsonl"));
  CHECK(a == Slurp(dir / "c.jsonl"));
  CHECK(fs::exists(dir / "a.jsonl.meta.json"));
  CHECK(std::count(a.begin(), a.end(), '\n') == 500);
  CHECK(lcgraph::ReadRecords(dir / "a.jsonl").size() == 500);

  cfg.seed = 100;
  lcgraph::GenerateSplit(cfg, dir / "d.jsonl", 1);
  CHECK(a != Slurp(dir / "d.jsonl"));
  fs::remove_all(dir);
}

TEST_CASE("shuffled-number records are recognised on load") {
  lcgraph::SplitConfig cfg;
  cfg.size = 20;
  cfg.text_mode = lcgraph::DescriptionMode::kShuffledNumbers;
  for (const auto& r : lcgraph::GenerateRecords(cfg)) {
    const auto back = lcgraph::RecordFromJson(lcgraph::RecordToJson(r));
    CHECK(back.text.mode == lcgraph::DescriptionMode::kShuffledNumbers);
  }
}

TEST_CASE("descriptive statistics") {
  std::vector<lcgraph::DatasetRecord> records(5);
  for (int i = 0; i < 5; ++i) {
    records[i].full_props = FullSpec();
    records[i].full_props.set(PropertyKind::kNode, i + 1);
  }
  const auto stats = lcgraph::DescribeRecords(records)[0];
  CHECK(stats.mean == doctest::Approx(3.0));
  CHECK(stats.median == doctest::Approx(3.0));
  CHECK(stats.min == 1.0);
  CHECK(stats.max == 5.0);
  CHECK(stats.stddev == doctest::Approx(std::sqrt(2.5)));
}
