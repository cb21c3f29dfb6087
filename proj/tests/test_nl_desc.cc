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

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "lcgraph/errors.h"
#include "lcgraph/nl_desc.h"

using lcgraph::DescriptionMode;
using lcgraph::PropertyKind;
using lcgraph::PropertySpec;
using lcgraph::RenderConfig;

namespace {

PropertySpec RandomSpec(std::mt19937_64& rng, int max_value) {
  PropertySpec s;
  std::bernoulli_distribution present(0.5);
  std::uniform_int_distribution<int> value(0, max_value);
  while (s.empty()) {
    for (PropertyKind k : lcgraph::kAllProperties) {
      if (!present(rng)) continue;
      s.set(k, k == PropertyKind::kCycle ? value(rng) % 2 : value(rng));
    }
  }
  return s;
}

std::multiset<int> Values(const PropertySpec& s) {
  std::multiset<int> out;
  for (PropertyKind k : s.kinds()) out.insert(s.at(k));
  return out;
}

}  // namespace

TEST_CASE("rendering examples") {
  PropertySpec s;
  s.set(PropertyKind::kNode, 10);
  s.set(PropertyKind::kEdge, 20);
  s.set(PropertyKind::kMinDeg, 1);
  CHECK(lcgraph::Render(s, {}).text == "10 nodes, 20 edges and minimum degree 1");

  PropertySpec two;
  two.set(PropertyKind::kNode, 2);
  RenderConfig words;
  words.mode = DescriptionMode::kWordNumber;
  CHECK(lcgraph::Render(two, words).text == "two nodes");

  // Some seed produces the (Edge, MinDeg, Node) order.
  RenderConfig shuffled;
  shuffled.mode = DescriptionMode::kShuffledNumbers;
  bool found = false;
  for (std::uint64_t seed = 0; seed < 64 && !found; ++seed) {
    shuffled.rng_seed = seed;
    found = lcgraph::Render(s, shuffled).text == "20 1 10";
  }
  CHECK(found);

  PropertySpec cyc;
  cyc.set(PropertyKind::kCycle, 0);
  cyc.set(PropertyKind::kCCNum, 3);
  CHECK(lcgraph::Render(cyc, {}).text == "3 connected components and no cycle exists");
  CHECK_THROWS_AS(lcgraph::Render(PropertySpec{}, {}), std::invalid_argument);
}

TEST_CASE("number words") {
  CHECK(lcgraph::NumberToWords(0) == "zero");
  CHECK(lcgraph::NumberToWords(13) == "thirteen");
  CHECK(lcgraph::NumberToWords(40) == "forty");
  CHECK(lcgraph::NumberToWords(47) == "forty-seven");
  CHECK(lcgraph::NumberToWords(300) == "three hundred");
  CHECK(lcgraph::NumberToWords(512) == "five hundred twelve");
  for (int v = 0; v < 1000; ++v) {
    PropertySpec s;
    s.set(PropertyKind::kEdge, v);
    CHECK(lcgraph::ParseDescription(lcgraph::NumberToWords(v) + " edges") == s);
  }
}

TEST_CASE("parsing examples") {
  PropertySpec want;
  want.set(PropertyKind::kNode, 10);
  want.set(PropertyKind::kEdge, 20);
  want.set(PropertyKind::kMinDeg, 1);
  CHECK(lcgraph::ParseDescription("10 nodes, 20 edges and minimum degree 1") == want);
  CHECK(lcgraph::ParseDescription("  Minimum degree 1 , 20 EDGES,10 nodes ") == want);

  PropertySpec five;
  five.set(PropertyKind::kNode, 5);
  CHECK(lcgraph::ParseDescription("five nodes") == five);
  CHECK(lcgraph::ParseDescription("5 nodes and five nodes") == five);
}

TEST_CASE("parse errors name the offending span") {
  const std::string text = "10 nodes, 3 purple squares and diameter 2";
  try {
    lcgraph::ParseDescription(text);
    FAIL("expected a parse error");
  } catch (const lcgraph::ParseError& e) {
    CHECK(text.substr(e.offset(), e.length()) == "3 purple squares");
  }
  CHECK_THROWS_AS(lcgraph::ParseDescription(""), lcgraph::ParseError);
  CHECK_THROWS_AS(lcgraph::ParseDescription(" , and "), lcgraph::ParseError);
  CHECK_THROWS_AS(lcgraph::ParseDescription("nodes"), lcgraph::ParseError);
  CHECK_THROWS_AS(lcgraph::ParseDescription("5 nodes and 6 nodes"), lcgraph::ConflictError);
  CHECK_THROWS_AS(lcgraph::ParseDescription("a cycle exists and no cycle exists"),
                  lcgraph::ConflictError);
}

TEST_CASE("parse inverts render on 10000 random specs") {
  std::mt19937_64 rng(42);
  int failures = 0;
  for (int t = 0; t < 10000; ++t) {
    const PropertySpec s = RandomSpec(rng, t % 2 ? 50 : 999);
    RenderConfig cfg;
    cfg.mode = t % 3 == 0 ? DescriptionMode::kWordNumber : DescriptionMode::kNumeric;
    cfg.shuffle_properties = (t / 3) % 2 == 1;
    cfg.rng_seed = rng();
    const auto d = lcgraph::Render(s, cfg);
    if (lcgraph::ParseDescription(d.text) != s) {
      ++failures;
      if (failures < 5) MESSAGE("round trip failed: " << d.text);
    }
  }
  CHECK(failures == 0);
}

TEST_CASE("shuffled numbers hold exactly the spec values") {
  std::mt19937_64 rng(5);
  std::set<std::string> orders;
  PropertySpec fixed;
  fixed.set(PropertyKind::kNode, 10);
  fixed.set(PropertyKind::kEdge, 20);
  fixed.set(PropertyKind::kMinDeg, 1);
  for (int t = 0; t < 2000; ++t) {
    const PropertySpec s = RandomSpec(rng, 50);
    RenderConfig cfg;
    cfg.mode = DescriptionMode::kShuffledNumbers;
    cfg.rng_seed = rng();
    const std::string text = lcgraph::Render(s, cfg).text;
    CHECK(text.find_first_not_of("0123456789 ") == std::string::npos);
    const auto parsed = lcgraph::ParseNumberList(text);
    CHECK(std::multiset<int>(parsed.begin(), parsed.end()) == Values(s));
    orders.insert(lcgraph::Render(fixed, cfg).text);
  }
  CHECK(orders.size() == 6);
  CHECK_THROWS_AS(lcgraph::ParseNumberList("3 x 4"), lcgraph::ParseError);
}

TEST_CASE("unlabeled numbers follow the rank heuristic") {
  const std::vector<int> values = {1, 20, 10};
  const PropertySpec s = lcgraph::AssignUnlabeledNumbers(values);
  CHECK(s.at(PropertyKind::kEdge) == 20);
  CHECK(s.at(PropertyKind::kNode) == 10);
  CHECK(s.at(PropertyKind::kMaxDeg) == 1);
  CHECK(s.size() == 3);
}

TEST_CASE("condition encoding examples") {
  const auto zero = lcgraph::EncodeCondition(PropertySpec{});
  CHECK(std::all_of(zero.begin(), zero.end(), [](double v) { return v == 0.0; }));

  PropertySpec cyc;
  cyc.set(PropertyKind::kCycle, 1);
  const auto c = lcgraph::EncodeCondition(cyc);
  CHECK(std::count(c.begin(), c.end(), 1.0) == 2);
  CHECK(std::count(c.begin(), c.end(), 0.0) == lcgraph::kConditionDim - 2);

  PropertySpec n50;
  n50.set(PropertyKind::kNode, 50);
  const auto n = lcgraph::EncodeCondition(n50);
  const int i = lcgraph::PropertyIndex(PropertyKind::kNode);
  CHECK(n[2 * i] == 1.0);
  CHECK(n[2 * i + 1] == 1.0);

  // Presence slots keep an explicit zero apart from an absent property.
  PropertySpec cyc0;
  cyc0.set(PropertyKind::kCycle, 0);
  CHECK(lcgraph::EncodeCondition(cyc0) != zero);
}

TEST_CASE("condition encoding is injective on random specs") {
  std::mt19937_64 rng(8);
  std::map<lcgraph::ConditionVector, PropertySpec> seen;
  for (int t = 0; t < 5000; ++t) {
    const PropertySpec s = RandomSpec(rng, 60);
    const auto [it, inserted] = seen.emplace(lcgraph::EncodeCondition(s), s);
    if (!inserted) CHECK(it->second == s);
  }
}

TEST_CASE("text encoders agree with the spec encoder") {
  PropertySpec s;
  s.set(PropertyKind::kNode, 7);
  s.set(PropertyKind::kEdge, 9);
  const std::string text = lcgraph::Render(s, {}).text;
  CHECK(lcgraph::PropertyConditionEncoder().Encode(text) == lcgraph::EncodeCondition(s));
  CHECK(lcgraph::UnlabeledNumberEncoder().Encode("9 7") == lcgraph::EncodeCondition(s));
}

TEST_CASE("template tables reject malformed input") {
  CHECK_THROWS_AS(lcgraph::TemplateTable::FromText("Node\t{} nodes\n"), lcgraph::DataError);
  CHECK_THROWS_AS(lcgraph::TemplateTable::FromText("Bogus\tx {}\n"), lcgraph::DataError);
  CHECK(lcgraph::TemplateTable::Default().templates().size() >= 7);
}
