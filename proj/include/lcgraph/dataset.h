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

#ifndef LCGRAPH_DATASET_H_
#define LCGRAPH_DATASET_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "lcgraph/graph.h"
#include "lcgraph/io.h"
#include "lcgraph/nl_desc.h"
#include "lcgraph/random.h"

namespace lcgraph {

inline constexpr std::string_view kGeneratorVersion = "lcgraph-dataset/1";

enum class Family : std::uint8_t {
  kScaleFree = 0,
  kErdosRenyi,
  kRandomGeometric,
  kUniformTree,
};

inline constexpr int kNumFamilies = 4;

std::string_view FamilyName(Family family);
// Throws DataError.
Family FamilyFromName(std::string_view name);

// Inclusive node-count range with the Erdos-Renyi edge probability and the
// random-geometric radius attached to it.
struct NodeSegment {
  int min_nodes;
  int max_nodes;
  double er_p;
  double rgg_radius;
};

struct FamilyConfig {
  // ScaleFree, ErdosRenyi, RandomGeometric, UniformTree.
  std::array<double, kNumFamilies> weights = {0.3, 0.3, 0.3, 0.1};
  // A3 and A4 share the value 40.
  std::vector<NodeSegment> segments = {
      {5, 9, 0.3, 0.5},
      {10, 24, 0.2, 0.4},
      {25, 40, 0.1, 0.2},
      {40, 50, 0.2, 0.2},
  };

  // A single segment [min_nodes, max_nodes] using the first default
  // segment's parameters; used for desk-scale datasets.
  static FamilyConfig Restricted(int min_nodes, int max_nodes);

  int MaxNodes() const;
  // Throws std::invalid_argument if weights do not sum to 1 or segments are
  // empty or inverted.
  void Validate() const;
};

// Shape parameters of the directed scale-free process; the defaults are the
// reference generator's.
struct ScaleFreeParams {
  double alpha = 0.41;
  double beta = 0.54;
  double gamma = 0.05;
  double delta_in = 0.2;
  double delta_out = 0.0;
};

// Individual generators. Nodes 0..n-1 are active in the result.
Graph ErdosRenyi(int n, double p, int capacity, Rng& rng);
Graph RandomGeometric(int n, double radius, int capacity, Rng& rng);
Graph UniformTree(int n, int capacity, Rng& rng);
// Directed preferential-attachment process started from a directed
// 3-cycle, collapsed to a simple undirected graph (loops and parallel edges
// dropped). Requires n >= 3.
Graph ScaleFree(int n, int capacity, Rng& rng,
                const ScaleFreeParams& params = {});

Graph GenerateFamily(Family family, int n, const NodeSegment& segment,
                     int capacity, Rng& rng);

struct SampledGraph {
  Graph graph;
  Family family;
};

// Family by weight, segment uniformly, n uniformly within the segment.
SampledGraph SampleGraph(const FamilyConfig& cfg, int capacity, Rng& rng);

// Like SampleGraph but with n fixed; parameters come from the first
// segment containing n (or the nearest segment).
SampledGraph SampleGraphWithNodes(const FamilyConfig& cfg, int n,
                                  int capacity, Rng& rng);

enum class SelectionMode : std::uint8_t { kSimple, kComplex, kAnyProp };

std::string_view SelectionModeName(SelectionMode mode);
// "simple", "complex", "anyprop". Throws std::invalid_argument.
SelectionMode SelectionModeFromName(std::string_view name);

// Inclusion probability of each optional property in complex mode.
inline constexpr double kComplexInclusion = 0.55;

// simple: {Node, Edge}; complex: {Node, Edge} + each other property with
// probability 0.55; anyprop: k uniform in [2, 7], then a uniform k-subset.
PropertySpec SelectProperties(const PropertySpec& full, SelectionMode mode,
                              Rng& rng);

// Uniform k-subset of all seven properties (k in [1, 7]).
PropertySpec SelectKProperties(const PropertySpec& full, int k, Rng& rng);

struct DatasetRecord {
  std::uint64_t id = 0;
  Family family = Family::kErdosRenyi;
  Description text;
  PropertySpec spec;
  PropertySpec full_props;
  Graph graph;
};

nlohmann::json RecordToJson(const DatasetRecord& record);
// Recomputes the graph properties and throws DataError if the stored
// properties disagree or the spec is not a subset of them.
DatasetRecord RecordFromJson(const nlohmann::json& j,
                             int capacity = kDefaultCapacity);

struct SplitConfig {
  std::string split = "train";
  std::int64_t size = 100000;
  std::uint64_t seed = 0;
  SelectionMode mode = SelectionMode::kSimple;
  DescriptionMode text_mode = DescriptionMode::kNumeric;
  FamilyConfig families;
  int capacity = kDefaultCapacity;

  // 100000 / 10000 / 500 for train / dev / test.
  static std::int64_t DefaultSize(std::string_view split);
};

nlohmann::json SplitConfigToJson(const SplitConfig& cfg);

// Record `index` of the split; depends only on (cfg, index).
DatasetRecord GenerateRecord(const SplitConfig& cfg, std::int64_t index);

// All records, generated on `workers` threads. Output is independent of
// the worker count.
std::vector<DatasetRecord> GenerateRecords(const SplitConfig& cfg,
                                           int workers = 1);

// Writes `path` (JSONL) and `path`.meta.json through temporary files and
// atomic renames. Throws DataError on I/O failure.
void GenerateSplit(const SplitConfig& cfg, const std::filesystem::path& path,
                   int workers = 1);

// Reads and revalidates a JSONL dataset. Throws DataError with the line
// number on the first bad record.
std::vector<DatasetRecord> ReadRecords(const std::filesystem::path& path,
                                       int capacity = kDefaultCapacity);

// Descriptive statistics of one property column.
struct ColumnStats {
  double mean = 0;
  double stddev = 0;  // sample standard deviation
  double min = 0;
  double q25 = 0;
  double median = 0;
  double q75 = 0;
  double max = 0;
};

// Stats per property over the full properties of `records`, with linear
// interpolation between order statistics for the quantiles.
std::array<ColumnStats, kNumProperties> DescribeRecords(
    const std::vector<DatasetRecord>& records);

}  // namespace lcgraph

#endif  // LCGRAPH_DATASET_H_
