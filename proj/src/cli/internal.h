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

#ifndef LCGRAPH_SRC_CLI_INTERNAL_H_
#define LCGRAPH_SRC_CLI_INTERNAL_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "lcgraph/cli.h"
#include "lcgraph/dataset.h"
#include "lcgraph/gan.h"
#include "lcgraph/search.h"

namespace lcgraph::cli {

// Flags shared by commands that generate records.
struct DataOptions {
  std::uint64_t seed = 0;
  std::string mode = "simple";
  std::string text_mode = "numeric";
  int capacity = kDefaultCapacity;
  std::optional<int> min_nodes;
  std::optional<int> max_nodes;
  int workers = 1;

  // Restricted to [min_nodes, max_nodes] when both are set. Throws
  // UsageError when only one is set or the families exceed the capacity.
  FamilyConfig Families() const;
  // Split `name` with the given size; its seed is MixSeed(seed, split index).
  SplitConfig Split(const std::string& name, std::int64_t size) const;
  nlohmann::json ToJson() const;
};

// Reads `path` as a flat key = value TrainConfig file (missing: defaults).
TrainConfig LoadTrainConfig(const std::optional<std::filesystem::path>& path);

// Parsed spec of a description: dataset text, or a bare list of numbers.
PropertySpec SpecForText(const std::string& text);

// Generated graphs for the records' stored descriptions; record i draws
// from Rng(MixSeed(seed, i)).
std::vector<Graph> GenerateForRecords(TrainedModel& model,
                                      const std::vector<DatasetRecord>& records,
                                      std::uint64_t seed);

// Search baseline graphs for the records' specs; record r runs with seed
// MixSeed(seed, r.id).
std::vector<Graph> SynthesizeForRecords(const std::vector<DatasetRecord>& records,
                                        SearchConfig cfg, std::uint64_t seed);

Evaluation EvaluateGraphs(const std::vector<DatasetRecord>& records,
                          const std::vector<Graph>& graphs);

std::string PredictionsText(const std::vector<DatasetRecord>& records,
                            const std::vector<Graph>& graphs);

struct ExperimentOptions {
  std::string recipe;
  std::filesystem::path out;
  DataOptions data;
  std::optional<std::int64_t> train_size;
  std::optional<std::int64_t> dev_size;
  std::optional<std::int64_t> test_size;
  std::optional<int> epochs;
  std::optional<std::filesystem::path> config;
  std::optional<std::filesystem::path> checkpoint;
  std::string generator = "model";
  int budget = 10000;
  bool buckets = true;
  bool resume = false;
};

int RunExperiment(const ExperimentOptions& opts, std::ostream& out);

}  // namespace lcgraph::cli

#endif  // LCGRAPH_SRC_CLI_INTERNAL_H_
