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

#ifndef LCGRAPH_CLI_H_
#define LCGRAPH_CLI_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "lcgraph/dataset.h"
#include "lcgraph/graph.h"
#include "lcgraph/metrics.h"

namespace lcgraph::cli {

inline constexpr std::string_view kToolVersion = "0.1.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitNumeric = 3,
};

// Bad flags or flag combinations; maps to kExitUsage.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Runs the `lcgraph` command line. Never throws.
int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// ---- Run directories ----

// Creates `dir`. Unless `resume`, it must be absent or empty.
void PrepareRunDir(const std::filesystem::path& dir, bool resume);

// 64-bit FNV-1a of the compact JSON dump, as 16 hex digits.
std::string ConfigHash(const nlohmann::json& config);

// {tool, versions, command, config, config_hash, seeds}. No timestamps, so
// reruns produce identical bytes.
nlohmann::json MakeManifest(std::string_view command, const nlohmann::json& config,
                            const nlohmann::json& seeds);

// ---- Predictions ----

// One JSON object per line: {"id", "n", "edges"}.
std::string PredictionLine(std::uint64_t id, const Graph& graph);

// Throws DataError on malformed lines or duplicate ids.
std::map<std::uint64_t, Graph> ReadPredictions(const std::filesystem::path& path,
                                               int capacity = kDefaultCapacity);

struct Evaluation {
  EvalReport report;
  long missing = 0;    // reference ids without a prediction, scored as empty graphs
  long unmatched = 0;  // prediction ids absent from the reference
};

Evaluation EvaluatePredictions(const std::vector<DatasetRecord>& reference,
                               const std::map<std::uint64_t, Graph>& predictions);

nlohmann::json EvaluationToJson(const Evaluation& e);

// ---- External matrices ----

struct ImportSummary {
  long lines = 0;
  long imported = 0;
  long errors = 0;
  std::vector<std::uint64_t> missing_ids;   // in the reference, not in the input
  std::vector<std::uint64_t> unknown_ids;   // in the input, not in the reference
  std::vector<std::uint64_t> duplicate_ids; // later duplicates are errors
};

nlohmann::json ImportSummaryToJson(const ImportSummary& s);

// Reads lines {"id": int, "matrix": [[int, ...], ...]} from `raw`, post-
// processes each matrix and writes predictions.jsonl, errors.jsonl and
// reconciliation.json into `out_dir`. A bad line becomes an entry in
// errors.jsonl and the import continues.
ImportSummary ImportExternal(const std::filesystem::path& raw,
                             const std::optional<std::filesystem::path>& reference,
                             const std::filesystem::path& out_dir, int capacity);

}  // namespace lcgraph::cli

#endif  // LCGRAPH_CLI_H_
