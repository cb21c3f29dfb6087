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
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "lcgraph/cli.h"
#include "lcgraph/errors.h"
#include "lcgraph/io.h"
#include "lcgraph/nn.h"

namespace lcgraph::cli {

namespace fs = std::filesystem;
using nlohmann::json;

void PrepareRunDir(const fs::path& dir, bool resume) {
  if (fs::exists(dir)) {
    if (!fs::is_directory(dir)) {
      throw UsageError(dir.string() + " exists and is not a directory");
    }
    if (!resume && !fs::is_empty(dir)) {
      throw UsageError("output directory " + dir.string() +
                       " is not empty (pick a fresh one or pass --resume)");
    }
  }
  fs::create_directories(dir);
}

std::string ConfigHash(const json& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json MakeManifest(std::string_view command, const json& config, const json& seeds) {
  return {
      {"tool", "lcgraph"},
      {"tool_version", kToolVersion},
      {"dataset_version", kGeneratorVersion},
      {"checkpoint_version", ad::kCheckpointVersion},
      {"command", command},
      {"config", config},
      {"config_hash", ConfigHash(config)},
      {"seeds", seeds},
  };
}

std::string PredictionLine(std::uint64_t id, const Graph& graph) {
  json j = GraphToJson(graph);
  j["id"] = id;
  return j.dump();
}

std::map<std::uint64_t, Graph> ReadPredictions(const fs::path& path, int capacity) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::map<std::uint64_t, Graph> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no) + ": ";
    const json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) throw DataError(where + "invalid JSON");
    if (!j.is_object() || !j.contains("id") || !j["id"].is_number_integer()) {
      throw DataError(where + "prediction needs an integer 'id'");
    }
    const auto id = j["id"].get<std::uint64_t>();
    Graph g;
    try {
      g = GraphFromJson(j, capacity);
    } catch (const DataError& e) {
      throw DataError(where + e.what());
    }
    if (!out.emplace(id, std::move(g)).second) {
      throw DataError(where + "duplicate id " + std::to_string(id));
    }
  }
  return out;
}

Evaluation EvaluatePredictions(const std::vector<DatasetRecord>& reference,
                               const std::map<std::uint64_t, Graph>& predictions) {
  Evaluation e;
  EvalAccumulator acc;
  std::set<std::uint64_t> ids;
  const Graph empty;
  for (const DatasetRecord& r : reference) {
    ids.insert(r.id);
    auto it = predictions.find(r.id);
    if (it == predictions.end()) ++e.missing;
    const Graph& g = it == predictions.end() ? empty : it->second;
    acc.Add(r.spec, ComputeProperties(g), r.full_props.at(PropertyKind::kNode));
  }
  for (const auto& [id, g] : predictions) {
    if (!ids.count(id)) ++e.unmatched;
  }
  e.report = acc.Report();
  return e;
}

json EvaluationToJson(const Evaluation& e) {
  json j = ReportToJson(e.report);
  j["missing_predictions"] = e.missing;
  j["unmatched_predictions"] = e.unmatched;
  return j;
}

json ImportSummaryToJson(const ImportSummary& s) {
  return {
      {"lines", s.lines},
      {"imported", s.imported},
      {"errors", s.errors},
      {"missing_ids", s.missing_ids},
      {"unknown_ids", s.unknown_ids},
      {"duplicate_ids", s.duplicate_ids},
  };
}

namespace {

IntMatrix MatrixFromJson(const json& m) {
  if (!m.is_array()) throw DataError("'matrix' must be an array of rows");
  IntMatrix out;
  for (const auto& row : m) {
    if (!row.is_array()) throw DataError("matrix rows must be arrays");
    std::vector<std::int64_t> r;
    for (const auto& v : row) {
      if (!v.is_number_integer()) throw DataError("matrix entries must be integers");
      r.push_back(v.get<std::int64_t>());
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

ImportSummary ImportExternal(const fs::path& raw,
                             const std::optional<fs::path>& reference,
                             const fs::path& out_dir, int capacity) {
  std::set<std::uint64_t> ref_ids;
  if (reference) {
    for (const auto& r : ReadRecords(*reference)) ref_ids.insert(r.id);
  }
  std::ifstream in(raw);
  if (!in) throw DataError("cannot open " + raw.string());

  ImportSummary s;
  std::string predictions, errors;
  std::set<std::uint64_t> seen;
  std::string line;
  while (std::getline(in, line)) {
    ++s.lines;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      --s.lines;
      continue;
    }
    json err = {{"line", s.lines}};
    try {
      const json j = json::parse(line, nullptr, false);
      if (j.is_discarded()) throw DataError("invalid JSON");
      if (!j.is_object() || !j.contains("id") || !j["id"].is_number_integer() ||
          j["id"].get<std::int64_t>() < 0) {
        throw DataError("missing or invalid 'id'");
      }
      const auto id = j["id"].get<std::uint64_t>();
      err["id"] = id;
      if (!seen.insert(id).second) {
        s.duplicate_ids.push_back(id);
        throw DataError("duplicate id");
      }
      if (!j.contains("matrix")) throw DataError("missing 'matrix'");
      const Graph g = PostprocessMatrix(MatrixFromJson(j["matrix"]), capacity);
      predictions += PredictionLine(id, g) + "\n";
      ++s.imported;
      if (reference && !ref_ids.count(id)) s.unknown_ids.push_back(id);
    } catch (const DataError& e) {
      ++s.errors;
      err["error"] = e.what();
      errors += err.dump() + "\n";
    }
  }
  for (std::uint64_t id : ref_ids) {
    if (!seen.count(id)) s.missing_ids.push_back(id);
  }
  WriteFileAtomic(out_dir / "predictions.jsonl", predictions);
  WriteFileAtomic(out_dir / "errors.jsonl", errors);
  WriteFileAtomic(out_dir / "reconciliation.json", ImportSummaryToJson(s).dump(2) + "\n");
  return s;
}

}  // namespace lcgraph::cli
