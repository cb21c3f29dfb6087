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

#include "lcgraph/dataset.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "lcgraph/errors.h"

namespace lcgraph {

namespace {

constexpr std::array<std::string_view, kNumFamilies> kFamilyNames = {
    "ScaleFree", "ErdosRenyi", "RandomGeometric", "UniformTree"};

Family ChooseFamily(const FamilyConfig& cfg, Rng& rng) {
  std::discrete_distribution<int> dist(cfg.weights.begin(), cfg.weights.end());
  return static_cast<Family>(dist(rng));
}

}  // namespace

std::string_view FamilyName(Family family) {
  return kFamilyNames[static_cast<int>(family)];
}

Family FamilyFromName(std::string_view name) {
  for (int i = 0; i < kNumFamilies; ++i) {
    if (kFamilyNames[i] == name) return static_cast<Family>(i);
  }
  throw DataError("unknown graph family '" + std::string(name) + "'");
}

// ====== FamilyConfig ======

FamilyConfig FamilyConfig::Restricted(int min_nodes, int max_nodes) {
  FamilyConfig cfg;
  NodeSegment seg = cfg.segments.front();
  seg.min_nodes = min_nodes;
  seg.max_nodes = max_nodes;
  cfg.segments = {seg};
  return cfg;
}

int FamilyConfig::MaxNodes() const {
  int m = 0;
  for (const auto& s : segments) m = std::max(m, s.max_nodes);
  return m;
}

void FamilyConfig::Validate() const {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("family weights must sum to 1");
  }
  for (double w : weights) {
    if (w < 0) throw std::invalid_argument("negative family weight");
  }
  if (segments.empty()) throw std::invalid_argument("no node segments");
  for (const auto& s : segments) {
    if (s.min_nodes < 1 || s.max_nodes < s.min_nodes) {
      throw std::invalid_argument("invalid node segment");
    }
  }
}

// ====== Generators ======

Graph ErdosRenyi(int n, double p, int capacity, Rng& rng) {
  Graph g = Graph::WithActiveNodes(n, capacity);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (Uniform01(rng) < p) g.AddEdge(i, j);
    }
  }
  return g;
}

Graph RandomGeometric(int n, double radius, int capacity, Rng& rng) {
  std::vector<double> xs(n), ys(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = Uniform01(rng);
    ys[i] = Uniform01(rng);
  }
  Graph g = Graph::WithActiveNodes(n, capacity);
  const double r2 = radius * radius;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double dx = xs[i] - xs[j];
      const double dy = ys[i] - ys[j];
      if (dx * dx + dy * dy < r2) g.AddEdge(i, j);
    }
  }
  return g;
}

Graph UniformTree(int n, int capacity, Rng& rng) {
  Graph g = Graph::WithActiveNodes(n, capacity);
  if (n < 2) return g;
  if (n == 2) {
    g.AddEdge(0, 1);
    return g;
  }
  // Decode a uniformly random Pruefer sequence.
  std::vector<int> seq(n - 2);
  for (int& s : seq) s = UniformInt(rng, 0, n - 1);
  std::vector<int> degree(n, 1);
  for (int s : seq) ++degree[s];
  for (int s : seq) {
    int leaf = 0;
    while (degree[leaf] != 1) ++leaf;
    g.AddEdge(leaf, s);
    --degree[leaf];
    --degree[s];
  }
  int u = -1;
  for (int i = 0; i < n; ++i) {
    if (degree[i] == 1) {
      if (u < 0) {
        u = i;
      } else {
        g.AddEdge(u, i);
        break;
      }
    }
  }
  return g;
}

Graph ScaleFree(int n, int capacity, Rng& rng, const ScaleFreeParams& params) {
  if (n < 3) throw std::invalid_argument("scale-free graphs need n >= 3");
  // Endpoint lists: sampling an entry is sampling a node proportionally to
  // its out-/in-degree.
  std::vector<int> sources = {0, 1, 2};
  std::vector<int> targets = {1, 2, 0};
  std::vector<std::pair<int, int>> edges = {{0, 1}, {1, 2}, {2, 0}};
  int num_nodes = 3;

  auto choose = [&](const std::vector<int>& endpoints, double delta) {
    if (delta > 0) {
      const double bias = num_nodes * delta;
      if (Uniform01(rng) < bias / (bias + endpoints.size())) {
        return UniformInt(rng, 0, num_nodes - 1);
      }
    }
    return endpoints[UniformInt(rng, 0, static_cast<int>(endpoints.size()) - 1)];
  };

  while (num_nodes < n) {
    const double r = Uniform01(rng);
    int v = 0;
    int w = 0;
    if (r < params.alpha) {
      w = choose(targets, params.delta_in);
      v = num_nodes++;
    } else if (r < params.alpha + params.beta) {
      v = choose(sources, params.delta_out);
      w = choose(targets, params.delta_in);
    } else {
      v = choose(sources, params.delta_out);
      w = num_nodes++;
    }
    sources.push_back(v);
    targets.push_back(w);
    edges.emplace_back(v, w);
  }

  Graph g = Graph::WithActiveNodes(n, capacity);
  for (auto [v, w] : edges) {
    if (v != w) g.AddEdge(v, w);
  }
  return g;
}

Graph GenerateFamily(Family family, int n, const NodeSegment& segment,
                     int capacity, Rng& rng) {
  switch (family) {
    case Family::kScaleFree:
      if (n < 3) return UniformTree(n, capacity, rng);
      return ScaleFree(n, capacity, rng);
    case Family::kErdosRenyi:
      return ErdosRenyi(n, segment.er_p, capacity, rng);
    case Family::kRandomGeometric:
      return RandomGeometric(n, segment.rgg_radius, capacity, rng);
    case Family::kUniformTree:
      return UniformTree(n, capacity, rng);
  }
  throw std::invalid_argument("unknown family");
}

SampledGraph SampleGraph(const FamilyConfig& cfg, int capacity, Rng& rng) {
  const Family family = ChooseFamily(cfg, rng);
  const NodeSegment& seg =
      cfg.segments[UniformInt(rng, 0, static_cast<int>(cfg.segments.size()) - 1)];
  const int n = UniformInt(rng, seg.min_nodes, seg.max_nodes);
  if (n > capacity) {
    throw std::invalid_argument("segment exceeds graph capacity");
  }
  return {GenerateFamily(family, n, seg, capacity, rng), family};
}

SampledGraph SampleGraphWithNodes(const FamilyConfig& cfg, int n,
                                  int capacity, Rng& rng) {
  if (n < 0 || n > capacity) {
    throw std::invalid_argument("node count outside [0, capacity]");
  }
  const Family family = ChooseFamily(cfg, rng);
  const NodeSegment* best = &cfg.segments.front();
  int best_gap = capacity + 1000;
  for (const auto& s : cfg.segments) {
    const int gap = n < s.min_nodes   ? s.min_nodes - n
                    : n > s.max_nodes ? n - s.max_nodes
                                      : 0;
    if (gap < best_gap) {
      best_gap = gap;
      best = &s;
    }
  }
  return {GenerateFamily(family, n, *best, capacity, rng), family};
}

// ====== Property selection ======

std::string_view SelectionModeName(SelectionMode mode) {
  switch (mode) {
    case SelectionMode::kSimple:
      return "simple";
    case SelectionMode::kComplex:
      return "complex";
    case SelectionMode::kAnyProp:
      return "anyprop";
  }
  return "simple";
}

SelectionMode SelectionModeFromName(std::string_view name) {
  for (auto mode : {SelectionMode::kSimple, SelectionMode::kComplex,
                    SelectionMode::kAnyProp}) {
    if (SelectionModeName(mode) == name) return mode;
  }
  throw std::invalid_argument("unknown mode '" + std::string(name) + "'");
}

PropertySpec SelectKProperties(const PropertySpec& full, int k, Rng& rng) {
  if (k < 1 || k > kNumProperties) {
    throw std::invalid_argument("k must be in [1, 7]");
  }
  std::array<PropertyKind, kNumProperties> order = kAllProperties;
  std::shuffle(order.begin(), order.end(), rng);
  PropertySpec out;
  for (int i = 0; i < k; ++i) out.set(order[i], full.at(order[i]));
  return out;
}

PropertySpec SelectProperties(const PropertySpec& full, SelectionMode mode,
                              Rng& rng) {
  switch (mode) {
    case SelectionMode::kSimple:
    case SelectionMode::kComplex: {
      PropertySpec out;
      out.set(PropertyKind::kNode, full.at(PropertyKind::kNode));
      out.set(PropertyKind::kEdge, full.at(PropertyKind::kEdge));
      if (mode == SelectionMode::kComplex) {
        for (PropertyKind kind :
             {PropertyKind::kMinDeg, PropertyKind::kMaxDeg, PropertyKind::kDiam,
              PropertyKind::kCCNum, PropertyKind::kCycle}) {
          if (Uniform01(rng) < kComplexInclusion) out.set(kind, full.at(kind));
        }
      }
      return out;
    }
    case SelectionMode::kAnyProp:
      return SelectKProperties(full, UniformInt(rng, 2, kNumProperties), rng);
  }
  throw std::invalid_argument("unknown selection mode");
}

// ====== Records ======

nlohmann::json RecordToJson(const DatasetRecord& record) {
  nlohmann::json graph = GraphToJson(record.graph);
  nlohmann::json j;
  j["id"] = record.id;
  j["family"] = FamilyName(record.family);
  j["text"] = record.text.text;
  j["spec"] = SpecToJson(record.spec);
  j["props"] = SpecToJson(record.full_props);
  j["n"] = graph["n"];
  j["edges"] = std::move(graph["edges"]);
  return j;
}

DatasetRecord RecordFromJson(const nlohmann::json& j, int capacity) {
  if (!j.is_object()) throw DataError("record must be a JSON object");
  for (const char* key : {"id", "family", "text", "spec", "n", "edges"}) {
    if (!j.contains(key)) {
      throw DataError(std::string("record is missing '") + key + "'");
    }
  }
  if (!j["id"].is_number_unsigned() && !j["id"].is_number_integer()) {
    throw DataError("'id' must be an integer");
  }
  if (!j["text"].is_string() || !j["family"].is_string()) {
    throw DataError("'text' and 'family' must be strings");
  }
  DatasetRecord r;
  r.id = j["id"].get<std::uint64_t>();
  r.family = FamilyFromName(j["family"].get<std::string>());
  r.text.text = j["text"].get<std::string>();
  // Rendered clauses always contain words; bare numbers mean shuffled text.
  const std::string& t = r.text.text;
  if (!t.empty() && std::all_of(t.begin(), t.end(), [](unsigned char c) {
        return std::isdigit(c) || std::isspace(c);
      })) {
    r.text.mode = DescriptionMode::kShuffledNumbers;
  }
  r.spec = SpecFromJson(j["spec"]);
  r.text.spec = r.spec;
  r.graph = GraphFromJson(j, capacity);
  r.full_props = ComputeProperties(r.graph);
  if (j.contains("props") && SpecFromJson(j["props"]) != r.full_props) {
    throw DataError("record " + std::to_string(r.id) +
                    ": stored properties disagree with the graph");
  }
  if (!r.spec.IsSubsetOf(r.full_props)) {
    throw DataError("record " + std::to_string(r.id) +
                    ": spec disagrees with the graph");
  }
  if (r.spec.empty()) {
    throw DataError("record " + std::to_string(r.id) + ": empty spec");
  }
  return r;
}

std::int64_t SplitConfig::DefaultSize(std::string_view split) {
  if (split == "train") return 100000;
  if (split == "dev") return 10000;
  if (split == "test") return 500;
  throw std::invalid_argument("unknown split '" + std::string(split) + "'");
}

nlohmann::json SplitConfigToJson(const SplitConfig& cfg) {
  nlohmann::json segments = nlohmann::json::array();
  for (const auto& s : cfg.families.segments) {
    segments.push_back({{"min_nodes", s.min_nodes},
                        {"max_nodes", s.max_nodes},
                        {"er_p", s.er_p},
                        {"rgg_radius", s.rgg_radius}});
  }
  return {
      {"generator_version", kGeneratorVersion},
      {"split", cfg.split},
      {"size", cfg.size},
      {"seed", cfg.seed},
      {"mode", SelectionModeName(cfg.mode)},
      {"text_mode", DescriptionModeName(cfg.text_mode)},
      {"capacity", cfg.capacity},
      {"family_weights", cfg.families.weights},
      {"segments", std::move(segments)},
  };
}

DatasetRecord GenerateRecord(const SplitConfig& cfg, std::int64_t index) {
  Rng rng(MixSeed(cfg.seed, static_cast<std::uint64_t>(index)));
  SampledGraph sampled = SampleGraph(cfg.families, cfg.capacity, rng);
  DatasetRecord r;
  r.id = static_cast<std::uint64_t>(index);
  r.family = sampled.family;
  r.full_props = ComputeProperties(sampled.graph);
  r.spec = SelectProperties(r.full_props, cfg.mode, rng);
  RenderConfig render{true, cfg.text_mode, rng()};
  r.text = Render(r.spec, render);
  r.graph = std::move(sampled.graph);
  return r;
}

std::vector<DatasetRecord> GenerateRecords(const SplitConfig& cfg,
                                           int workers) {
  cfg.families.Validate();
  if (cfg.families.MaxNodes() > cfg.capacity) {
    throw std::invalid_argument("node segments exceed capacity");
  }
  std::vector<DatasetRecord> records(static_cast<std::size_t>(cfg.size));
  workers = std::max(1, workers);
  auto run = [&](int w) {
    for (std::int64_t i = w; i < cfg.size; i += workers) {
      records[static_cast<std::size_t>(i)] = GenerateRecord(cfg, i);
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) threads.emplace_back(run, w);
    for (auto& t : threads) t.join();
  }
  return records;
}

void GenerateSplit(const SplitConfig& cfg, const std::filesystem::path& path,
                   int workers) {
  const std::vector<DatasetRecord> records = GenerateRecords(cfg, workers);
  std::string body;
  for (const auto& r : records) {
    body += RecordToJson(r).dump();
    body += '\n';
  }
  WriteFileAtomic(path, body);
  std::filesystem::path meta = path;
  meta += ".meta.json";
  WriteFileAtomic(meta, SplitConfigToJson(cfg).dump(2) + "\n");
}

std::vector<DatasetRecord> ReadRecords(const std::filesystem::path& path,
                                       int capacity) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::vector<DatasetRecord> records;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      records.push_back(RecordFromJson(nlohmann::json::parse(line), capacity));
    } catch (const nlohmann::json::exception& e) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": " +
                      e.what());
    } catch (const DataError& e) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": " +
                      e.what());
    }
  }
  return records;
}

std::array<ColumnStats, kNumProperties> DescribeRecords(
    const std::vector<DatasetRecord>& records) {
  std::array<ColumnStats, kNumProperties> out{};
  if (records.empty()) return out;
  const double n = static_cast<double>(records.size());
  for (PropertyKind kind : kAllProperties) {
    std::vector<double> col;
    col.reserve(records.size());
    for (const auto& r : records) col.push_back(r.full_props.at(kind));
    std::sort(col.begin(), col.end());
    ColumnStats& s = out[PropertyIndex(kind)];
    s.mean = std::accumulate(col.begin(), col.end(), 0.0) / n;
    double ss = 0;
    for (double v : col) ss += (v - s.mean) * (v - s.mean);
    s.stddev = col.size() > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
    auto quantile = [&](double q) {
      const double pos = q * (n - 1);
      const auto lo = static_cast<std::size_t>(std::floor(pos));
      const std::size_t hi = std::min(lo + 1, col.size() - 1);
      return col[lo] + (pos - lo) * (col[hi] - col[lo]);
    };
    s.min = col.front();
    s.q25 = quantile(0.25);
    s.median = quantile(0.5);
    s.q75 = quantile(0.75);
    s.max = col.back();
  }
  return out;
}

}  // namespace lcgraph
