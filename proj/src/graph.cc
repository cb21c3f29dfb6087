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

#include "lcgraph/graph.h"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "lcgraph/errors.h"

namespace lcgraph {

namespace {

constexpr std::array<std::string_view, kNumProperties> kPropertyNames = {
    "Node", "Edge", "MinDeg", "MaxDeg", "Diam", "CCNum", "Cycle"};

}  // namespace

std::string_view PropertyName(PropertyKind kind) {
  return kPropertyNames[PropertyIndex(kind)];
}

std::optional<PropertyKind> PropertyFromName(std::string_view name) {
  for (PropertyKind kind : kAllProperties) {
    if (PropertyName(kind) == name) return kind;
  }
  return std::nullopt;
}

// ====== PropertySpec ======

int PropertySpec::at(PropertyKind kind) const {
  const auto& v = values_[PropertyIndex(kind)];
  if (!v) {
    throw std::out_of_range("property " + std::string(PropertyName(kind)) +
                            " not present");
  }
  return *v;
}

void PropertySpec::set(PropertyKind kind, int value) {
  if (value < 0) {
    throw std::invalid_argument("negative value for " +
                                std::string(PropertyName(kind)));
  }
  if (kind == PropertyKind::kCycle && value > 1) {
    throw std::invalid_argument("Cycle must be 0 or 1");
  }
  values_[PropertyIndex(kind)] = value;
}

int PropertySpec::size() const {
  return static_cast<int>(
      std::count_if(values_.begin(), values_.end(),
                    [](const auto& v) { return v.has_value(); }));
}

std::vector<PropertyKind> PropertySpec::kinds() const {
  std::vector<PropertyKind> out;
  for (PropertyKind kind : kAllProperties) {
    if (has(kind)) out.push_back(kind);
  }
  return out;
}

bool PropertySpec::IsSubsetOf(const PropertySpec& other) const {
  for (PropertyKind kind : kAllProperties) {
    if (has(kind) && get(kind) != other.get(kind)) return false;
  }
  return true;
}

nlohmann::json SpecToJson(const PropertySpec& spec) {
  nlohmann::json j = nlohmann::json::object();
  for (PropertyKind kind : spec.kinds()) {
    j[std::string(PropertyName(kind))] = spec.at(kind);
  }
  return j;
}

PropertySpec SpecFromJson(const nlohmann::json& j) {
  if (!j.is_object()) throw DataError("spec must be a JSON object");
  PropertySpec spec;
  for (const auto& [key, value] : j.items()) {
    auto kind = PropertyFromName(key);
    if (!kind) throw DataError("unknown property '" + key + "'");
    if (value.is_boolean()) {
      value.get<bool>() ? spec.set(*kind, 1) : spec.set(*kind, 0);
      continue;
    }
    if (!value.is_number_integer()) {
      throw DataError("property '" + key + "' must be an integer");
    }
    try {
      spec.set(*kind, value.get<int>());
    } catch (const std::invalid_argument& e) {
      throw DataError(e.what());
    }
  }
  return spec;
}

std::string SpecToString(const PropertySpec& spec) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (PropertyKind kind : spec.kinds()) {
    if (!first) os << ", ";
    first = false;
    os << PropertyName(kind) << ':' << spec.at(kind);
  }
  os << '}';
  return os.str();
}

// ====== Graph ======

Graph::Graph(int capacity) : capacity_(capacity) {
  if (capacity <= 0) throw std::invalid_argument("capacity must be positive");
  mask_.assign(static_cast<std::size_t>(capacity), 0);
  adjacency_.assign(static_cast<std::size_t>(capacity) * capacity, 0);
}

Graph Graph::WithActiveNodes(int num_nodes, int capacity) {
  if (num_nodes < 0 || num_nodes > capacity) {
    throw std::invalid_argument("node count outside [0, capacity]");
  }
  Graph g(capacity);
  std::fill_n(g.mask_.begin(), num_nodes, 1);
  return g;
}

Graph Graph::FromEdges(int num_nodes,
                       std::span<const std::pair<int, int>> edges,
                       int capacity) {
  Graph g = WithActiveNodes(num_nodes, capacity);
  for (auto [i, j] : edges) {
    if (i < 0 || j < 0 || i >= num_nodes || j >= num_nodes) {
      throw std::invalid_argument("edge endpoint out of range");
    }
    g.AddEdge(i, j);
  }
  return g;
}

std::size_t Graph::Index(int i) const {
  if (i < 0 || i >= capacity_) {
    throw std::out_of_range("node index " + std::to_string(i) +
                            " outside capacity " + std::to_string(capacity_));
  }
  return static_cast<std::size_t>(i);
}

void Graph::Activate(int i) { mask_[Index(i)] = 1; }

void Graph::Deactivate(int i) {
  const std::size_t r = Index(i);
  mask_[r] = 0;
  for (int j = 0; j < capacity_; ++j) {
    adjacency_[r * capacity_ + j] = 0;
    adjacency_[static_cast<std::size_t>(j) * capacity_ + r] = 0;
  }
}

void Graph::AddEdge(int i, int j) {
  if (i == j) throw std::invalid_argument("self-loops are not allowed");
  if (!active(i) || !active(j)) {
    throw std::invalid_argument("edge endpoints must be active");
  }
  adjacency_[Index(i) * capacity_ + Index(j)] = 1;
  adjacency_[Index(j) * capacity_ + Index(i)] = 1;
}

void Graph::RemoveEdge(int i, int j) {
  adjacency_[Index(i) * capacity_ + Index(j)] = 0;
  adjacency_[Index(j) * capacity_ + Index(i)] = 0;
}

void Graph::ToggleEdge(int i, int j) {
  if (HasEdge(i, j)) {
    RemoveEdge(i, j);
  } else {
    AddEdge(i, j);
  }
}

int Graph::NumActive() const {
  return static_cast<int>(std::count(mask_.begin(), mask_.end(), 1));
}

int Graph::NumEdges() const {
  int count = 0;
  for (int i = 0; i < capacity_; ++i) {
    for (int j = i + 1; j < capacity_; ++j) count += HasEdge(i, j) ? 1 : 0;
  }
  return count;
}

int Graph::Degree(int i) const {
  const std::size_t r = Index(i) * capacity_;
  return static_cast<int>(std::count(adjacency_.begin() + r,
                                     adjacency_.begin() + r + capacity_, 1));
}

std::vector<int> Graph::ActiveNodes() const {
  std::vector<int> out;
  for (int i = 0; i < capacity_; ++i) {
    if (mask_[i]) out.push_back(i);
  }
  return out;
}

std::vector<std::pair<int, int>> Graph::Edges() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < capacity_; ++i) {
    for (int j = i + 1; j < capacity_; ++j) {
      if (HasEdge(i, j)) out.emplace_back(i, j);
    }
  }
  return out;
}

bool Graph::SatisfiesInvariants() const {
  for (int i = 0; i < capacity_; ++i) {
    if (mask_[i] > 1) return false;
    for (int j = 0; j < capacity_; ++j) {
      const std::uint8_t a = adjacency_[static_cast<std::size_t>(i) * capacity_ + j];
      if (a > 1) return false;
      if (a != adjacency_[static_cast<std::size_t>(j) * capacity_ + i]) return false;
      if (i == j && a != 0) return false;
      if (a != 0 && (!mask_[i] || !mask_[j])) return false;
    }
  }
  return true;
}

Graph GraphFromBuffers(int capacity, std::span<const double> mask,
                       std::span<const double> adjacency) {
  const auto n = static_cast<std::size_t>(capacity);
  if (mask.size() != n || adjacency.size() != n * n) {
    throw std::invalid_argument("buffer sizes do not match capacity");
  }
  Graph g(capacity);
  for (int i = 0; i < capacity; ++i) {
    if (mask[i] > 0.5) g.Activate(i);
  }
  for (int i = 0; i < capacity; ++i) {
    for (int j = i + 1; j < capacity; ++j) {
      const bool on = adjacency[i * n + j] > 0.5 || adjacency[j * n + i] > 0.5;
      if (on && g.active(i) && g.active(j)) g.AddEdge(i, j);
    }
  }
  return g;
}

// ====== Properties ======

PropertySpec ComputeProperties(const Graph& g) {
  const int cap = g.capacity();
  std::vector<std::vector<int>> neighbors(cap);
  int num_nodes = 0;
  int num_edges = 0;
  for (int i = 0; i < cap; ++i) {
    if (!g.active(i)) continue;
    ++num_nodes;
    for (int j = 0; j < cap; ++j) {
      if (g.HasEdge(i, j)) neighbors[i].push_back(j);
    }
    num_edges += static_cast<int>(neighbors[i].size());
  }
  num_edges /= 2;

  PropertySpec spec;
  if (num_nodes == 0) {
    for (PropertyKind kind : kAllProperties) spec.set(kind, 0);
    return spec;
  }

  int min_deg = cap;
  int max_deg = 0;
  for (int i = 0; i < cap; ++i) {
    if (!g.active(i)) continue;
    const int d = static_cast<int>(neighbors[i].size());
    min_deg = std::min(min_deg, d);
    max_deg = std::max(max_deg, d);
  }

  // One BFS per active node yields both its component and its eccentricity.
  std::vector<int> component(cap, -1);
  std::vector<int> dist(cap);
  std::vector<int> queue;
  queue.reserve(cap);
  int num_components = 0;
  int diameter = 0;
  for (int s = 0; s < cap; ++s) {
    if (!g.active(s)) continue;
    std::fill(dist.begin(), dist.end(), -1);
    queue.clear();
    queue.push_back(s);
    dist[s] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int u = queue[head];
      for (int v : neighbors[u]) {
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          queue.push_back(v);
        }
      }
    }
    if (component[s] < 0) {
      for (int v : queue) component[v] = num_components;
      ++num_components;
    }
    diameter = std::max(diameter, dist[queue.back()]);
  }

  spec.set(PropertyKind::kNode, num_nodes);
  spec.set(PropertyKind::kEdge, num_edges);
  spec.set(PropertyKind::kMinDeg, min_deg);
  spec.set(PropertyKind::kMaxDeg, max_deg);
  spec.set(PropertyKind::kDiam, diameter);
  spec.set(PropertyKind::kCCNum, num_components);
  // A forest has exactly V - C edges; anything more closes a cycle.
  spec.set(PropertyKind::kCycle,
           num_edges >= num_nodes - num_components + 1 ? 1 : 0);
  return spec;
}

// ====== Post-processing ======

IntMatrix SymmetrizeMatrix(const IntMatrix& raw) {
  std::size_t k = raw.size();
  for (const auto& row : raw) k = std::max(k, row.size());
  auto entry = [&](std::size_t i, std::size_t j) -> std::int64_t {
    if (i >= raw.size() || j >= raw[i].size()) return 0;
    return raw[i][j];
  };
  IntMatrix out(k, std::vector<std::int64_t>(k, 0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      std::int64_t sum = 0;
      if (__builtin_add_overflow(entry(i, j), entry(j, i), &sum)) {
        sum = entry(i, j) > 0 ? std::numeric_limits<std::int64_t>::max()
                              : std::numeric_limits<std::int64_t>::min();
      }
      out[i][j] = sum;
    }
  }
  return out;
}

Graph PostprocessMatrix(const IntMatrix& raw, int capacity) {
  const IntMatrix sym = SymmetrizeMatrix(raw);
  const std::size_t k = sym.size();
  if (k > static_cast<std::size_t>(capacity)) {
    throw TruncationError("matrix of size " + std::to_string(k) +
                          " exceeds capacity " + std::to_string(capacity));
  }
  Graph g = Graph::WithActiveNodes(static_cast<int>(k), capacity);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      if (std::clamp<std::int64_t>(sym[i][j], 0, 1) == 1) {
        g.AddEdge(static_cast<int>(i), static_cast<int>(j));
      }
    }
  }
  return g;
}

// ====== Relabeling ======

Graph Permute(const Graph& g, std::span<const int> perm) {
  const int cap = g.capacity();
  if (static_cast<int>(perm.size()) != cap) {
    throw std::invalid_argument("permutation length must equal capacity");
  }
  std::vector<char> seen(cap, 0);
  for (int p : perm) {
    if (p < 0 || p >= cap || seen[p]) {
      throw std::invalid_argument("not a permutation of [0, capacity)");
    }
    seen[p] = 1;
  }
  Graph out(cap);
  for (int i = 0; i < cap; ++i) {
    if (g.active(i)) out.Activate(perm[i]);
  }
  for (auto [i, j] : g.Edges()) out.AddEdge(perm[i], perm[j]);
  return out;
}

// ====== Serialization ======

nlohmann::json GraphToJson(const Graph& g) {
  std::vector<int> slot_to_index(g.capacity(), -1);
  int n = 0;
  for (int i = 0; i < g.capacity(); ++i) {
    if (g.active(i)) slot_to_index[i] = n++;
  }
  nlohmann::json edges = nlohmann::json::array();
  for (auto [i, j] : g.Edges()) {
    edges.push_back({slot_to_index[i], slot_to_index[j]});
  }
  return {{"n", n}, {"edges", std::move(edges)}};
}

Graph GraphFromJson(const nlohmann::json& j, int capacity) {
  if (!j.is_object() || !j.contains("n") || !j.contains("edges")) {
    throw DataError("graph JSON needs 'n' and 'edges'");
  }
  if (!j["n"].is_number_integer()) throw DataError("'n' must be an integer");
  const int n = j["n"].get<int>();
  if (n < 0) throw DataError("'n' must be non-negative");
  if (n > capacity) {
    throw TruncationError("graph with " + std::to_string(n) +
                          " nodes exceeds capacity " +
                          std::to_string(capacity));
  }
  if (!j["edges"].is_array()) throw DataError("'edges' must be an array");
  Graph g = Graph::WithActiveNodes(n, capacity);
  for (const auto& e : j["edges"]) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
        !e[1].is_number_integer()) {
      throw DataError("edge must be a pair of integers");
    }
    const int a = e[0].get<int>();
    const int b = e[1].get<int>();
    if (a < 0 || b < 0 || a >= n || b >= n || a == b) {
      throw DataError("invalid edge [" + std::to_string(a) + "," +
                      std::to_string(b) + "]");
    }
    g.AddEdge(a, b);
  }
  return g;
}

}  // namespace lcgraph
