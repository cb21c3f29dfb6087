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

#ifndef LCGRAPH_GRAPH_H_
#define LCGRAPH_GRAPH_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

namespace lcgraph {

inline constexpr int kDefaultCapacity = 50;

// The seven graph properties a description can talk about. The enumerator
// order is the canonical clause order.
enum class PropertyKind : std::uint8_t {
  kNode = 0,
  kEdge,
  kMinDeg,
  kMaxDeg,
  kDiam,
  kCCNum,
  kCycle,
};

inline constexpr int kNumProperties = 7;

inline constexpr std::array<PropertyKind, kNumProperties> kAllProperties = {
    PropertyKind::kNode,   PropertyKind::kEdge, PropertyKind::kMinDeg,
    PropertyKind::kMaxDeg, PropertyKind::kDiam, PropertyKind::kCCNum,
    PropertyKind::kCycle};

// "Node", "Edge", ... as used in JSON files and reports.
std::string_view PropertyName(PropertyKind kind);
std::optional<PropertyKind> PropertyFromName(std::string_view name);

constexpr int PropertyIndex(PropertyKind kind) {
  return static_cast<int>(kind);
}

// Partial map PropertyKind -> non-negative integer. Cycle is stored as 0/1.
class PropertySpec {
 public:
  PropertySpec() = default;

  bool has(PropertyKind kind) const {
    return values_[PropertyIndex(kind)].has_value();
  }
  std::optional<int> get(PropertyKind kind) const {
    return values_[PropertyIndex(kind)];
  }
  // Throws std::out_of_range if absent.
  int at(PropertyKind kind) const;

  // Throws std::invalid_argument for negative values or Cycle outside {0,1}.
  void set(PropertyKind kind, int value);
  void erase(PropertyKind kind) { values_[PropertyIndex(kind)].reset(); }

  int size() const;
  bool empty() const { return size() == 0; }

  // Present kinds in canonical order.
  std::vector<PropertyKind> kinds() const;

  // True if every entry of *this is present in `other` with the same value.
  bool IsSubsetOf(const PropertySpec& other) const;

  friend bool operator==(const PropertySpec&, const PropertySpec&) = default;

 private:
  std::array<std::optional<int>, kNumProperties> values_{};
};

nlohmann::json SpecToJson(const PropertySpec& spec);
// Throws DataError on unknown keys or invalid values.
PropertySpec SpecFromJson(const nlohmann::json& j);
std::string SpecToString(const PropertySpec& spec);

// Fixed-capacity undirected simple graph: a symmetric 0/1 adjacency matrix
// with zero diagonal plus an active-node mask. Edges only join active nodes.
class Graph {
 public:
  explicit Graph(int capacity = kDefaultCapacity);

  // Nodes 0..num_nodes-1 active, no edges.
  static Graph WithActiveNodes(int num_nodes, int capacity);
  // Nodes 0..num_nodes-1 active with the given edges. Throws
  // std::invalid_argument on out-of-range endpoints or self-loops.
  static Graph FromEdges(int num_nodes,
                         std::span<const std::pair<int, int>> edges,
                         int capacity);

  int capacity() const { return capacity_; }

  bool active(int i) const { return mask_[Index(i)] != 0; }
  void Activate(int i);
  // Deactivates node i and drops all of its edges.
  void Deactivate(int i);

  bool HasEdge(int i, int j) const {
    return adjacency_[Index(i) * capacity_ + Index(j)] != 0;
  }
  // Both endpoints must be active and distinct.
  void AddEdge(int i, int j);
  void RemoveEdge(int i, int j);
  void ToggleEdge(int i, int j);

  int NumActive() const;
  int NumEdges() const;
  int Degree(int i) const;
  std::vector<int> ActiveNodes() const;

  // Sorted (i < j) edge list in slot labels.
  std::vector<std::pair<int, int>> Edges() const;

  std::span<const std::uint8_t> mask() const { return mask_; }
  std::span<const std::uint8_t> adjacency() const { return adjacency_; }

  // Checks symmetry, zero diagonal and mask consistency.
  bool SatisfiesInvariants() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::size_t Index(int i) const;

  int capacity_;
  std::vector<std::uint8_t> mask_;
  std::vector<std::uint8_t> adjacency_;
};

// Builds a graph from raw 0/1 buffers; used to import generator output.
// Entries are coerced: the result keeps only symmetric pairs present in
// either triangle whose endpoints are both active.
Graph GraphFromBuffers(int capacity, std::span<const double> mask,
                       std::span<const double> adjacency);

// All seven properties. An empty graph yields all zeros; an isolated node
// has eccentricity 0.
PropertySpec ComputeProperties(const Graph& g);

using IntMatrix = std::vector<std::vector<std::int64_t>>;

// Pads `raw` with zeros to k x k, k = max(rows, longest row), and returns
// G' + G'^T. Sums saturate at the int64 range.
IntMatrix SymmetrizeMatrix(const IntMatrix& raw);

// SymmetrizeMatrix followed by clamping every entry to [0, 1] and clearing
// the diagonal. All k slots are active. Throws
// TruncationError if k > capacity.
Graph PostprocessMatrix(const IntMatrix& raw,
                        int capacity = kDefaultCapacity);

// Node i of `g` becomes node perm[i]. Throws std::invalid_argument unless
// `perm` is a bijection on [0, capacity).
Graph Permute(const Graph& g, std::span<const int> perm);

// {"n": k, "edges": [[i, j], ...]} with active slots compacted to 0..k-1
// in slot order and edges sorted lexicographically.
nlohmann::json GraphToJson(const Graph& g);
// Inverse of GraphToJson. Throws DataError on malformed input or if n
// exceeds `capacity`.
Graph GraphFromJson(const nlohmann::json& j, int capacity = kDefaultCapacity);

}  // namespace lcgraph

#endif  // LCGRAPH_GRAPH_H_
