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

#ifndef LCGRAPH_METRICS_H_
#define LCGRAPH_METRICS_H_

#include <array>
#include <optional>
#include <span>
#include <string>

#include "json.hpp"
#include "lcgraph/graph.h"

namespace lcgraph {

// One evaluated data point. `spec` holds the requested properties with
// their true values; `true_graph` is only consulted for the bucket when
// the spec has no Node entry.
struct EvalPair {
  PropertySpec spec;
  Graph predicted;
  std::optional<Graph> true_graph;
};

struct RecordScore {
  double match = 0;      // fraction of requested properties matched exactly
  double closeness = 0;  // mean of exp(-(predicted - true)^2)
};

// Throws std::invalid_argument on an empty spec.
RecordScore ScoreRecord(const EvalPair& pair);
// Same, with the predicted properties already computed.
RecordScore ScoreProperties(const PropertySpec& spec,
                            const PropertySpec& predicted);

// Node-count buckets [1,5], [6,10], [11,25], [26,50].
inline constexpr int kNumBuckets = 4;
struct BucketRange {
  int lo;
  int hi;
};
inline constexpr std::array<BucketRange, kNumBuckets> kBuckets = {
    {{1, 5}, {6, 10}, {11, 25}, {26, 50}}};
std::string BucketLabel(int bucket);
// Bucket index for a true node count, or nullopt if outside every bucket.
std::optional<int> BucketFor(int num_nodes);

struct MetricSummary {
  double prop_match = 0;
  double closeness = 0;
  long count = 0;
};

struct EvalReport {
  double prop_match = 0;
  double closeness = 0;
  long count = 0;
  // Over records whose spec contains the property; absent if none do.
  std::array<std::optional<MetricSummary>, kNumProperties> per_property{};
  // Absent for empty buckets.
  std::array<std::optional<MetricSummary>, kNumBuckets> buckets{};
};

// Sums of per-record fractions. Merging is associative and commutative, so
// partial accumulators from parallel workers combine deterministically up
// to floating-point summation order.
class EvalAccumulator {
 public:
  void Add(const EvalPair& pair);
  void Add(const PropertySpec& spec, const PropertySpec& predicted,
           std::optional<int> true_nodes);
  void Merge(const EvalAccumulator& other);
  // Throws std::invalid_argument if nothing was added.
  EvalReport Report() const;

 private:
  struct Sums {
    double match = 0;
    double closeness = 0;
    long count = 0;
    void Add(double m, double c) {
      match += m;
      closeness += c;
      ++count;
    }
    void Merge(const Sums& o) {
      match += o.match;
      closeness += o.closeness;
      count += o.count;
    }
  };
  Sums overall_;
  std::array<Sums, kNumProperties> per_property_{};
  std::array<Sums, kNumBuckets> buckets_{};
};

// Unweighted mean over the pairs. Throws std::invalid_argument if empty.
EvalReport Aggregate(std::span<const EvalPair> pairs);

nlohmann::json ReportToJson(const EvalReport& report);
// Rows PropMatch / Closeness (plus per-property PropMatch rows when
// `per_property`) against column Overall and, with `buckets`, one column per
// node bucket.
std::string FormatReportTable(const EvalReport& report,
                              const std::string& title,
                              bool per_property = true, bool buckets = true);

}  // namespace lcgraph

#endif  // LCGRAPH_METRICS_H_
