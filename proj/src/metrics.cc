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

#include "lcgraph/metrics.h"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace lcgraph {

RecordScore ScoreProperties(const PropertySpec& spec,
                            const PropertySpec& predicted) {
  if (spec.empty()) throw std::invalid_argument("empty property set");
  RecordScore s;
  for (PropertyKind kind : spec.kinds()) {
    const double diff =
        static_cast<double>(predicted.at(kind)) - spec.at(kind);
    s.match += diff == 0 ? 1.0 : 0.0;
    s.closeness += std::exp(-diff * diff);
  }
  s.match /= spec.size();
  s.closeness /= spec.size();
  return s;
}

RecordScore ScoreRecord(const EvalPair& pair) {
  return ScoreProperties(pair.spec, ComputeProperties(pair.predicted));
}

std::string BucketLabel(int bucket) {
  const auto& b = kBuckets.at(bucket);
  return "n in [" + std::to_string(b.lo) + "," + std::to_string(b.hi) + "]";
}

std::optional<int> BucketFor(int num_nodes) {
  for (int i = 0; i < kNumBuckets; ++i) {
    if (num_nodes >= kBuckets[i].lo && num_nodes <= kBuckets[i].hi) return i;
  }
  return std::nullopt;
}

// ====== Accumulation ======

void EvalAccumulator::Add(const PropertySpec& spec,
                          const PropertySpec& predicted,
                          std::optional<int> true_nodes) {
  const RecordScore s = ScoreProperties(spec, predicted);
  overall_.Add(s.match, s.closeness);
  for (PropertyKind kind : spec.kinds()) {
    const double diff =
        static_cast<double>(predicted.at(kind)) - spec.at(kind);
    per_property_[PropertyIndex(kind)].Add(diff == 0 ? 1.0 : 0.0,
                                           std::exp(-diff * diff));
  }
  if (true_nodes) {
    if (auto b = BucketFor(*true_nodes)) buckets_[*b].Add(s.match, s.closeness);
  }
}

void EvalAccumulator::Add(const EvalPair& pair) {
  std::optional<int> true_nodes = pair.spec.get(PropertyKind::kNode);
  if (!true_nodes && pair.true_graph) true_nodes = pair.true_graph->NumActive();
  Add(pair.spec, ComputeProperties(pair.predicted), true_nodes);
}

void EvalAccumulator::Merge(const EvalAccumulator& other) {
  overall_.Merge(other.overall_);
  for (int i = 0; i < kNumProperties; ++i) {
    per_property_[i].Merge(other.per_property_[i]);
  }
  for (int i = 0; i < kNumBuckets; ++i) buckets_[i].Merge(other.buckets_[i]);
}

EvalReport EvalAccumulator::Report() const {
  if (overall_.count == 0) throw std::invalid_argument("no records to report");
  auto summarize = [](const Sums& s) -> std::optional<MetricSummary> {
    if (s.count == 0) return std::nullopt;
    return MetricSummary{s.match / s.count, s.closeness / s.count, s.count};
  };
  EvalReport r;
  r.prop_match = overall_.match / overall_.count;
  r.closeness = overall_.closeness / overall_.count;
  r.count = overall_.count;
  for (int i = 0; i < kNumProperties; ++i) {
    r.per_property[i] = summarize(per_property_[i]);
  }
  for (int i = 0; i < kNumBuckets; ++i) r.buckets[i] = summarize(buckets_[i]);
  return r;
}

EvalReport Aggregate(std::span<const EvalPair> pairs) {
  EvalAccumulator acc;
  for (const auto& p : pairs) acc.Add(p);
  return acc.Report();
}

// ====== Output ======

nlohmann::json ReportToJson(const EvalReport& report) {
  auto summary = [](const MetricSummary& s) {
    return nlohmann::json{{"prop_match", s.prop_match},
                          {"closeness", s.closeness},
                          {"count", s.count}};
  };
  nlohmann::json j;
  j["prop_match"] = report.prop_match;
  j["closeness"] = report.closeness;
  j["count"] = report.count;
  j["per_property"] = nlohmann::json::object();
  for (PropertyKind kind : kAllProperties) {
    if (const auto& s = report.per_property[PropertyIndex(kind)]) {
      j["per_property"][std::string(PropertyName(kind))] = summary(*s);
    }
  }
  j["buckets"] = nlohmann::json::object();
  for (int b = 0; b < kNumBuckets; ++b) {
    if (const auto& s = report.buckets[b]) {
      j["buckets"][BucketLabel(b)] = summary(*s);
    }
  }
  return j;
}

std::string FormatReportTable(const EvalReport& report,
                              const std::string& title, bool per_property,
                              bool buckets) {
  const int columns = buckets ? kNumBuckets : 0;
  std::ostringstream os;
  auto cell = [](std::optional<double> v) {
    char buf[32];
    if (v) {
      std::snprintf(buf, sizeof(buf), "%14.4f", *v);
    } else {
      std::snprintf(buf, sizeof(buf), "%14s", "-");
    }
    return std::string(buf);
  };
  char head[64];
  std::snprintf(head, sizeof(head), "%-16s%14s", title.c_str(), "Overall");
  os << head;
  for (int b = 0; b < columns; ++b) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%14s", BucketLabel(b).c_str());
    os << buf;
  }
  os << '\n';

  auto row = [&](const std::string& name, std::optional<double> overall,
                 auto bucket_value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%-16s", name.c_str());
    os << buf << cell(overall);
    for (int b = 0; b < columns; ++b) os << cell(bucket_value(b));
    os << '\n';
  };
  row("PropMatch", report.prop_match, [&](int b) -> std::optional<double> {
    if (!report.buckets[b]) return std::nullopt;
    return report.buckets[b]->prop_match;
  });
  row("Closeness", report.closeness, [&](int b) -> std::optional<double> {
    if (!report.buckets[b]) return std::nullopt;
    return report.buckets[b]->closeness;
  });
  if (per_property) {
    for (PropertyKind kind : kAllProperties) {
      const auto& s = report.per_property[PropertyIndex(kind)];
      if (!s) continue;
      row(std::string(PropertyName(kind)) + " PM", s->prop_match,
          [](int) -> std::optional<double> { return std::nullopt; });
    }
  }
  os << "records: " << report.count << '\n';
  return os.str();
}

}  // namespace lcgraph
