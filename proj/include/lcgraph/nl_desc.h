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

#ifndef LCGRAPH_NL_DESC_H_
#define LCGRAPH_NL_DESC_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lcgraph/graph.h"

namespace lcgraph {

enum class DescriptionMode : std::uint8_t {
  kNumeric,
  kWordNumber,
  kShuffledNumbers,
};

std::string_view DescriptionModeName(DescriptionMode mode);
// "numeric", "word-number", "shuffled-numbers". Throws std::invalid_argument.
DescriptionMode DescriptionModeFromName(std::string_view name);

struct RenderConfig {
  bool shuffle_properties = false;
  DescriptionMode mode = DescriptionMode::kNumeric;
  std::uint64_t rng_seed = 0;
};

struct Description {
  std::string text;
  PropertySpec spec;
  DescriptionMode mode = DescriptionMode::kNumeric;
};

// One line of the template table: a clause pattern for one property, with
// an optional fixed value (used for the boolean Cycle clauses).
struct ClauseTemplate {
  PropertyKind kind;
  std::optional<int> fixed_value;
  std::vector<std::string> words;  // "{}" marks the number slot
};

class TemplateTable {
 public:
  // Parses the tab-separated table format of data/templates.txt. Throws
  // DataError on malformed lines or if a property lacks a template.
  static TemplateTable FromText(std::string_view text);
  // The table compiled into the library from data/templates.txt.
  static const TemplateTable& Default();

  // Template used to render `kind` with `value`.
  const ClauseTemplate& For(PropertyKind kind, int value) const;
  std::span<const ClauseTemplate> templates() const { return templates_; }

 private:
  std::vector<ClauseTemplate> templates_;
};

// English cardinal ("one hundred eighty-nine"). Values outside [0, 999]
// come back as digits.
std::string NumberToWords(int value);

// Renders one clause per present property, canonical order unless
// cfg.shuffle_properties. Shuffled-numbers mode always permutes and drops
// the property names. Throws std::invalid_argument on an empty spec.
Description Render(const PropertySpec& spec, const RenderConfig& cfg,
                   const TemplateTable& table = TemplateTable::Default());

// Inverse of Render for the numeric and word-number modes. Accepts case,
// whitespace and punctuation variations and singular nouns. Throws
// ParseError naming the offending span, ConflictError on contradicting
// duplicates.
PropertySpec ParseDescription(
    std::string_view text,
    const TemplateTable& table = TemplateTable::Default());

// Reads a whitespace/comma separated list of non-negative integers (the
// shuffled-numbers rendering). Throws ParseError.
std::vector<int> ParseNumberList(std::string_view text);

// Assigns unlabeled values to properties by rank, largest first, following
// the dominant ordering Edge >= Node >= MaxDeg >= Diam >= CCNum >= MinDeg.
// At most six values are used; extra values are ignored.
PropertySpec AssignUnlabeledNumbers(std::span<const int> values);

inline constexpr int kConditionDim = 2 * kNumProperties;
using ConditionVector = std::array<double, kConditionDim>;

// Normalizing constant per property (dataset maxima).
double PropertyScale(PropertyKind kind);

// Per property: (presence flag, value / scale). Absent entries are (0, 0).
ConditionVector EncodeCondition(const PropertySpec& spec);

// Text -> conditioning vector. Implementations are stateless.
class ConditionEncoder {
 public:
  virtual ~ConditionEncoder() = default;
  virtual ConditionVector Encode(std::string_view text) const = 0;
};

// ParseDescription followed by EncodeCondition.
class PropertyConditionEncoder : public ConditionEncoder {
 public:
  ConditionVector Encode(std::string_view text) const override;
};

// ParseNumberList + AssignUnlabeledNumbers; for descriptions without
// property names.
class UnlabeledNumberEncoder : public ConditionEncoder {
 public:
  ConditionVector Encode(std::string_view text) const override;
};

}  // namespace lcgraph

#endif  // LCGRAPH_NL_DESC_H_
