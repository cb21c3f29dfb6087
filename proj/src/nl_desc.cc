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

#include "lcgraph/nl_desc.h"

#include <algorithm>
#include <cctype>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "lcgraph/errors.h"
#include "lcgraph_templates_data.h"

namespace lcgraph {

namespace {

constexpr std::array<std::string_view, 10> kUnits = {
    "zero", "one", "two",   "three", "four",
    "five", "six", "seven", "eight", "nine"};
constexpr std::array<std::string_view, 10> kTeens = {
    "ten",     "eleven",  "twelve",    "thirteen", "fourteen",
    "fifteen", "sixteen", "seventeen", "eighteen", "nineteen"};
constexpr std::array<std::string_view, 10> kTens = {
    "", "", "twenty", "thirty", "forty", "fifty", "sixty", "seventy",
    "eighty", "ninety"};

std::vector<std::string> SplitWords(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream is{std::string(s)};
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

struct Token {
  enum Kind { kWord, kSeparator } kind;
  std::string text;
  std::size_t offset;
  std::size_t length;
};

// Lowercases and splits on whitespace and hyphens; commas and semicolons
// become separator tokens; periods are dropped.
std::vector<Token> Tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    if (std::isspace(c) || c == '-' || c == '.') {
      ++i;
    } else if (c == ',' || c == ';') {
      tokens.push_back({Token::kSeparator, ",", i, 1});
      ++i;
    } else if (std::isalnum(c)) {
      const std::size_t start = i;
      std::string word;
      while (i < text.size() &&
             std::isalnum(static_cast<unsigned char>(text[i]))) {
        word.push_back(static_cast<char>(
            std::tolower(static_cast<unsigned char>(text[i]))));
        ++i;
      }
      const bool is_and = word == "and";
      tokens.push_back({is_and ? Token::kSeparator : Token::kWord,
                        std::move(word), start, i - start});
    } else {
      throw ParseError(
          "unexpected character '" + std::string(1, text[i]) + "'", i, 1);
    }
  }
  return tokens;
}

bool IsDigits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isdigit(c) != 0;
  });
}

template <std::size_t N>
std::optional<int> IndexOf(const std::array<std::string_view, N>& words,
                           std::string_view w) {
  for (std::size_t i = 0; i < N; ++i) {
    if (!words[i].empty() && words[i] == w) return static_cast<int>(i);
  }
  return std::nullopt;
}

struct NumberMatch {
  int value;
  std::size_t consumed;
};

// Number words below one hundred starting at tokens[pos].
std::optional<NumberMatch> MatchBelowHundred(const std::vector<Token>& tokens,
                                             std::size_t pos) {
  if (pos >= tokens.size() || tokens[pos].kind != Token::kWord) {
    return std::nullopt;
  }
  const std::string& w = tokens[pos].text;
  if (auto teen = IndexOf(kTeens, w)) return NumberMatch{10 + *teen, 1};
  if (auto ten = IndexOf(kTens, w)) {
    if (pos + 1 < tokens.size() && tokens[pos + 1].kind == Token::kWord) {
      auto unit = IndexOf(kUnits, tokens[pos + 1].text);
      if (unit && *unit > 0) return NumberMatch{*ten * 10 + *unit, 2};
    }
    return NumberMatch{*ten * 10, 1};
  }
  if (auto unit = IndexOf(kUnits, w); unit && *unit > 0) {
    return NumberMatch{*unit, 1};
  }
  return std::nullopt;
}

std::optional<NumberMatch> MatchNumber(const std::vector<Token>& tokens,
                                       std::size_t pos) {
  if (pos >= tokens.size() || tokens[pos].kind != Token::kWord) {
    return std::nullopt;
  }
  const std::string& w = tokens[pos].text;
  if (IsDigits(w)) {
    if (w.size() > 9) return std::nullopt;
    return NumberMatch{std::stoi(w), 1};
  }
  if (w == "zero") return NumberMatch{0, 1};
  if (auto unit = IndexOf(kUnits, w);
      unit && *unit > 0 && pos + 1 < tokens.size() &&
      tokens[pos + 1].text == "hundred") {
    NumberMatch m{*unit * 100, 2};
    if (auto rest = MatchBelowHundred(tokens, pos + 2)) {
      m.value += rest->value;
      m.consumed += rest->consumed;
    }
    return m;
  }
  return MatchBelowHundred(tokens, pos);
}

bool WordMatches(const std::string& token, const std::string& word) {
  if (token == word) return true;
  // Singular and plural forms are interchangeable.
  return token + "s" == word || word + "s" == token;
}

struct ClauseMatch {
  const ClauseTemplate* tmpl;
  int value;
  std::size_t consumed;
};

std::optional<ClauseMatch> MatchTemplate(const ClauseTemplate& tmpl,
                                         const std::vector<Token>& tokens,
                                         std::size_t pos) {
  std::size_t p = pos;
  std::optional<int> value = tmpl.fixed_value;
  for (const std::string& word : tmpl.words) {
    if (word == "{}") {
      auto num = MatchNumber(tokens, p);
      if (!num) return std::nullopt;
      value = num->value;
      p += num->consumed;
    } else {
      if (p >= tokens.size() || tokens[p].kind != Token::kWord ||
          !WordMatches(tokens[p].text, word)) {
        return std::nullopt;
      }
      ++p;
    }
  }
  if (!value) return std::nullopt;
  return ClauseMatch{&tmpl, *value, p - pos};
}

std::string JoinClauses(const std::vector<std::string>& clauses) {
  std::string out;
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    if (i > 0) out += (i + 1 == clauses.size()) ? " and " : ", ";
    out += clauses[i];
  }
  return out;
}

}  // namespace

std::string_view DescriptionModeName(DescriptionMode mode) {
  switch (mode) {
    case DescriptionMode::kNumeric:
      return "numeric";
    case DescriptionMode::kWordNumber:
      return "word-number";
    case DescriptionMode::kShuffledNumbers:
      return "shuffled-numbers";
  }
  return "numeric";
}

DescriptionMode DescriptionModeFromName(std::string_view name) {
  for (auto mode : {DescriptionMode::kNumeric, DescriptionMode::kWordNumber,
                    DescriptionMode::kShuffledNumbers}) {
    if (DescriptionModeName(mode) == name) return mode;
  }
  throw std::invalid_argument("unknown description mode '" +
                              std::string(name) + "'");
}

// ====== TemplateTable ======

TemplateTable TemplateTable::FromText(std::string_view text) {
  TemplateTable table;
  std::istringstream is{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw DataError("template line " + std::to_string(line_no) +
                      ": missing tab");
    }
    std::string key = line.substr(0, tab);
    std::optional<int> fixed;
    if (const auto eq = key.find('='); eq != std::string::npos) {
      fixed = std::stoi(key.substr(eq + 1));
      key.resize(eq);
    }
    auto kind = PropertyFromName(key);
    if (!kind) {
      throw DataError("template line " + std::to_string(line_no) +
                      ": unknown property '" + key + "'");
    }
    ClauseTemplate tmpl{*kind, fixed, SplitWords(line.substr(tab + 1))};
    const auto slots = std::count(tmpl.words.begin(), tmpl.words.end(), "{}");
    if (slots > 1 || (slots == 0) != fixed.has_value()) {
      throw DataError("template line " + std::to_string(line_no) +
                      ": need exactly one slot or a fixed value");
    }
    table.templates_.push_back(std::move(tmpl));
  }
  for (PropertyKind kind : kAllProperties) {
    const bool covered =
        std::any_of(table.templates_.begin(), table.templates_.end(),
                    [&](const ClauseTemplate& t) { return t.kind == kind; });
    if (!covered) {
      throw DataError("no template for " + std::string(PropertyName(kind)));
    }
  }
  return table;
}

const TemplateTable& TemplateTable::Default() {
  static const TemplateTable table = FromText(kTemplateTableText);
  return table;
}

const ClauseTemplate& TemplateTable::For(PropertyKind kind, int value) const {
  const ClauseTemplate* fallback = nullptr;
  for (const auto& t : templates_) {
    if (t.kind != kind) continue;
    if (t.fixed_value) {
      if (*t.fixed_value == value) return t;
    } else if (fallback == nullptr) {
      fallback = &t;
    }
  }
  if (fallback == nullptr) {
    throw std::invalid_argument("no template renders " +
                                std::string(PropertyName(kind)) + "=" +
                                std::to_string(value));
  }
  return *fallback;
}

// ====== Rendering ======

std::string NumberToWords(int value) {
  if (value < 0 || value > 999) return std::to_string(value);
  if (value < 10) return std::string(kUnits[value]);
  if (value < 20) return std::string(kTeens[value - 10]);
  if (value < 100) {
    std::string out(kTens[value / 10]);
    if (value % 10 != 0) out += "-" + std::string(kUnits[value % 10]);
    return out;
  }
  std::string out = std::string(kUnits[value / 100]) + " hundred";
  if (value % 100 != 0) out += " " + NumberToWords(value % 100);
  return out;
}

Description Render(const PropertySpec& spec, const RenderConfig& cfg,
                   const TemplateTable& table) {
  if (spec.empty()) throw std::invalid_argument("cannot render an empty spec");
  std::vector<PropertyKind> order = spec.kinds();
  if (cfg.shuffle_properties ||
      cfg.mode == DescriptionMode::kShuffledNumbers) {
    std::mt19937_64 rng(cfg.rng_seed);
    std::shuffle(order.begin(), order.end(), rng);
  }

  Description desc{{}, spec, cfg.mode};
  if (cfg.mode == DescriptionMode::kShuffledNumbers) {
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (i > 0) desc.text += ' ';
      desc.text += std::to_string(spec.at(order[i]));
    }
    return desc;
  }

  std::vector<std::string> clauses;
  for (PropertyKind kind : order) {
    const int value = spec.at(kind);
    const ClauseTemplate& tmpl = table.For(kind, value);
    std::string clause;
    for (const std::string& word : tmpl.words) {
      if (!clause.empty()) clause += ' ';
      if (word == "{}") {
        clause += cfg.mode == DescriptionMode::kWordNumber
                      ? NumberToWords(value)
                      : std::to_string(value);
      } else {
        clause += word;
      }
    }
    clauses.push_back(std::move(clause));
  }
  desc.text = JoinClauses(clauses);
  return desc;
}

// ====== Parsing ======

PropertySpec ParseDescription(std::string_view text,
                              const TemplateTable& table) {
  const std::vector<Token> tokens = Tokenize(text);
  PropertySpec spec;
  std::size_t pos = 0;
  bool any = false;
  while (true) {
    while (pos < tokens.size() && tokens[pos].kind == Token::kSeparator) ++pos;
    if (pos >= tokens.size()) break;

    std::optional<ClauseMatch> best;
    for (const ClauseTemplate& tmpl : table.templates()) {
      auto m = MatchTemplate(tmpl, tokens, pos);
      if (m && (!best || m->consumed > best->consumed)) best = m;
    }
    if (!best) {
      std::size_t end = pos;
      while (end + 1 < tokens.size() &&
             tokens[end + 1].kind != Token::kSeparator) {
        ++end;
      }
      const std::size_t begin = tokens[pos].offset;
      const std::size_t length =
          tokens[end].offset + tokens[end].length - begin;
      throw ParseError("unrecognized clause '" +
                           std::string(text.substr(begin, length)) + "'",
                       begin, length);
    }

    const PropertyKind kind = best->tmpl->kind;
    if (kind == PropertyKind::kCycle && best->value > 1) {
      const Token& t = tokens[pos];
      throw ParseError("Cycle must be 0 or 1", t.offset, t.length);
    }
    if (auto prev = spec.get(kind); prev && *prev != best->value) {
      throw ConflictError("conflicting values for " +
                          std::string(PropertyName(kind)) + ": " +
                          std::to_string(*prev) + " and " +
                          std::to_string(best->value));
    }
    spec.set(kind, best->value);
    any = true;
    pos += best->consumed;
  }
  if (!any) throw ParseError("empty description", 0, text.size());
  return spec;
}

std::vector<int> ParseNumberList(std::string_view text) {
  std::vector<int> values;
  for (const Token& t : Tokenize(text)) {
    if (t.kind == Token::kSeparator) continue;
    if (!IsDigits(t.text) || t.text.size() > 9) {
      throw ParseError("expected a number, got '" + t.text + "'", t.offset,
                       t.length);
    }
    values.push_back(std::stoi(t.text));
  }
  if (values.empty()) throw ParseError("no numbers", 0, text.size());
  return values;
}

PropertySpec AssignUnlabeledNumbers(std::span<const int> values) {
  static constexpr std::array<PropertyKind, 6> kRankOrder = {
      PropertyKind::kEdge, PropertyKind::kNode,  PropertyKind::kMaxDeg,
      PropertyKind::kDiam, PropertyKind::kCCNum, PropertyKind::kMinDeg};
  std::vector<int> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  PropertySpec spec;
  for (std::size_t i = 0; i < sorted.size() && i < kRankOrder.size(); ++i) {
    spec.set(kRankOrder[i], sorted[i]);
  }
  return spec;
}

// ====== Conditioning ======

double PropertyScale(PropertyKind kind) {
  switch (kind) {
    case PropertyKind::kNode:
      return 50.0;
    case PropertyKind::kEdge:
      return 189.0;
    case PropertyKind::kMinDeg:
    case PropertyKind::kMaxDeg:
      return 42.0;
    case PropertyKind::kDiam:
      return 30.0;
    case PropertyKind::kCCNum:
      return 8.0;
    case PropertyKind::kCycle:
      return 1.0;
  }
  return 1.0;
}

ConditionVector EncodeCondition(const PropertySpec& spec) {
  ConditionVector c{};
  for (PropertyKind kind : spec.kinds()) {
    const int i = PropertyIndex(kind);
    c[2 * i] = 1.0;
    c[2 * i + 1] = spec.at(kind) / PropertyScale(kind);
  }
  return c;
}

ConditionVector PropertyConditionEncoder::Encode(std::string_view text) const {
  return EncodeCondition(ParseDescription(text));
}

ConditionVector UnlabeledNumberEncoder::Encode(std::string_view text) const {
  return EncodeCondition(AssignUnlabeledNumbers(ParseNumberList(text)));
}

}  // namespace lcgraph
