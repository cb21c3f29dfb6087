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
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "lcgraph/cli.h"
#include "lcgraph/errors.h"
#include "lcgraph/io.h"
#include "lcgraph/nl_desc.h"
#include "src/cli/internal.h"

namespace lcgraph::cli {

namespace fs = std::filesystem;
using nlohmann::json;

// ---- Shared helpers ----

FamilyConfig DataOptions::Families() const {
  if (min_nodes.has_value() != max_nodes.has_value()) {
    throw UsageError("--min-nodes and --max-nodes go together");
  }
  FamilyConfig f = min_nodes ? FamilyConfig::Restricted(*min_nodes, *max_nodes)
                             : FamilyConfig();
  try {
    f.Validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (f.MaxNodes() > capacity) {
    throw UsageError("node range reaches " + std::to_string(f.MaxNodes()) +
                     " but --capacity is " + std::to_string(capacity));
  }
  return f;
}

SplitConfig DataOptions::Split(const std::string& name, std::int64_t size) const {
  static const std::vector<std::string> kSplits = {"train", "dev", "test"};
  const auto it = std::find(kSplits.begin(), kSplits.end(), name);
  if (it == kSplits.end()) throw UsageError("unknown split '" + name + "'");
  if (size < 0) throw UsageError("split size must be non-negative");
  SplitConfig cfg;
  cfg.split = name;
  cfg.size = size;
  cfg.seed = MixSeed(seed, static_cast<std::uint64_t>(it - kSplits.begin()));
  try {
    cfg.mode = SelectionModeFromName(mode);
    cfg.text_mode = DescriptionModeFromName(text_mode);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  cfg.capacity = capacity;
  cfg.families = Families();
  return cfg;
}

json DataOptions::ToJson() const {
  json j = {{"seed", seed},       {"mode", mode},     {"text_mode", text_mode},
            {"capacity", capacity}, {"workers", workers}};
  if (min_nodes) j["min_nodes"] = *min_nodes;
  if (max_nodes) j["max_nodes"] = *max_nodes;
  return j;
}

TrainConfig LoadTrainConfig(const std::optional<fs::path>& path) {
  if (!path) return TrainConfig();
  return ParseTrainConfig(ReadFile(*path));
}

PropertySpec SpecForText(const std::string& text) {
  const bool bare_numbers =
      !text.empty() && std::all_of(text.begin(), text.end(), [](unsigned char c) {
        return std::isdigit(c) || std::isspace(c);
      });
  if (bare_numbers) return AssignUnlabeledNumbers(ParseNumberList(text));
  return ParseDescription(text);
}

std::vector<Graph> GenerateForRecords(TrainedModel& model,
                                      const std::vector<DatasetRecord>& records,
                                      std::uint64_t seed) {
  std::vector<ConditionVector> conds;
  conds.reserve(records.size());
  for (const auto& r : records) conds.push_back(EncodeDescription(r.text));
  return GenerateForConditions(model, conds, seed);
}

std::vector<Graph> SynthesizeForRecords(const std::vector<DatasetRecord>& records,
                                        SearchConfig cfg, std::uint64_t seed) {
  std::vector<Graph> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    cfg.seed = MixSeed(seed, r.id);
    out.push_back(Synthesize(r.spec, cfg).graph);
  }
  return out;
}

Evaluation EvaluateGraphs(const std::vector<DatasetRecord>& records,
                          const std::vector<Graph>& graphs) {
  std::map<std::uint64_t, Graph> by_id;
  for (std::size_t i = 0; i < records.size(); ++i) by_id.emplace(records[i].id, graphs[i]);
  return EvaluatePredictions(records, by_id);
}

std::string PredictionsText(const std::vector<DatasetRecord>& records,
                            const std::vector<Graph>& graphs) {
  std::string text;
  for (std::size_t i = 0; i < records.size(); ++i) {
    text += PredictionLine(records[i].id, graphs[i]) + "\n";
  }
  return text;
}

namespace {

void WriteJson(const fs::path& path, const json& j) {
  WriteFileAtomic(path, j.dump(2) + "\n");
}

void AddDataFlags(CLI::App* cmd, DataOptions& d) {
  cmd->add_option("--seed", d.seed, "Base seed")->capture_default_str();
  cmd->add_option("--mode", d.mode, "Property selection")
      ->check(CLI::IsMember({"simple", "complex", "anyprop"}))
      ->capture_default_str();
  cmd->add_option("--text", d.text_mode, "Description style")
      ->check(CLI::IsMember({"numeric", "word-number", "shuffled-numbers"}))
      ->capture_default_str();
  cmd->add_option("--capacity", d.capacity, "Node slots per graph")
      ->check(CLI::Range(1, 1000))
      ->capture_default_str();
  cmd->add_option("--min-nodes", d.min_nodes, "Restrict node counts (with --max-nodes)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-nodes", d.max_nodes, "Restrict node counts (with --min-nodes)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--workers", d.workers, "Generation threads")
      ->check(CLI::Range(1, 256))
      ->capture_default_str();
}

// ---- gen-dataset ----

struct GenDatasetArgs {
  DataOptions data;
  std::vector<std::string> splits = {"train", "dev", "test"};
  std::optional<std::int64_t> size;
  fs::path out;
};

int CmdGenDataset(const GenDatasetArgs& a, std::ostream& out) {
  std::vector<SplitConfig> cfgs;
  for (const auto& s : a.splits) {
    cfgs.push_back(a.data.Split(s, a.size.value_or(SplitConfig::DefaultSize(s))));
  }
  PrepareRunDir(a.out, false);
  json seeds = json::object();
  for (const auto& cfg : cfgs) {
    const fs::path path = a.out / (cfg.split + ".jsonl");
    GenerateSplit(cfg, path, a.data.workers);
    seeds[cfg.split] = cfg.seed;
    out << cfg.split << ": " << cfg.size << " records -> " << path.string() << "\n";
  }
  json config = a.data.ToJson();
  config["splits"] = a.splits;
  if (a.size) config["size"] = *a.size;
  WriteJson(a.out / "manifest.json", MakeManifest("gen-dataset", config, seeds));
  return kExitOk;
}

// ---- train ----

struct TrainArgs {
  fs::path train;
  std::optional<fs::path> dev;
  std::optional<fs::path> config;
  fs::path out;
  std::optional<std::uint64_t> seed;
  std::optional<int> epochs;
  std::optional<fs::path> resume;
};

std::string EpochLine(const EpochLog& l) {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "epoch %4d  d_loss %9.4f  g_loss %9.4f  gp %8.4f  reward %.3e  "
                "dev PM %.4f  dev Closeness %.4f\n",
                l.epoch, l.d_loss, l.g_loss, l.gp, l.reward_loss, l.dev_prop_match,
                l.dev_closeness);
  return buf;
}

int CmdTrain(const TrainArgs& a, std::ostream& out) {
  TrainConfig cfg = LoadTrainConfig(a.config);
  if (a.seed) cfg.seed = *a.seed;
  if (a.epochs) cfg.epochs = *a.epochs;
  cfg.Validate();
  const auto train = ReadRecords(a.train, cfg.capacity);
  const auto dev = a.dev ? ReadRecords(*a.dev, cfg.capacity) : std::vector<DatasetRecord>();
  PrepareRunDir(a.out, a.resume.has_value());

  WriteFileAtomic(a.out / "config.txt", TrainConfigToText(cfg));
  json config = {{"train", TrainConfigToJson(cfg)}, {"train_file", a.train.string()}};
  if (a.dev) config["dev_file"] = a.dev->string();
  WriteJson(a.out / "manifest.json",
            MakeManifest("train", config, {{"train", cfg.seed}}));

  TrainOptions opts;
  opts.log_path = a.out / "train_log.jsonl";
  opts.checkpoint_dir = a.out / "checkpoints";
  opts.resume_from = a.resume;
  opts.on_epoch = [&](const EpochLog& l) { out << EpochLine(l) << std::flush; };
  Train(train, dev, cfg, opts);
  out << "final checkpoint: " << (*opts.checkpoint_dir / "final.ckpt").string() << "\n";
  return kExitOk;
}

// ---- eval ----

struct EvalArgs {
  fs::path reference;
  std::optional<fs::path> predictions;
  std::optional<fs::path> checkpoint;
  std::uint64_t seed = 0;
  bool buckets = false;
  int capacity = kDefaultCapacity;
  std::optional<fs::path> out;
};

int CmdEval(const EvalArgs& a, std::ostream& out) {
  if (a.predictions.has_value() == a.checkpoint.has_value()) {
    throw UsageError("eval needs exactly one of --predictions or --checkpoint");
  }
  const auto reference = ReadRecords(a.reference, a.capacity);
  Evaluation e;
  std::string generated;
  if (a.predictions) {
    e = EvaluatePredictions(reference, ReadPredictions(*a.predictions, a.capacity));
  } else {
    TrainedModel model = LoadTrainedModel(*a.checkpoint);
    const auto graphs = GenerateForRecords(model, reference, a.seed);
    e = EvaluateGraphs(reference, graphs);
    generated = PredictionsText(reference, graphs);
  }
  const std::string table = FormatReportTable(e.report, "eval", true, a.buckets);
  const json j = EvaluationToJson(e);
  out << table;
  if (e.missing > 0) out << "missing predictions (scored as empty graphs): " << e.missing << "\n";
  if (e.unmatched > 0) out << "predictions without a reference record: " << e.unmatched << "\n";
  out << j.dump() << "\n";
  if (a.out) {
    PrepareRunDir(*a.out, false);
    WriteFileAtomic(*a.out / "report.txt", table);
    WriteJson(*a.out / "report.json", j);
    if (!generated.empty()) WriteFileAtomic(*a.out / "predictions.jsonl", generated);
    json config = {{"reference", a.reference.string()}, {"buckets", a.buckets}};
    if (a.predictions) config["predictions"] = a.predictions->string();
    if (a.checkpoint) config["checkpoint"] = a.checkpoint->string();
    WriteJson(*a.out / "manifest.json", MakeManifest("eval", config, {{"generate", a.seed}}));
  }
  return kExitOk;
}

// ---- synth ----

struct SynthArgs {
  std::optional<fs::path> input;
  std::optional<std::string> text;
  std::optional<std::string> spec;
  std::optional<fs::path> out;
  SearchConfig search;
  std::uint64_t seed = 0;
  std::optional<int> min_nodes;
  std::optional<int> max_nodes;
};

struct SynthItem {
  std::uint64_t id = 0;
  PropertySpec spec;
};

std::vector<SynthItem> ReadSynthInput(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::vector<SynthItem> items;
  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no) + ": ";
    const json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw DataError(where + "expected a JSON object");
    SynthItem item;
    item.id = j.contains("id") && j["id"].is_number_integer() ? j["id"].get<std::uint64_t>()
                                                              : line_no - 1;
    try {
      if (j.contains("spec")) {
        item.spec = SpecFromJson(j["spec"]);
      } else if (j.contains("text") && j["text"].is_string()) {
        item.spec = SpecForText(j["text"].get<std::string>());
      } else {
        throw DataError("line needs 'spec' or 'text'");
      }
    } catch (const ParseError& e) {
      throw ParseError(where + e.what(), e.offset(), e.length());
    } catch (const DataError& e) {
      throw DataError(where + e.what());
    }
    items.push_back(std::move(item));
  }
  return items;
}

json SynthResultJson(std::uint64_t id, const SearchResult& r) {
  json j = GraphToJson(r.graph);
  j["id"] = id;
  j["prop_match"] = r.prop_match;
  j["closeness"] = r.closeness;
  j["restart"] = r.restart;
  j["moves"] = r.moves;
  return j;
}

int CmdSynth(SynthArgs a, std::ostream& out) {
  const int sources = a.input.has_value() + a.text.has_value() + a.spec.has_value();
  if (sources != 1) throw UsageError("synth needs exactly one of --input, --text or --spec");
  if (a.input && !a.out) throw UsageError("synth --input needs --out");
  if (a.min_nodes.has_value() != a.max_nodes.has_value()) {
    throw UsageError("--min-nodes and --max-nodes go together");
  }
  if (a.min_nodes) {
    a.search.families = FamilyConfig::Restricted(*a.min_nodes, *a.max_nodes);
  } else if (a.search.capacity < a.search.families.MaxNodes()) {
    a.search.families = FamilyConfig::Restricted(std::min(5, a.search.capacity),
                                                 a.search.capacity);
  }
  if (a.search.families.MaxNodes() > a.search.capacity) {
    throw UsageError("node range exceeds --capacity");
  }
  a.search.Validate();

  std::vector<SynthItem> items;
  if (a.input) {
    items = ReadSynthInput(*a.input);
  } else if (a.text) {
    items.push_back({0, SpecForText(*a.text)});
  } else {
    const json j = json::parse(*a.spec, nullptr, false);
    if (j.is_discarded()) throw DataError("--spec is not valid JSON");
    items.push_back({0, SpecFromJson(j)});
  }

  std::string lines;
  double pm = 0, cl = 0;
  long solved = 0;
  for (const SynthItem& item : items) {
    SearchConfig cfg = a.search;
    cfg.seed = MixSeed(a.seed, item.id);
    const SearchResult r = Synthesize(item.spec, cfg);
    lines += SynthResultJson(item.id, r).dump() + "\n";
    pm += r.prop_match;
    cl += r.closeness;
    solved += r.prop_match == 1.0;
  }
  const double n = std::max<double>(1.0, static_cast<double>(items.size()));
  const json summary = {{"records", items.size()},
                        {"prop_match", pm / n},
                        {"closeness", cl / n},
                        {"solved", solved},
                        {"solved_fraction", static_cast<double>(solved) / n}};
  if (a.out) {
    PrepareRunDir(*a.out, false);
    WriteFileAtomic(*a.out / "synth.jsonl", lines);
    WriteJson(*a.out / "summary.json", summary);
    json config = {{"budget", a.search.budget},
                   {"restarts", a.search.restarts},
                   {"anneal", a.search.anneal},
                   {"node_move_prob", a.search.node_move_prob},
                   {"capacity", a.search.capacity}};
    if (a.input) config["input"] = a.input->string();
    WriteJson(*a.out / "manifest.json", MakeManifest("synth", config, {{"search", a.seed}}));
  }
  if (!a.input) out << lines;
  out << summary.dump() << "\n";
  return kExitOk;
}

// ---- parse ----

struct ParseArgs {
  std::vector<std::string> texts;
  std::optional<fs::path> input;
};

void ReportParseError(std::ostream& err, const std::string& label,
                      const std::string& text, const ParseError& e) {
  err << label << "error: " << e.what() << "\n  " << text << "\n  "
      << std::string(std::min(e.offset(), text.size()), ' ')
      << std::string(std::max<std::size_t>(1, e.length()), '^') << "\n";
}

int CmdParse(const ParseArgs& a, std::ostream& out, std::ostream& err) {
  if (a.texts.empty() == !a.input.has_value()) {
    throw UsageError("parse needs description arguments or --input, not both");
  }
  std::vector<std::string> texts = a.texts;
  if (a.input) {
    std::istringstream in(ReadFile(*a.input));
    std::string line;
    while (std::getline(in, line)) texts.push_back(line);
  }
  int status = kExitOk;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    const std::string label =
        a.input ? a.input->string() + ":" + std::to_string(i + 1) + ": " : "";
    if (a.input && texts[i].empty()) continue;
    try {
      out << SpecToJson(SpecForText(texts[i])).dump() << "\n";
    } catch (const ParseError& e) {
      ReportParseError(err, label, texts[i], e);
      status = kExitData;
    } catch (const DataError& e) {
      err << label << "error: " << e.what() << "\n";
      status = kExitData;
    }
  }
  return status;
}

// ---- import-external ----

struct ImportArgs {
  fs::path raw;
  std::optional<fs::path> reference;
  fs::path out;
  int capacity = kDefaultCapacity;
};

int CmdImport(const ImportArgs& a, std::ostream& out) {
  if (!fs::exists(a.raw)) throw DataError("cannot open " + a.raw.string());
  PrepareRunDir(a.out, false);
  const ImportSummary s = ImportExternal(a.raw, a.reference, a.out, a.capacity);
  json config = {{"raw", a.raw.string()}, {"capacity", a.capacity}};
  if (a.reference) config["reference"] = a.reference->string();
  WriteJson(a.out / "manifest.json", MakeManifest("import-external", config, json::object()));
  out << "imported " << s.imported << " of " << s.lines << " lines, " << s.errors
      << " errors";
  if (a.reference) {
    out << ", " << s.missing_ids.size() << " reference ids missing, "
        << s.unknown_ids.size() << " unknown ids";
  }
  out << "\n";
  return kExitOk;
}

}  // namespace

int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Language-conditioned graph generation: datasets, GAN training, "
               "evaluation and search"};
  app.name("lcgraph");
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", std::string(kToolVersion));

  GenDatasetArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-dataset", "Generate train/dev/test JSONL splits");
  AddDataFlags(gen_cmd, gen.data);
  gen_cmd->add_option("--split", gen.splits, "Splits to write")
      ->check(CLI::IsMember({"train", "dev", "test"}))
      ->capture_default_str();
  gen_cmd->add_option("--size", gen.size, "Records per split (default: 100000/10000/500)")
      ->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--out", gen.out, "Fresh output directory")->required();

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Train the conditional WGAN-GP");
  train_cmd->add_option("--train", train.train, "Training records (JSONL)")
      ->required()
      ->check(CLI::ExistingFile);
  train_cmd->add_option("--dev", train.dev, "Dev records scored each epoch")
      ->check(CLI::ExistingFile);
  train_cmd->add_option("--config", train.config, "key = value config file")
      ->check(CLI::ExistingFile);
  train_cmd->add_option("--out", train.out, "Run directory")->required();
  train_cmd->add_option("--seed", train.seed, "Override the config seed");
  train_cmd->add_option("--epochs", train.epochs, "Override the config epochs")
      ->check(CLI::PositiveNumber);
  train_cmd->add_option("--resume", train.resume, "Continue from a checkpoint")
      ->check(CLI::ExistingFile);

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Score predictions against reference records");
  eval_cmd->add_option("--reference", eval.reference, "Reference records (JSONL)")
      ->required()
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--predictions", eval.predictions, "Predicted graphs keyed by id")
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--checkpoint", eval.checkpoint, "Generate predictions from a model")
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--seed", eval.seed, "Generation seed")->capture_default_str();
  eval_cmd->add_flag("--buckets", eval.buckets, "Add per-node-bucket columns");
  eval_cmd->add_option("--capacity", eval.capacity, "Node slots for reading graphs")
      ->check(CLI::Range(1, 1000))
      ->capture_default_str();
  eval_cmd->add_option("--out", eval.out, "Also write the report into this directory");

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Search for graphs matching property specs");
  synth_cmd->add_option("--input", synth.input, "JSONL with 'spec' or 'text' per line")
      ->check(CLI::ExistingFile);
  synth_cmd->add_option("--text", synth.text, "One description");
  synth_cmd->add_option("--spec", synth.spec, "One spec as JSON");
  synth_cmd->add_option("--out", synth.out, "Fresh output directory");
  synth_cmd->add_option("--budget", synth.search.budget, "Moves over all restarts")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth_cmd->add_option("--restarts", synth.search.restarts)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth_cmd->add_flag("--anneal", synth.search.anneal, "Simulated annealing acceptance");
  synth_cmd->add_option("--node-move-prob", synth.search.node_move_prob)
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  synth_cmd->add_option("--capacity", synth.search.capacity)
      ->check(CLI::Range(1, 1000))
      ->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed)->capture_default_str();
  synth_cmd->add_option("--min-nodes", synth.min_nodes)->check(CLI::PositiveNumber);
  synth_cmd->add_option("--max-nodes", synth.max_nodes)->check(CLI::PositiveNumber);

  ParseArgs parse;
  auto* parse_cmd = app.add_subcommand("parse", "Parse descriptions into property specs");
  parse_cmd->add_option("texts", parse.texts, "Descriptions");
  parse_cmd->add_option("--input", parse.input, "One description per line")
      ->check(CLI::ExistingFile);

  ImportArgs import;
  auto* import_cmd = app.add_subcommand(
      "import-external", "Turn externally produced matrices into predictions");
  import_cmd->add_option("--raw", import.raw, "JSONL lines {\"id\", \"matrix\"}")->required();
  import_cmd->add_option("--reference", import.reference, "Reference records to reconcile")
      ->check(CLI::ExistingFile);
  import_cmd->add_option("--out", import.out, "Fresh output directory")->required();
  import_cmd->add_option("--capacity", import.capacity)
      ->check(CLI::Range(1, 1000))
      ->capture_default_str();

  ExperimentOptions exp;
  auto* exp_cmd = app.add_subcommand("experiment", "Run a named end-to-end recipe");
  exp_cmd->add_option("recipe", exp.recipe)
      ->required()
      ->check(CLI::IsMember(
          {"simple", "complex", "anyprop", "shuffled-numbers", "prop-count-sweep"}));
  AddDataFlags(exp_cmd, exp.data);
  exp_cmd->add_option("--out", exp.out, "Run directory")->required();
  exp_cmd->add_option("--size", exp.train_size, "Training records")
      ->check(CLI::PositiveNumber);
  exp_cmd->add_option("--dev-size", exp.dev_size)->check(CLI::NonNegativeNumber);
  exp_cmd->add_option("--test-size", exp.test_size)->check(CLI::PositiveNumber);
  exp_cmd->add_option("--epochs", exp.epochs)->check(CLI::PositiveNumber);
  exp_cmd->add_option("--config", exp.config)->check(CLI::ExistingFile);
  exp_cmd->add_option("--checkpoint", exp.checkpoint, "Trained model to evaluate")
      ->check(CLI::ExistingFile);
  exp_cmd->add_option("--generator", exp.generator, "Graph source for evaluation recipes")
      ->check(CLI::IsMember({"model", "search"}))
      ->capture_default_str();
  exp_cmd->add_option("--budget", exp.budget, "Search moves per record")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  exp_cmd->add_flag("--resume", exp.resume, "Continue a partial run in --out");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen_cmd) return CmdGenDataset(gen, out);
    if (*train_cmd) return CmdTrain(train, out);
    if (*eval_cmd) return CmdEval(eval, out);
    if (*synth_cmd) return CmdSynth(synth, out);
    if (*parse_cmd) return CmdParse(parse, out, err);
    if (*import_cmd) return CmdImport(import, out);
    if (*exp_cmd) return RunExperiment(exp, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const ParseError& e) {
    err << "parse error at offset " << e.offset() << ": " << e.what() << "\n";
    return kExitData;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitData;
  } catch (const json::exception& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace lcgraph::cli
