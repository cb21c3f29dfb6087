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

// Experiment recipes. Each writes into one run directory:
//
//   manifest.json      config, config hash, versions, seeds, finished stages
//   data/              generated splits
//   train/             training log and checkpoints (training recipes)
//   report.txt/.json   evaluation tables
//   *.csv              series for plotting

#include <cstdio>
#include <fstream>
#include <regex>
#include <sstream>

#include "lcgraph/cli.h"
#include "lcgraph/errors.h"
#include "lcgraph/io.h"
#include "src/cli/internal.h"

namespace lcgraph::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Stream ids under the experiment seed.
constexpr std::uint64_t kGenerateStream = 4;
constexpr std::uint64_t kSweepStream = 100;

class Run {
 public:
  Run(const ExperimentOptions& opts, json config)
      : dir_(opts.out), resume_(opts.resume) {
    manifest_ = MakeManifest("experiment", config, json::object());
    manifest_["stages"] = json::array();
    const fs::path path = dir_ / "manifest.json";
    PrepareRunDir(dir_, resume_);
    if (resume_ && fs::exists(path)) {
      const json old = json::parse(ReadFile(path));
      if (old.value("config_hash", "") != manifest_["config_hash"]) {
        throw UsageError("--resume with a different configuration than " + path.string());
      }
      manifest_["stages"] = old.value("stages", json::array());
    }
    Save();
  }

  const fs::path& dir() const { return dir_; }
  bool resume() const { return resume_; }

  bool Done(const std::string& stage) const {
    for (const auto& s : manifest_["stages"]) {
      if (s == stage) return true;
    }
    return false;
  }
  void Finish(const std::string& stage, const json& seeds = json::object()) {
    if (!Done(stage)) manifest_["stages"].push_back(stage);
    for (const auto& [k, v] : seeds.items()) manifest_["seeds"][k] = v;
    Save();
  }

 private:
  void Save() {
    WriteFileAtomic(dir_ / "manifest.json", manifest_.dump(2) + "\n");
  }

  fs::path dir_;
  bool resume_;
  json manifest_;
};

std::vector<DatasetRecord> EnsureSplit(Run& run, const SplitConfig& cfg,
                                       const std::string& file, int workers,
                                       std::ostream& out) {
  const fs::path path = run.dir() / "data" / file;
  fs::create_directories(path.parent_path());
  if (!(run.Done("data/" + file) && fs::exists(path))) {
    out << "generating " << cfg.size << " " << cfg.split << " records -> "
        << path.string() << "\n";
    GenerateSplit(cfg, path, workers);
    run.Finish("data/" + file, {{"data/" + file, cfg.seed}});
  }
  return ReadRecords(path, cfg.capacity);
}

std::string ReportTables(const std::vector<std::pair<std::string, Evaluation>>& rows,
                         bool buckets) {
  std::string text;
  for (const auto& [title, e] : rows) {
    text += FormatReportTable(e.report, title, true, buckets) + "\n";
  }
  return text;
}

void WriteReports(const fs::path& dir,
                  const std::vector<std::pair<std::string, Evaluation>>& rows,
                  bool buckets, std::ostream& out) {
  json j = json::object();
  for (const auto& [title, e] : rows) j[title] = EvaluationToJson(e);
  const std::string text = ReportTables(rows, buckets);
  WriteFileAtomic(dir / "report.txt", text);
  WriteFileAtomic(dir / "report.json", j.dump(2) + "\n");
  out << text;
}

// The log as CSV, one row per epoch.
void WriteCurve(const fs::path& log, const fs::path& csv) {
  std::istringstream in(ReadFile(log));
  std::string text = "epoch,d_loss,g_loss,gp,reward_loss,dev_prop_match,dev_closeness\n";
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  j["epoch"].get<int>(), j["d_loss"].get<double>(),
                  j["g_loss"].get<double>(), j["gp"].get<double>(),
                  j["reward_loss"].get<double>(), j["dev_prop_match"].get<double>(),
                  j["dev_closeness"].get<double>());
    text += buf;
  }
  WriteFileAtomic(csv, text);
}

std::optional<fs::path> LatestEpochCheckpoint(const fs::path& dir) {
  if (!fs::exists(dir)) return std::nullopt;
  static const std::regex kName(R"(epoch_(\d+)\.ckpt)");
  int best = -1;
  std::optional<fs::path> path;
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::smatch m;
    const std::string name = entry.path().filename().string();
    if (std::regex_match(name, m, kName) && std::stoi(m[1]) > best) {
      best = std::stoi(m[1]);
      path = entry.path();
    }
  }
  return path;
}

// ---- simple / complex / anyprop ----

int TrainingRecipe(const ExperimentOptions& opts, std::ostream& out) {
  DataOptions data = opts.data;
  data.mode = opts.recipe;
  TrainConfig cfg = LoadTrainConfig(opts.config);
  cfg.seed = data.seed;
  cfg.capacity = data.capacity;
  if (opts.epochs) cfg.epochs = *opts.epochs;
  if (cfg.checkpoint_every == 0) cfg.checkpoint_every = 1;
  cfg.Validate();
  const SplitConfig train_split = data.Split("train", opts.train_size.value_or(100000));
  const SplitConfig dev_split = data.Split("dev", opts.dev_size.value_or(10000));
  const SplitConfig test_split = data.Split("test", opts.test_size.value_or(500));

  const json config = {{"recipe", opts.recipe},
                       {"data", data.ToJson()},
                       {"sizes", {train_split.size, dev_split.size, test_split.size}},
                       {"train", TrainConfigToJson(cfg)}};
  Run run(opts, config);

  const auto train = EnsureSplit(run, train_split, "train.jsonl", data.workers, out);
  const auto dev = EnsureSplit(run, dev_split, "dev.jsonl", data.workers, out);
  const auto test = EnsureSplit(run, test_split, "test.jsonl", data.workers, out);

  const fs::path train_dir = run.dir() / "train";
  const fs::path final_ckpt = train_dir / "checkpoints" / "final.ckpt";
  if (!(run.Done("train") && fs::exists(final_ckpt))) {
    fs::create_directories(train_dir);
    WriteFileAtomic(train_dir / "config.txt", TrainConfigToText(cfg));
    TrainOptions topts;
    topts.log_path = train_dir / "train_log.jsonl";
    topts.checkpoint_dir = train_dir / "checkpoints";
    if (run.resume()) topts.resume_from = LatestEpochCheckpoint(*topts.checkpoint_dir);
    if (topts.resume_from) out << "resuming from " << topts.resume_from->string() << "\n";
    topts.on_epoch = [&](const EpochLog& l) {
      out << "epoch " << l.epoch << "/" << cfg.epochs << "  dev PM "
          << l.dev_prop_match << "  dev Closeness " << l.dev_closeness
          << "  reward " << l.reward_loss << "\n"
          << std::flush;
    };
    Train(train, dev, cfg, topts);
    WriteCurve(*topts.log_path, run.dir() / "training_curve.csv");
    run.Finish("train", {{"train", cfg.seed}});
  }

  const std::uint64_t gen_seed = MixSeed(data.seed, kGenerateStream);
  TrainedModel model = LoadTrainedModel(final_ckpt);
  const auto graphs = GenerateForRecords(model, test, gen_seed);
  TrainedModel initial = InitialModel(cfg, train);
  const auto floor_graphs = GenerateForRecords(initial, test, gen_seed);
  WriteFileAtomic(run.dir() / "predictions.jsonl", PredictionsText(test, graphs));
  WriteReports(run.dir(),
               {{opts.recipe, EvaluateGraphs(test, graphs)},
                {"untrained", EvaluateGraphs(test, floor_graphs)}},
               opts.buckets, out);
  run.Finish("eval", {{"generate", gen_seed}});
  return kExitOk;
}

// ---- evaluation-only recipes ----

// Either a trained model or the search baseline.
class GraphSource {
 public:
  GraphSource(const ExperimentOptions& opts, DataOptions& data) : opts_(opts) {
    if (opts.generator == "model") {
      if (!opts.checkpoint) {
        throw UsageError("recipe " + opts.recipe +
                         " needs --checkpoint (or --generator search)");
      }
      model_ = LoadTrainedModel(*opts.checkpoint);
      data.capacity = model_->config.capacity;
    } else if (opts.checkpoint) {
      throw UsageError("--checkpoint is only used with --generator model");
    }
    search_.budget = opts.budget;
    search_.capacity = data.capacity;
    search_.families = data.Families();
  }

  json ToJson() const {
    json j = {{"generator", opts_.generator}};
    if (opts_.checkpoint) j["checkpoint"] = opts_.checkpoint->string();
    if (!model_) j["budget"] = opts_.budget;
    return j;
  }

  std::vector<Graph> Generate(const std::vector<DatasetRecord>& records,
                              std::uint64_t seed) {
    if (model_) return GenerateForRecords(*model_, records, seed);
    return SynthesizeForRecords(records, search_, seed);
  }

 private:
  const ExperimentOptions& opts_;
  std::optional<TrainedModel> model_;
  SearchConfig search_;
};

int ShuffledNumbersRecipe(const ExperimentOptions& opts, std::ostream& out) {
  DataOptions data = opts.data;
  GraphSource source(opts, data);
  DataOptions shuffled = data;
  data.text_mode = "numeric";
  shuffled.text_mode = "shuffled-numbers";
  const std::int64_t size = opts.test_size.value_or(500);
  const SplitConfig numeric_split = data.Split("test", size);
  const SplitConfig shuffled_split = shuffled.Split("test", size);

  const json config = {{"recipe", opts.recipe},
                       {"data", data.ToJson()},
                       {"size", size},
                       {"source", source.ToJson()}};
  Run run(opts, config);
  const auto numeric = EnsureSplit(run, numeric_split, "test_numeric.jsonl", data.workers, out);
  const auto shuf = EnsureSplit(run, shuffled_split, "test_shuffled.jsonl", data.workers, out);

  const std::uint64_t gen_seed = MixSeed(data.seed, kGenerateStream);
  const auto numeric_graphs = source.Generate(numeric, gen_seed);
  const auto shuffled_graphs = source.Generate(shuf, gen_seed);
  WriteFileAtomic(run.dir() / "predictions_numeric.jsonl",
                  PredictionsText(numeric, numeric_graphs));
  WriteFileAtomic(run.dir() / "predictions_shuffled.jsonl",
                  PredictionsText(shuf, shuffled_graphs));
  WriteReports(run.dir(),
               {{"numeric", EvaluateGraphs(numeric, numeric_graphs)},
                {"shuffled", EvaluateGraphs(shuf, shuffled_graphs)}},
               opts.buckets, out);
  run.Finish("eval", {{"generate", gen_seed}});
  return kExitOk;
}

int PropCountSweepRecipe(const ExperimentOptions& opts, std::ostream& out) {
  DataOptions data = opts.data;
  GraphSource source(opts, data);
  const std::int64_t size = opts.test_size.value_or(500);
  const SplitConfig split = data.Split("test", size);
  const json config = {{"recipe", opts.recipe},
                       {"data", data.ToJson()},
                       {"size", size},
                       {"source", source.ToJson()}};
  Run run(opts, config);
  const auto base = EnsureSplit(run, split, "test.jsonl", data.workers, out);

  const std::uint64_t gen_seed = MixSeed(data.seed, kGenerateStream);
  std::string csv = "k,records,prop_match,closeness\n";
  json reports = json::object();
  std::string tables;
  for (int k = 1; k <= kNumProperties; ++k) {
    const std::uint64_t k_seed = MixSeed(data.seed, kSweepStream + k);
    std::vector<DatasetRecord> records = base;
    for (DatasetRecord& r : records) {
      Rng rng(MixSeed(k_seed, r.id));
      r.spec = SelectKProperties(r.full_props, k, rng);
      r.text = Render(r.spec, RenderConfig{true, DescriptionMode::kNumeric, rng()});
    }
    const auto graphs = source.Generate(records, gen_seed);
    const Evaluation e = EvaluateGraphs(records, graphs);
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%d,%ld,%.17g,%.17g\n", k, e.report.count,
                  e.report.prop_match, e.report.closeness);
    csv += buf;
    reports[std::to_string(k)] = EvaluationToJson(e);
    tables += FormatReportTable(e.report, "k=" + std::to_string(k), false, opts.buckets);
    out << "k=" << k << "  PM " << e.report.prop_match << "  Closeness "
        << e.report.closeness << "\n";
  }
  WriteFileAtomic(run.dir() / "sweep.csv", csv);
  WriteFileAtomic(run.dir() / "report.json", reports.dump(2) + "\n");
  WriteFileAtomic(run.dir() / "report.txt", tables);
  run.Finish("eval", {{"generate", gen_seed}, {"sweep", MixSeed(data.seed, kSweepStream)}});
  return kExitOk;
}

}  // namespace

int RunExperiment(const ExperimentOptions& opts, std::ostream& out) {
  if (opts.recipe == "simple" || opts.recipe == "complex" || opts.recipe == "anyprop") {
    if (opts.checkpoint || opts.generator != "model") {
      throw UsageError("recipe " + opts.recipe + " trains its own model");
    }
    return TrainingRecipe(opts, out);
  }
  if (opts.recipe == "shuffled-numbers") return ShuffledNumbersRecipe(opts, out);
  if (opts.recipe == "prop-count-sweep") return PropCountSweepRecipe(opts, out);
  throw UsageError("unknown recipe '" + opts.recipe + "'");
}

}  // namespace lcgraph::cli
