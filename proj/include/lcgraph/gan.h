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

#ifndef LCGRAPH_GAN_H_
#define LCGRAPH_GAN_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "lcgraph/autodiff.h"
#include "lcgraph/dataset.h"
#include "lcgraph/graph.h"
#include "lcgraph/metrics.h"
#include "lcgraph/nl_desc.h"
#include "lcgraph/nn.h"
#include "lcgraph/random.h"

// Conditional WGAN-GP over fixed-capacity graphs.
//
// Batches are dense: adjacency as B x (cap*cap) row-major flattened
// matrices, node masks as B x cap, conditions as B x kConditionDim.
namespace lcgraph {

struct TrainConfig {
  double lambda_gp = 5.0;
  double lambda_rew = 0.5;
  double lr = 2e-4;
  double beta1 = 0.5;
  double beta2 = 0.9;
  int epochs = 100;
  int batch_size = 128;
  int n_critic = 5;
  double tau = 1.0;
  int capacity = kDefaultCapacity;
  std::uint64_t seed = 0;
  int noise_dim = 32;
  std::vector<int> gen_hidden = {256, 256};
  std::vector<int> disc_hidden = {64, 64};
  // Write a checkpoint every N epochs (0: only at the end).
  int checkpoint_every = 0;
  // Dev records scored after each epoch (0: all).
  int dev_limit = 500;

  // Throws DataError on non-positive sizes, rates or an empty hidden list.
  void Validate() const;
};

// Flat `key = value` lines; '#' starts a comment. Lists are comma
// separated. Unknown keys throw DataError.
TrainConfig ParseTrainConfig(std::string_view text,
                             const TrainConfig& base = TrainConfig());
std::string TrainConfigToText(const TrainConfig& cfg);
nlohmann::json TrainConfigToJson(const TrainConfig& cfg);
TrainConfig TrainConfigFromJson(const nlohmann::json& j);

// ---- Gumbel-sigmoid ----

// Standard Gumbel draw from 53 random bits (never 0 or 1 inside the log).
double SampleGumbel(Rng& rng);

struct GumbelSample {
  ad::Var hard;  // 0/1 forward, gradient of `soft` backward
  ad::Var soft;
};

// soft = sigmoid((logits + noise) / tau) where `noise` holds g1 - g2 per
// entry; hard = 1[soft > 0.5].
GumbelSample GumbelSigmoidHard(ad::Var logits, const ad::Matrix& noise,
                               double tau);
// Convenience overload drawing the noise from `rng` in row-major order.
GumbelSample GumbelSigmoidHard(ad::Var logits, double tau, Rng& rng);

// ---- Conditions ----

// Per-slot affine map (c - shift) * scale applied to condition vectors as
// they enter a network. Identity by default.
struct ConditionScaling {
  ConditionVector shift{};
  ConditionVector scale = Ones();

  // Zero mean and unit variance per slot over `conditions`; constant slots
  // are only centered.
  static ConditionScaling Fit(std::span<const ConditionVector> conditions);
  ad::Var Apply(ad::Var conditions) const;
  void Save(const std::string& prefix, ad::Checkpoint& ckpt) const;
  // Identity when the checkpoint has no scaling under `prefix`.
  static ConditionScaling Load(const ad::Checkpoint& ckpt, const std::string& prefix);
  friend bool operator==(const ConditionScaling&, const ConditionScaling&) = default;

 private:
  static ConditionVector Ones() {
    ConditionVector v;
    v.fill(1.0);
    return v;
  }
};

// ---- Generator ----

// All randomness of one generator pass.
struct GeneratorNoise {
  ad::Matrix z;         // B x noise_dim, standard normal
  ad::Matrix adjacency; // B x cap(cap-1)/2, g1 - g2
  ad::Matrix nodes;     // B x cap, g1 - g2
};

struct GeneratorOutput {
  ad::Var adjacency;       // B x cap^2, hard, symmetric, masked
  ad::Var mask;            // B x cap, hard
  ad::Var soft_adjacency;  // B x cap^2, soft edges gated by soft node outer product
  ad::Var soft_mask;       // B x cap
};

class GeneratorNet {
 public:
  GeneratorNet() = default;
  GeneratorNet(int capacity, int noise_dim, const std::vector<int>& hidden,
               Rng& rng);

  int capacity() const { return capacity_; }
  int noise_dim() const { return noise_dim_; }
  int num_pairs() const { return capacity_ * (capacity_ - 1) / 2; }

  // Noise for `batch` rows drawn from one stream, row by row: z, then the
  // adjacency Gumbels, then the node Gumbels.
  GeneratorNoise DrawNoise(int batch, Rng& rng) const;
  // Row i drawn from its own stream Rng(seeds[i]) in the same order.
  GeneratorNoise DrawNoise(std::span<const std::uint64_t> seeds) const;

  GeneratorOutput Forward(ad::Tape& tape, const ad::Matrix& conditions,
                          const GeneratorNoise& noise, double tau);

  // Hard graphs for the given conditions; row i uses Rng(seeds[i]).
  std::vector<Graph> Generate(std::span<const ConditionVector> conditions,
                              std::span<const std::uint64_t> seeds, double tau);

  std::vector<ad::Parameter*> Parameters();
  void Save(const std::string& prefix, ad::Checkpoint& ckpt);
  static GeneratorNet Load(const ad::Checkpoint& ckpt, const std::string& prefix);

  const ConditionScaling& condition_scaling() const { return scaling_; }
  void set_condition_scaling(const ConditionScaling& s) { scaling_ = s; }

 private:
  int capacity_ = 0;
  int noise_dim_ = 0;
  ConditionScaling scaling_;
  ad::Mlp trunk_;
  ad::Mlp adjacency_head_;
  ad::Mlp node_head_;
  ad::IndexMap mirror_;  // upper triangle -> full cap x cap, -1 on the diagonal
};

// ---- Critic ----

struct CriticEval {
  ad::Var score;          // B x 1
  ad::Var grad_adjacency; // B x cap^2, d score / d adjacency (differentiable)
  ad::Var grad_mask;      // B x cap
};

class Critic {
 public:
  virtual ~Critic() = default;
  virtual ad::Var Score(ad::Tape& tape, ad::Var adjacency, ad::Var mask,
                        ad::Var conditions) = 0;
  // Score plus its input gradient, expressed as tape operations so that a
  // penalty on the gradient can be differentiated w.r.t. the parameters.
  virtual CriticEval ScoreWithInputGradient(ad::Tape& tape, ad::Var adjacency,
                                            ad::Var mask, ad::Var conditions) = 0;
  virtual std::vector<ad::Parameter*> Parameters() = 0;
};

// Shared row encoder over each adjacency row (sorted descending, so that
// the score does not depend on node order) with the node flag and the
// condition, mean-pooled over rows, then a head over (pool, condition).
class DiscriminatorNet : public Critic {
 public:
  DiscriminatorNet() = default;
  DiscriminatorNet(int capacity, const std::vector<int>& hidden, Rng& rng);

  int capacity() const { return capacity_; }

  ad::Var Score(ad::Tape& tape, ad::Var adjacency, ad::Var mask,
                ad::Var conditions) override;
  CriticEval ScoreWithInputGradient(ad::Tape& tape, ad::Var adjacency,
                                    ad::Var mask, ad::Var conditions) override;
  std::vector<ad::Parameter*> Parameters() override;

  ad::Mlp& row_encoder() { return row_encoder_; }
  void Save(const std::string& prefix, ad::Checkpoint& ckpt);
  static DiscriminatorNet Load(const ad::Checkpoint& ckpt, const std::string& prefix);

  const ConditionScaling& condition_scaling() const { return scaling_; }
  void set_condition_scaling(const ConditionScaling& s) { scaling_ = s; }

 private:
  struct Trace {
    ad::IndexMap order;
    ad::MlpTrace rows;
    ad::MlpTrace head;
    ad::Var score;
  };
  Trace Run(ad::Tape& tape, ad::Var adjacency, ad::Var mask, ad::Var conditions);

  int capacity_ = 0;
  ConditionScaling scaling_;
  ad::Mlp row_encoder_;
  ad::Mlp head_;
};

// score = adjacency * w_adj + mask * w_mask; for tests and as a reference.
class LinearCritic : public Critic {
 public:
  LinearCritic(ad::Matrix w_adjacency, ad::Matrix w_mask);  // column vectors

  ad::Var Score(ad::Tape& tape, ad::Var adjacency, ad::Var mask,
                ad::Var conditions) override;
  CriticEval ScoreWithInputGradient(ad::Tape& tape, ad::Var adjacency,
                                    ad::Var mask, ad::Var conditions) override;
  std::vector<ad::Parameter*> Parameters() override;

 private:
  ad::Parameter w_adjacency_;
  ad::Parameter w_mask_;
};

// mean_b (||grad D(x_hat_b)|| - 1)^2 with x_hat = eps*real + (1-eps)*fake
// and eps ~ U(0,1) per row, over both adjacency and mask inputs.
ad::Var GradientPenalty(ad::Tape& tape, Critic& critic,
                        const ad::Matrix& real_adjacency,
                        const ad::Matrix& real_mask,
                        const ad::Matrix& fake_adjacency,
                        const ad::Matrix& fake_mask, ad::Var conditions,
                        Rng& rng);

// ---- Reward ----

class RewardModel {
 public:
  virtual ~RewardModel() = default;
  // A loss (negated reward) over the soft generator outputs.
  virtual ad::Var Loss(ad::Tape& tape, ad::Var soft_adjacency,
                       ad::Var soft_mask,
                       std::span<const PropertySpec> specs) const = 0;
};

// Scaled squared error of the soft node and edge counts against the spec's
// Node and Edge values, averaged over the terms each spec has, then over
// the batch. Specs with neither term contribute 0.
class CountReward : public RewardModel {
 public:
  ad::Var Loss(ad::Tape& tape, ad::Var soft_adjacency, ad::Var soft_mask,
               std::span<const PropertySpec> specs) const override;
};

// ---- Batches ----

struct GraphBatch {
  ad::Matrix adjacency;
  ad::Matrix mask;
};

// Throws DataError if a graph's capacity differs from `capacity`.
GraphBatch PackGraphs(std::span<const Graph* const> graphs, int capacity);
ad::Matrix PackConditions(std::span<const ConditionVector> conditions);
// Inverse of the hard generator outputs.
std::vector<Graph> UnpackGraphs(const ad::Matrix& adjacency,
                                const ad::Matrix& mask, int capacity);

// ---- Training ----

struct EpochLog {
  int epoch = 0;
  double d_loss = 0;
  double g_loss = 0;
  double gp = 0;
  double reward_loss = 0;
  double dev_prop_match = 0;
  double dev_closeness = 0;
};

nlohmann::json EpochLogToJson(const EpochLog& log);

// Condition vector for a description; picks the unlabeled-number encoder
// for shuffled-number text.
ConditionVector EncodeDescription(const Description& d);

struct TrainOptions {
  // JSONL log; appended to when resuming.
  std::optional<std::filesystem::path> log_path;
  // Checkpoints go to <dir>/epoch_<N>.ckpt and <dir>/final.ckpt; on a
  // numeric failure the last good state goes to <dir>/last_good.ckpt.
  std::optional<std::filesystem::path> checkpoint_dir;
  std::optional<std::filesystem::path> resume_from;
  // Called after each epoch.
  std::function<void(const EpochLog&)> on_epoch;
};

struct TrainResult {
  std::vector<EpochLog> log;
  ad::Checkpoint final_checkpoint;
};

// Throws NumericError on a non-finite loss or gradient (after writing the
// last good checkpoint when a directory is set), DataError on record /
// capacity mismatch.
TrainResult Train(std::span<const DatasetRecord> train,
                  std::span<const DatasetRecord> dev, const TrainConfig& cfg,
                  const TrainOptions& options = TrainOptions());

// A trained generator ready for sampling.
struct TrainedModel {
  TrainConfig config;
  GeneratorNet generator;
  int epoch = 0;
};

TrainedModel LoadTrainedModel(const std::filesystem::path& path);
// The untrained generator a run with `cfg` on `train` starts from.
TrainedModel InitialModel(const TrainConfig& cfg,
                          std::span<const DatasetRecord> train = {});

// One generated graph per condition; record i is sampled from
// Rng(MixSeed(seed, i)), so results do not depend on batching.
std::vector<Graph> GenerateForConditions(TrainedModel& model,
                                         std::span<const ConditionVector> conditions,
                                         std::uint64_t seed);

}  // namespace lcgraph

#endif  // LCGRAPH_GAN_H_
