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
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "lcgraph/errors.h"
#include "lcgraph/gan.h"
#include "oracles.h"

namespace ad = lcgraph::ad;
namespace fs = std::filesystem;
using ad::Matrix;
using ad::Tape;
using ad::Var;
using lcgraph::ConditionVector;
using lcgraph::Graph;
using lcgraph::PropertyKind;
using lcgraph::PropertySpec;
using lcgraph::Rng;

namespace {

Matrix RandomMatrix(int rows, int cols, Rng& rng, double lo = -1, double hi = 1) {
  Matrix m(rows, cols);
  std::uniform_real_distribution<double> u(lo, hi);
  for (double& v : m.data()) v = u(rng);
  return m;
}

// Symmetric soft adjacency rows (B x cap^2) with zero diagonal.
Matrix RandomSymmetric(int b, int cap, Rng& rng) {
  Matrix m(b, cap * cap);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int r = 0; r < b; ++r) {
    for (int i = 0; i < cap; ++i) {
      for (int j = i + 1; j < cap; ++j) {
        m(r, i * cap + j) = m(r, j * cap + i) = u(rng);
      }
    }
  }
  return m;
}

ConditionVector RandomCondition(Rng& rng) {
  PropertySpec s;
  s.set(PropertyKind::kNode, lcgraph::UniformInt(rng, 1, 12));
  s.set(PropertyKind::kEdge, lcgraph::UniformInt(rng, 0, 30));
  if (lcgraph::Uniform01(rng) < 0.5) s.set(PropertyKind::kCycle, lcgraph::UniformInt(rng, 0, 1));
  return lcgraph::EncodeCondition(s);
}

// Applies `perm` to a flattened cap x cap adjacency row and a mask row.
void PermuteRow(const Matrix& adj, const Matrix& mask, const std::vector<int>& perm,
                Matrix& out_adj, Matrix& out_mask) {
  const int cap = mask.cols();
  out_adj = Matrix(1, cap * cap);
  out_mask = Matrix(1, cap);
  for (int i = 0; i < cap; ++i) {
    out_mask(0, perm[i]) = mask(0, i);
    for (int j = 0; j < cap; ++j) out_adj(0, perm[i] * cap + perm[j]) = adj(0, i * cap + j);
  }
}

double ScoreOf(lcgraph::Critic& d, const Matrix& adj, const Matrix& mask, const Matrix& cond) {
  Tape t;
  return d.Score(t, t.Constant(adj), t.Constant(mask), t.Constant(cond)).value()(0, 0);
}

std::vector<lcgraph::DatasetRecord> SmallRecords(std::int64_t n, std::uint64_t seed) {
  lcgraph::SplitConfig cfg;
  cfg.size = n;
  cfg.seed = seed;
  cfg.capacity = 6;
  cfg.families = lcgraph::FamilyConfig::Restricted(3, 6);
  return lcgraph::GenerateRecords(cfg);
}

lcgraph::TrainConfig TinyConfig() {
  lcgraph::TrainConfig cfg;
  cfg.capacity = 6;
  cfg.batch_size = 16;
  cfg.n_critic = 2;
  cfg.epochs = 3;
  cfg.noise_dim = 8;
  cfg.gen_hidden = {24};
  cfg.disc_hidden = {12, 12};
  cfg.dev_limit = 32;
  cfg.seed = 5;
  return cfg;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path TempDir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("lcgraph_test_gan_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("hard Gumbel-sigmoid matches the logistic probability") {
  Rng rng(11);
  const int draws = 100000;
  for (double logit : {-2.0, 0.0, 2.0}) {
    Tape t;
    Var l = t.Constant(Matrix(1, draws, logit));
    const auto s = lcgraph::GumbelSigmoidHard(l, 1.0, rng);
    const auto hard = s.hard.value().data();
    for (double v : hard) REQUIRE((v == 0.0 || v == 1.0));
    const double mean = std::accumulate(hard.begin(), hard.end(), 0.0) / draws;
    const double want = 1.0 / (1.0 + std::exp(-logit));
    CAPTURE(logit);
    CHECK(std::abs(mean - want) <= 0.005);
  }
  Tape t;
  const auto sat = lcgraph::GumbelSigmoidHard(t.Constant(Matrix(1, 1000, 60.0)), 1.0, rng);
  CHECK(std::accumulate(sat.hard.value().data().begin(), sat.hard.value().data().end(), 0.0) ==
        1000.0);
}

TEST_CASE("hard Gumbel-sigmoid passes the soft gradient") {
  Rng rng(12);
  Tape t;
  Var l = t.Variable(RandomMatrix(3, 5, rng));
  const double tau = 0.7;
  const auto s = lcgraph::GumbelSigmoidHard(l, tau, rng);
  t.Backward(ad::Sum(s.hard));
  for (std::size_t k = 0; k < l.value().size(); ++k) {
    const double y = s.soft.value().data()[k];
    CHECK(l.grad().data()[k] == doctest::Approx(y * (1 - y) / tau).epsilon(1e-12));
    CHECK(s.hard.value().data()[k] == (y > 0.5 ? 1.0 : 0.0));
  }
}

TEST_CASE("generated graphs satisfy the invariants") {
  Rng rng(13);
  const int cap = 8;
  lcgraph::GeneratorNet gen(cap, 8, {32}, rng);
  int checked = 0;
  for (int round = 0; round < 40; ++round) {
    std::vector<ConditionVector> conds(250);
    std::vector<std::uint64_t> seeds(250);
    for (int i = 0; i < 250; ++i) {
      conds[i] = RandomCondition(rng);
      seeds[i] = rng();
    }
    for (const Graph& g : gen.Generate(conds, seeds, 1.0)) {
      CHECK(g.SatisfiesInvariants());
      CHECK(g.capacity() == cap);
      ++checked;
    }
  }
  CHECK(checked == 10000);
}

TEST_CASE("generator soft outputs are gated by the soft node mask") {
  Rng rng(14);
  const int cap = 5;
  lcgraph::GeneratorNet gen(cap, 4, {16}, rng);
  std::vector<ConditionVector> conds = {RandomCondition(rng), RandomCondition(rng)};
  Tape t;
  const auto out = gen.Forward(t, lcgraph::PackConditions(conds), gen.DrawNoise(2, rng), 1.0);
  for (int b = 0; b < 2; ++b) {
    for (int i = 0; i < cap; ++i) {
      CHECK(out.soft_adjacency.value()(b, i * cap + i) == 0.0);
      for (int j = 0; j < cap; ++j) {
        CHECK(out.soft_adjacency.value()(b, i * cap + j) ==
              doctest::Approx(out.soft_adjacency.value()(b, j * cap + i)));
        CHECK(out.soft_adjacency.value()(b, i * cap + j) <=
              out.soft_mask.value()(b, i) * out.soft_mask.value()(b, j) + 1e-15);
        if (out.mask.value()(b, i) == 0.0) CHECK(out.adjacency.value()(b, i * cap + j) == 0.0);
      }
    }
  }
}

TEST_CASE("generation is deterministic per seed") {
  Rng rng(15);
  lcgraph::GeneratorNet gen(6, 4, {16}, rng);
  std::vector<ConditionVector> conds(20);
  std::vector<std::uint64_t> seeds(20);
  for (int i = 0; i < 20; ++i) {
    conds[i] = RandomCondition(rng);
    seeds[i] = 1000 + i;
  }
  const auto a = gen.Generate(conds, seeds, 1.0);
  const auto b = gen.Generate(conds, seeds, 1.0);
  CHECK(a == b);
  // Row i only depends on seeds[i].
  const auto single = gen.Generate(std::span(conds).subspan(7, 1), std::span(seeds).subspan(7, 1), 1.0);
  CHECK(single[0] == a[7]);
}

TEST_CASE("discriminator is invariant to node relabeling") {
  Rng rng(16);
  const int cap = 7;
  lcgraph::DiscriminatorNet d(cap, {32, 32}, rng);
  d.set_condition_scaling(lcgraph::ConditionScaling{});
  double worst = 0;
  for (int t = 0; t < 10; ++t) {
    const Matrix cond = lcgraph::PackConditions(std::vector<ConditionVector>{RandomCondition(rng)});
    Matrix adj, mask;
    if (t % 2 == 0) {
      Graph g(cap);
      for (int i = 0; i < cap; ++i) {
        if (lcgraph::Uniform01(rng) < 0.8) g.Activate(i);
      }
      for (int i = 0; i < cap; ++i) {
        for (int j = i + 1; j < cap; ++j) {
          if (g.active(i) && g.active(j) && lcgraph::Uniform01(rng) < 0.4) g.AddEdge(i, j);
        }
      }
      const Graph* ptr = &g;
      const auto batch = lcgraph::PackGraphs(std::span(&ptr, 1), cap);
      adj = batch.adjacency;
      mask = batch.mask;
    } else {
      adj = RandomSymmetric(1, cap, rng);
      mask = RandomMatrix(1, cap, rng, 0, 1);
    }
    const double base = ScoreOf(d, adj, mask, cond);
    std::vector<int> perm(cap);
    std::iota(perm.begin(), perm.end(), 0);
    for (int k = 0; k < 100; ++k) {
      std::shuffle(perm.begin(), perm.end(), rng);
      Matrix pa, pm;
      PermuteRow(adj, mask, perm, pa, pm);
      worst = std::max(worst, std::abs(ScoreOf(d, pa, pm, cond) - base));
    }
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("row encoder receives gradients") {
  Rng rng(17);
  lcgraph::DiscriminatorNet d(5, {8, 8}, rng);
  Tape t;
  Var s = d.Score(t, t.Constant(RandomSymmetric(4, 5, rng)), t.Constant(RandomMatrix(4, 5, rng, 0, 1)),
                  t.Constant(lcgraph::PackConditions(std::vector<ConditionVector>(4, RandomCondition(rng)))));
  for (auto* p : d.Parameters()) p->ZeroGrad();
  t.Backward(ad::Sum(s));
  for (auto* p : d.row_encoder().Parameters()) {
    double norm = 0;
    for (double g : p->grad.data()) norm += g * g;
    CHECK(norm > 0);
  }
}

TEST_CASE("linear critic penalty is (|w| - 1)^2") {
  Rng rng(18);
  const int cap = 4;
  for (double target : {1.0, 3.0}) {
    Matrix wa = RandomMatrix(cap * cap, 1, rng), wm = RandomMatrix(cap, 1, rng);
    double norm = 0;
    for (double v : wa.data()) norm += v * v;
    for (double v : wm.data()) norm += v * v;
    norm = std::sqrt(norm);
    for (double& v : wa.data()) v *= target / norm;
    for (double& v : wm.data()) v *= target / norm;
    lcgraph::LinearCritic critic(wa, wm);
    Tape t;
    const Var cond = t.Constant(Matrix(3, lcgraph::kConditionDim));
    Var gp = lcgraph::GradientPenalty(t, critic, RandomSymmetric(3, cap, rng),
                                      RandomMatrix(3, cap, rng, 0, 1), RandomSymmetric(3, cap, rng),
                                      RandomMatrix(3, cap, rng, 0, 1), cond, rng);
    CHECK(std::abs(gp.value()(0, 0) - (target - 1) * (target - 1)) <= 1e-12);
  }
  Tape t;
  lcgraph::LinearCritic critic(Matrix(16, 1), Matrix(4, 1));
  CHECK_THROWS_AS(lcgraph::GradientPenalty(t, critic, Matrix(2, 16), Matrix(2, 4), Matrix(3, 16),
                                           Matrix(3, 4), t.Constant(Matrix(2, 14)), rng),
                  lcgraph::ShapeError);
}

TEST_CASE("discriminator penalty matches finite differences") {
  Rng rng(19);
  const int cap = 4, b = 3;
  lcgraph::DiscriminatorNet d(cap, {6, 5}, rng);
  std::vector<ConditionVector> cv;
  for (int i = 0; i < b; ++i) cv.push_back(RandomCondition(rng));
  d.set_condition_scaling(lcgraph::ConditionScaling::Fit(cv));
  const Matrix cond = lcgraph::PackConditions(cv);
  const Matrix adj = RandomSymmetric(b, cap, rng);
  const Matrix mask = RandomMatrix(b, cap, rng, 0, 1);

  // Identical real and fake batches pin the interpolate to `adj`/`mask`.
  auto penalty = [&]() {
    Tape t;
    Rng r(0);
    return lcgraph::GradientPenalty(t, d, adj, mask, adj, mask, t.Constant(cond), r).value()(0, 0);
  };

  // Input-gradient norms by central differences of the score.
  const double h = 1e-5;
  double fd_penalty = 0;
  for (int row = 0; row < b; ++row) {
    const Matrix a_row = Matrix::RowVector(std::span(adj.row(row), cap * cap));
    const Matrix m_row = Matrix::RowVector(std::span(mask.row(row), cap));
    const Matrix c_row = Matrix::RowVector(std::span(cond.row(row), lcgraph::kConditionDim));
    double sq = 0;
    for (int k = 0; k < cap * cap + cap; ++k) {
      Matrix ap = a_row, am = a_row, mp = m_row, mm = m_row;
      if (k < cap * cap) {
        ap(0, k) += h;
        am(0, k) -= h;
      } else {
        mp(0, k - cap * cap) += h;
        mm(0, k - cap * cap) -= h;
      }
      const double g = (ScoreOf(d, ap, mp, c_row) - ScoreOf(d, am, mm, c_row)) / (2 * h);
      sq += g * g;
    }
    fd_penalty += std::pow(std::sqrt(sq) - 1, 2) / b;
  }
  const double gp = penalty();
  CHECK(std::abs(gp - fd_penalty) <= 1e-4 * std::abs(fd_penalty));

  // Parameter gradient of the penalty against differences of the penalty.
  {
    for (auto* p : d.Parameters()) p->ZeroGrad();
    Tape t;
    Rng r(0);
    t.Backward(lcgraph::GradientPenalty(t, d, adj, mask, adj, mask, t.Constant(cond), r));
  }
  double worst = 0;
  for (auto* p : d.Parameters()) {
    const Matrix grad = p->grad;
    for (std::size_t k = 0; k < p->value.size(); ++k) {
      const double keep = p->value.data()[k];
      p->value.data()[k] = keep + h;
      const double up = penalty();
      p->value.data()[k] = keep - h;
      const double down = penalty();
      p->value.data()[k] = keep;
      const double fd = (up - down) / (2 * h);
      worst = std::max(worst, std::abs(fd - grad.data()[k]) / (std::abs(fd) + 1e-6));
    }
  }
  CHECK(worst <= 1e-4);
}

TEST_CASE("count reward examples") {
  const int cap = 4;
  Tape t;
  Matrix mask(1, cap, 1.0);
  Matrix adj(1, cap * cap);
  adj(0, 0 * cap + 1) = adj(0, 1 * cap + 0) = 1;
  adj(0, 2 * cap + 3) = adj(0, 3 * cap + 2) = 1;
  PropertySpec exact;
  exact.set(PropertyKind::kNode, 4);
  exact.set(PropertyKind::kEdge, 2);
  const lcgraph::CountReward reward;
  CHECK(reward.Loss(t, t.Constant(adj), t.Constant(mask), std::vector{exact}).value()(0, 0) == 0.0);

  PropertySpec off;
  off.set(PropertyKind::kNode, 3);
  CHECK(reward.Loss(t, t.Constant(adj), t.Constant(mask), std::vector{off}).value()(0, 0) ==
        doctest::Approx(4e-4).epsilon(1e-12));
  CHECK_THROWS_AS(reward.Loss(t, t.Constant(adj), t.Constant(mask), std::vector{off, off}),
                  lcgraph::ShapeError);
}

TEST_CASE("count reward gradient matches finite differences") {
  Rng rng(20);
  const int cap = 5, b = 3;
  const Matrix node_logits = RandomMatrix(b, cap, rng, -2, 2);
  const Matrix edge_logits = RandomMatrix(b, cap * cap, rng, -2, 2);
  std::vector<PropertySpec> specs(b);
  specs[0].set(PropertyKind::kNode, 2);
  specs[1].set(PropertyKind::kEdge, 6);
  specs[2].set(PropertyKind::kNode, 5);
  specs[2].set(PropertyKind::kEdge, 1);
  auto loss = [&](Tape& t, Var nl, Var el) {
    Var m = ad::Sigmoid(nl);
    return lcgraph::CountReward().Loss(t, ad::Sigmoid(el), m, specs);
  };
  Tape t;
  Var nl = t.Variable(node_logits), el = t.Variable(edge_logits);
  t.Backward(loss(t, nl, el));
  const double h = 1e-5;
  for (std::size_t k = 0; k < node_logits.size(); ++k) {
    Matrix up = node_logits, down = node_logits;
    up.data()[k] += h;
    down.data()[k] -= h;
    Tape a, c;
    const double fd = (loss(a, a.Constant(up), a.Constant(edge_logits)).value()(0, 0) -
                       loss(c, c.Constant(down), c.Constant(edge_logits)).value()(0, 0)) /
                      (2 * h);
    CHECK(std::abs(fd - nl.grad().data()[k]) <= 1e-6 * (std::abs(fd) + 1e-8));
  }
}

TEST_CASE("reward-only optimization drives the reward loss down") {
  Rng rng(21);
  const auto records = SmallRecords(32, 3);
  lcgraph::GeneratorNet gen(6, 8, {32}, rng);
  std::vector<ConditionVector> cv;
  std::vector<PropertySpec> specs;
  for (const auto& r : records) {
    cv.push_back(lcgraph::EncodeDescription(r.text));
    specs.push_back(r.spec);
  }
  gen.set_condition_scaling(lcgraph::ConditionScaling::Fit(cv));
  const Matrix conds = lcgraph::PackConditions(cv);
  ad::Adam opt(gen.Parameters(), {1e-3, 0.5, 0.9, 1e-8});
  // One fixed batch: records and noise are both held constant.
  const lcgraph::GeneratorNoise noise = gen.DrawNoise(32, rng);
  double first = 0, last = 0;
  for (int step = 0; step < 500; ++step) {
    Tape t;
    opt.ZeroGrad();
    const auto out = gen.Forward(t, conds, noise, 1.0);
    Var loss = lcgraph::CountReward().Loss(t, out.soft_adjacency, out.soft_mask, specs);
    t.Backward(loss);
    opt.Step();
    if (step < 10) first += loss.value()(0, 0) / 10;
    if (step >= 490) last += loss.value()(0, 0) / 10;
  }
  MESSAGE("reward loss " << first << " -> " << last);
  CHECK(last * 10 <= first);
}

TEST_CASE("condition scaling standardizes and round-trips") {
  Rng rng(22);
  std::vector<ConditionVector> cv;
  for (int i = 0; i < 200; ++i) cv.push_back(RandomCondition(rng));
  const auto s = lcgraph::ConditionScaling::Fit(cv);
  Tape t;
  const Matrix out = s.Apply(t.Constant(lcgraph::PackConditions(cv))).value();
  for (int c = 0; c < lcgraph::kConditionDim; ++c) {
    double mean = 0, sq = 0;
    for (int r = 0; r < out.rows(); ++r) mean += out(r, c) / out.rows();
    for (int r = 0; r < out.rows(); ++r) sq += std::pow(out(r, c) - mean, 2) / out.rows();
    CHECK(std::abs(mean) <= 1e-12);
    CHECK((sq == doctest::Approx(1.0) || sq == 0.0));
  }
  ad::Checkpoint ckpt;
  s.Save("g", ckpt);
  CHECK(lcgraph::ConditionScaling::Load(ckpt, "g") == s);
  CHECK(lcgraph::ConditionScaling::Load(ckpt, "other") == lcgraph::ConditionScaling{});
}

TEST_CASE("train config text round trip and validation") {
  auto cfg = TinyConfig();
  cfg.lambda_rew = 0;
  const auto back = lcgraph::ParseTrainConfig(lcgraph::TrainConfigToText(cfg));
  CHECK(lcgraph::TrainConfigToJson(back) == lcgraph::TrainConfigToJson(cfg));
  CHECK(lcgraph::TrainConfigToJson(lcgraph::TrainConfigFromJson(lcgraph::TrainConfigToJson(cfg))) ==
        lcgraph::TrainConfigToJson(cfg));
  CHECK_THROWS_AS(lcgraph::ParseTrainConfig("lr = -1\n"), lcgraph::DataError);
  CHECK_THROWS_AS(lcgraph::ParseTrainConfig("no_such_key = 3\n"), lcgraph::DataError);
}

TEST_CASE("fixed-seed training logs are bitwise reproducible") {
  const auto train = SmallRecords(64, 1), dev = SmallRecords(32, 2);
  const fs::path dir = TempDir("determinism");
  auto cfg = TinyConfig();
  lcgraph::TrainOptions a, b;
  a.log_path = dir / "a.jsonl";
  b.log_path = dir / "b.jsonl";
  a.checkpoint_dir = dir / "ca";
  b.checkpoint_dir = dir / "cb";
  const auto ra = lcgraph::Train(train, dev, cfg, a);
  lcgraph::Train(train, dev, cfg, b);
  CHECK(ra.log.size() == 3);
  CHECK(Slurp(dir / "a.jsonl") == Slurp(dir / "b.jsonl"));
  CHECK(Slurp(dir / "ca" / "final.ckpt") == Slurp(dir / "cb" / "final.ckpt"));

  cfg.seed = 6;
  lcgraph::TrainOptions c;
  c.log_path = dir / "c.jsonl";
  lcgraph::Train(train, dev, cfg, c);
  CHECK(Slurp(dir / "a.jsonl") != Slurp(dir / "c.jsonl"));
  fs::remove_all(dir);
}

TEST_CASE("reward weight changes the training trajectory") {
  const auto train = SmallRecords(64, 1), dev = SmallRecords(32, 2);
  auto cfg = TinyConfig();
  cfg.epochs = 2;
  const auto with = lcgraph::Train(train, dev, cfg);
  cfg.lambda_rew = 0;
  const auto without = lcgraph::Train(train, dev, cfg);
  REQUIRE(with.log.size() == without.log.size());
  CHECK(with.log.back().reward_loss > 0);
  CHECK(without.log.back().reward_loss > 0);
  CHECK(with.log.back().g_loss != without.log.back().g_loss);
}

TEST_CASE("resuming reproduces an uninterrupted run") {
  const auto train = SmallRecords(64, 1), dev = SmallRecords(32, 2);
  const fs::path dir = TempDir("resume");
  auto cfg = TinyConfig();
  cfg.checkpoint_every = 1;
  lcgraph::TrainOptions full;
  full.log_path = dir / "full.jsonl";
  full.checkpoint_dir = dir / "full";
  lcgraph::Train(train, dev, cfg, full);

  // The resumed log already holds epochs past the checkpoint; they are dropped.
  fs::copy_file(dir / "full.jsonl", dir / "resumed.jsonl");
  lcgraph::TrainOptions resumed;
  resumed.log_path = dir / "resumed.jsonl";
  resumed.checkpoint_dir = dir / "resumed";
  resumed.resume_from = dir / "full" / "epoch_1.ckpt";
  lcgraph::Train(train, dev, cfg, resumed);
  CHECK(Slurp(dir / "full.jsonl") == Slurp(dir / "resumed.jsonl"));
  CHECK(Slurp(dir / "full" / "final.ckpt") == Slurp(dir / "resumed" / "final.ckpt"));

  auto model = lcgraph::LoadTrainedModel(dir / "full" / "final.ckpt");
  CHECK(model.epoch == 3);
  CHECK(model.generator.capacity() == 6);
  std::vector<ConditionVector> cv(5, lcgraph::EncodeDescription(train[0].text));
  CHECK(lcgraph::GenerateForConditions(model, cv, 9) == lcgraph::GenerateForConditions(model, cv, 9));
  fs::remove_all(dir);
}

TEST_CASE("training rejects records that exceed the capacity") {
  lcgraph::SplitConfig big;
  big.size = 4;
  big.families = lcgraph::FamilyConfig::Restricted(9, 10);
  big.capacity = 10;
  const auto records = lcgraph::GenerateRecords(big);
  auto cfg = TinyConfig();
  CHECK_THROWS_AS(lcgraph::Train(records, records, cfg), lcgraph::DataError);
}
