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

#include "lcgraph/gan.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <utility>

#include "lcgraph/errors.h"

namespace lcgraph {

using ad::Matrix;
using ad::Tape;
using ad::Var;

namespace {

constexpr const char* kCheckpointFormat = "lcgraph-gan/1";

// Stream ids for MixSeed(cfg.seed, ...).
constexpr std::uint64_t kInitStream = 1;
constexpr std::uint64_t kTrainStream = 2;
constexpr std::uint64_t kDevStream = 3;
constexpr std::uint64_t kRenderStream = 1000;

void CheckFinite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw NumericError(std::string("non-finite ") + what);
  }
}

std::string Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double ParseDouble(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw DataError("config key " + key + ": not a number: " + v);
  }
}

long long ParseInt(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long d = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw DataError("config key " + key + ": not an integer: " + v);
  }
}

std::vector<int> ParseIntList(const std::string& key, const std::string& v) {
  std::vector<int> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(static_cast<int>(ParseInt(key, Trim(item))));
  }
  return out;
}

std::string JoinInts(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) s += ",";
    s += std::to_string(v[i]);
  }
  return s;
}

std::string FormatDouble(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string SaveRng(const Rng& rng) {
  std::ostringstream os;
  os << rng;
  return os.str();
}

void LoadRng(Rng& rng, const std::string& state) {
  std::istringstream is(state);
  is >> rng;
  if (!is) throw DataError("bad rng state in checkpoint");
}

// 53 random bits mapped to the open interval (0, 1).
double OpenUniform(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

// Per-row argsort, descending, ties by column index.
ad::IndexMap RowOrder(const Matrix& m) {
  ad::IndexMap map;
  map.rows = m.rows();
  map.cols = m.cols();
  map.index.resize(m.size());
  std::vector<int> idx(m.cols());
  for (int r = 0; r < m.rows(); ++r) {
    std::iota(idx.begin(), idx.end(), 0);
    const double* row = m.row(r);
    std::stable_sort(idx.begin(), idx.end(),
                     [row](int a, int b) { return row[a] > row[b]; });
    std::copy(idx.begin(), idx.end(),
              map.index.begin() + static_cast<std::ptrdiff_t>(r) * m.cols());
  }
  return map;
}

std::vector<int> AllButLast(const std::vector<int>& v) {
  return std::vector<int>(v.begin(), v.end() - 1);
}

}  // namespace

// ---- TrainConfig ----

void TrainConfig::Validate() const {
  auto positive = [](bool ok, const char* what) {
    if (!ok) throw DataError(std::string("train config: ") + what + " must be positive");
  };
  positive(lambda_gp >= 0, "lambda_gp");
  positive(lambda_rew >= 0, "lambda_rew");
  positive(lr > 0, "lr");
  positive(beta1 >= 0 && beta1 < 1 && beta2 >= 0 && beta2 < 1, "beta (in [0,1))");
  positive(epochs > 0, "epochs");
  positive(batch_size > 0, "batch_size");
  positive(n_critic > 0, "n_critic");
  positive(tau > 0, "tau");
  positive(capacity >= 2, "capacity (>= 2)");
  positive(noise_dim > 0, "noise_dim");
  positive(!gen_hidden.empty() && !disc_hidden.empty(), "hidden layer count");
  for (int h : gen_hidden) positive(h > 0, "gen_hidden");
  for (int h : disc_hidden) positive(h > 0, "disc_hidden");
  positive(checkpoint_every >= 0, "checkpoint_every (or 0)");
  positive(dev_limit >= 0, "dev_limit (or 0)");
}

TrainConfig ParseTrainConfig(std::string_view text, const TrainConfig& base) {
  TrainConfig cfg = base;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const std::string t = Trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw DataError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = Trim(std::string_view(t).substr(0, eq));
    const std::string val = Trim(std::string_view(t).substr(eq + 1));
    if (key == "lambda_gp") cfg.lambda_gp = ParseDouble(key, val);
    else if (key == "lambda_rew") cfg.lambda_rew = ParseDouble(key, val);
    else if (key == "lr") cfg.lr = ParseDouble(key, val);
    else if (key == "beta1") cfg.beta1 = ParseDouble(key, val);
    else if (key == "beta2") cfg.beta2 = ParseDouble(key, val);
    else if (key == "epochs") cfg.epochs = static_cast<int>(ParseInt(key, val));
    else if (key == "batch_size") cfg.batch_size = static_cast<int>(ParseInt(key, val));
    else if (key == "n_critic") cfg.n_critic = static_cast<int>(ParseInt(key, val));
    else if (key == "tau") cfg.tau = ParseDouble(key, val);
    else if (key == "capacity") cfg.capacity = static_cast<int>(ParseInt(key, val));
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(ParseInt(key, val));
    else if (key == "noise_dim") cfg.noise_dim = static_cast<int>(ParseInt(key, val));
    else if (key == "gen_hidden") cfg.gen_hidden = ParseIntList(key, val);
    else if (key == "disc_hidden") cfg.disc_hidden = ParseIntList(key, val);
    else if (key == "checkpoint_every") cfg.checkpoint_every = static_cast<int>(ParseInt(key, val));
    else if (key == "dev_limit") cfg.dev_limit = static_cast<int>(ParseInt(key, val));
    else throw DataError("config line " + std::to_string(line_no) + ": unknown key " + key);
  }
  cfg.Validate();
  return cfg;
}

std::string TrainConfigToText(const TrainConfig& cfg) {
  std::ostringstream os;
  os << "lambda_gp = " << FormatDouble(cfg.lambda_gp) << "\n"
     << "lambda_rew = " << FormatDouble(cfg.lambda_rew) << "\n"
     << "lr = " << FormatDouble(cfg.lr) << "\n"
     << "beta1 = " << FormatDouble(cfg.beta1) << "\n"
     << "beta2 = " << FormatDouble(cfg.beta2) << "\n"
     << "epochs = " << cfg.epochs << "\n"
     << "batch_size = " << cfg.batch_size << "\n"
     << "n_critic = " << cfg.n_critic << "\n"
     << "tau = " << FormatDouble(cfg.tau) << "\n"
     << "capacity = " << cfg.capacity << "\n"
     << "seed = " << cfg.seed << "\n"
     << "noise_dim = " << cfg.noise_dim << "\n"
     << "gen_hidden = " << JoinInts(cfg.gen_hidden) << "\n"
     << "disc_hidden = " << JoinInts(cfg.disc_hidden) << "\n"
     << "checkpoint_every = " << cfg.checkpoint_every << "\n"
     << "dev_limit = " << cfg.dev_limit << "\n";
  return os.str();
}

nlohmann::json TrainConfigToJson(const TrainConfig& cfg) {
  return {{"lambda_gp", cfg.lambda_gp},     {"lambda_rew", cfg.lambda_rew},
          {"lr", cfg.lr},                   {"beta1", cfg.beta1},
          {"beta2", cfg.beta2},             {"epochs", cfg.epochs},
          {"batch_size", cfg.batch_size},   {"n_critic", cfg.n_critic},
          {"tau", cfg.tau},                 {"capacity", cfg.capacity},
          {"seed", cfg.seed},               {"noise_dim", cfg.noise_dim},
          {"gen_hidden", cfg.gen_hidden},   {"disc_hidden", cfg.disc_hidden},
          {"checkpoint_every", cfg.checkpoint_every},
          {"dev_limit", cfg.dev_limit}};
}

TrainConfig TrainConfigFromJson(const nlohmann::json& j) {
  TrainConfig cfg;
  try {
    cfg.lambda_gp = j.at("lambda_gp").get<double>();
    cfg.lambda_rew = j.at("lambda_rew").get<double>();
    cfg.lr = j.at("lr").get<double>();
    cfg.beta1 = j.at("beta1").get<double>();
    cfg.beta2 = j.at("beta2").get<double>();
    cfg.epochs = j.at("epochs").get<int>();
    cfg.batch_size = j.at("batch_size").get<int>();
    cfg.n_critic = j.at("n_critic").get<int>();
    cfg.tau = j.at("tau").get<double>();
    cfg.capacity = j.at("capacity").get<int>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.noise_dim = j.at("noise_dim").get<int>();
    cfg.gen_hidden = j.at("gen_hidden").get<std::vector<int>>();
    cfg.disc_hidden = j.at("disc_hidden").get<std::vector<int>>();
    cfg.checkpoint_every = j.at("checkpoint_every").get<int>();
    cfg.dev_limit = j.at("dev_limit").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bad train config: ") + e.what());
  }
  cfg.Validate();
  return cfg;
}

// ---- Gumbel-sigmoid ----

double SampleGumbel(Rng& rng) { return -std::log(-std::log(OpenUniform(rng))); }

GumbelSample GumbelSigmoidHard(Var logits, const Matrix& noise, double tau) {
  if (!(tau > 0)) throw ShapeError("Gumbel temperature must be positive");
  Tape* tape = logits.tape();
  Var soft = ad::Sigmoid(
      ad::Scale(ad::Add(logits, tape->Constant(noise)), 1.0 / tau));
  Matrix hard(soft.rows(), soft.cols());
  auto s = soft.value().data();
  auto h = hard.data();
  for (std::size_t i = 0; i < s.size(); ++i) h[i] = s[i] > 0.5 ? 1.0 : 0.0;
  return {ad::StraightThrough(std::move(hard), soft), soft};
}

GumbelSample GumbelSigmoidHard(Var logits, double tau, Rng& rng) {
  Matrix noise(logits.rows(), logits.cols());
  for (double& v : noise.data()) {
    const double g1 = SampleGumbel(rng);
    v = g1 - SampleGumbel(rng);
  }
  return GumbelSigmoidHard(logits, noise, tau);
}

// ---- Conditions ----

ConditionScaling ConditionScaling::Fit(std::span<const ConditionVector> conditions) {
  ConditionScaling s;
  if (conditions.empty()) return s;
  const double n = static_cast<double>(conditions.size());
  for (int k = 0; k < kConditionDim; ++k) {
    double mean = 0;
    for (const auto& c : conditions) mean += c[k];
    mean /= n;
    double var = 0;
    for (const auto& c : conditions) var += (c[k] - mean) * (c[k] - mean);
    var /= n;
    s.shift[k] = mean;
    s.scale[k] = var > 1e-12 ? 1.0 / std::sqrt(var) : 1.0;
  }
  return s;
}

Var ConditionScaling::Apply(Var conditions) const {
  Tape& tape = *conditions.tape();
  Matrix neg_shift(1, kConditionDim), scale(1, kConditionDim);
  for (int k = 0; k < kConditionDim; ++k) {
    neg_shift(0, k) = -shift[k];
    scale(0, k) = this->scale[k];
  }
  return ad::Mul(ad::AddRowVector(conditions, tape.Constant(neg_shift)),
                 ad::RepeatRows(tape.Constant(scale), conditions.rows()));
}

void ConditionScaling::Save(const std::string& prefix, ad::Checkpoint& ckpt) const {
  Matrix sh(1, kConditionDim), sc(1, kConditionDim);
  for (int k = 0; k < kConditionDim; ++k) {
    sh(0, k) = shift[k];
    sc(0, k) = scale[k];
  }
  ckpt.Add(prefix + ".cond_shift", sh);
  ckpt.Add(prefix + ".cond_scale", sc);
}

ConditionScaling ConditionScaling::Load(const ad::Checkpoint& ckpt,
                                        const std::string& prefix) {
  ConditionScaling s;
  const std::string shift_name = prefix + ".cond_shift";
  const bool present = std::any_of(ckpt.tensors.begin(), ckpt.tensors.end(),
                                   [&](const auto& t) { return t.first == shift_name; });
  if (!present) return s;
  const Matrix& sh = ckpt.Get(shift_name);
  const Matrix& sc = ckpt.Get(prefix + ".cond_scale");
  if (sh.rows() != 1 || sh.cols() != kConditionDim || !sh.SameShape(sc)) {
    throw DataError("condition scaling has the wrong shape");
  }
  for (int k = 0; k < kConditionDim; ++k) {
    s.shift[k] = sh(0, k);
    s.scale[k] = sc(0, k);
  }
  return s;
}

// ---- Generator ----

GeneratorNet::GeneratorNet(int capacity, int noise_dim,
                           const std::vector<int>& hidden, Rng& rng)
    : capacity_(capacity), noise_dim_(noise_dim) {
  if (capacity < 2 || noise_dim <= 0 || hidden.empty()) {
    throw ShapeError("generator needs capacity >= 2, noise and a hidden layer");
  }
  trunk_ = ad::Mlp(noise_dim + kConditionDim, AllButLast(hidden), hidden.back(),
                   ad::Activation::kTanh, ad::Activation::kTanh, rng);
  adjacency_head_ = ad::Mlp(hidden.back(), {}, num_pairs(), ad::Activation::kIdentity,
                            ad::Activation::kIdentity, rng);
  node_head_ = ad::Mlp(hidden.back(), {}, capacity, ad::Activation::kIdentity,
                       ad::Activation::kIdentity, rng);
  mirror_.rows = 1;
  mirror_.cols = capacity * capacity;
  mirror_.index.assign(static_cast<std::size_t>(capacity) * capacity, -1);
  int k = 0;
  for (int i = 0; i < capacity; ++i) {
    for (int j = i + 1; j < capacity; ++j, ++k) {
      mirror_.index[static_cast<std::size_t>(i) * capacity + j] = k;
      mirror_.index[static_cast<std::size_t>(j) * capacity + i] = k;
    }
  }
}

GeneratorNoise GeneratorNet::DrawNoise(int batch, Rng& rng) const {
  GeneratorNoise n{Matrix(batch, noise_dim_), Matrix(batch, num_pairs()),
                   Matrix(batch, capacity_)};
  std::normal_distribution<double> normal;
  for (int b = 0; b < batch; ++b) {
    for (int i = 0; i < noise_dim_; ++i) n.z(b, i) = normal(rng);
    for (int i = 0; i < num_pairs(); ++i) {
      const double g1 = SampleGumbel(rng);
      n.adjacency(b, i) = g1 - SampleGumbel(rng);
    }
    for (int i = 0; i < capacity_; ++i) {
      const double g1 = SampleGumbel(rng);
      n.nodes(b, i) = g1 - SampleGumbel(rng);
    }
  }
  return n;
}

GeneratorNoise GeneratorNet::DrawNoise(std::span<const std::uint64_t> seeds) const {
  const int batch = static_cast<int>(seeds.size());
  GeneratorNoise n{Matrix(batch, noise_dim_), Matrix(batch, num_pairs()),
                   Matrix(batch, capacity_)};
  for (int b = 0; b < batch; ++b) {
    Rng rng(seeds[b]);
    GeneratorNoise row = DrawNoise(1, rng);
    std::copy(row.z.row(0), row.z.row(0) + noise_dim_, n.z.row(b));
    std::copy(row.adjacency.row(0), row.adjacency.row(0) + num_pairs(), n.adjacency.row(b));
    std::copy(row.nodes.row(0), row.nodes.row(0) + capacity_, n.nodes.row(b));
  }
  return n;
}

GeneratorOutput GeneratorNet::Forward(Tape& tape, const Matrix& conditions,
                                      const GeneratorNoise& noise, double tau) {
  if (conditions.cols() != kConditionDim || conditions.rows() != noise.z.rows()) {
    throw ShapeError("generator conditions must be B x condition dim");
  }
  Var x = ad::ConcatCols(
      {tape.Constant(noise.z), scaling_.Apply(tape.Constant(conditions))});
  Var h = trunk_.Forward(tape, x);
  GumbelSample edges = GumbelSigmoidHard(adjacency_head_.Forward(tape, h),
                                         noise.adjacency, tau);
  GumbelSample nodes = GumbelSigmoidHard(node_head_.Forward(tape, h), noise.nodes, tau);
  GeneratorOutput out;
  out.mask = nodes.hard;
  out.soft_mask = nodes.soft;
  out.adjacency = ad::Mul(ad::GatherCols(edges.hard, mirror_), ad::OuterRows(nodes.hard));
  out.soft_adjacency =
      ad::Mul(ad::GatherCols(edges.soft, mirror_), ad::OuterRows(nodes.soft));
  return out;
}

std::vector<Graph> GeneratorNet::Generate(std::span<const ConditionVector> conditions,
                                          std::span<const std::uint64_t> seeds,
                                          double tau) {
  if (conditions.size() != seeds.size()) {
    throw ShapeError("one seed per condition required");
  }
  if (conditions.empty()) return {};
  Tape tape;
  GeneratorOutput out =
      Forward(tape, PackConditions(conditions), DrawNoise(seeds), tau);
  return UnpackGraphs(out.adjacency.value(), out.mask.value(), capacity_);
}

std::vector<ad::Parameter*> GeneratorNet::Parameters() {
  std::vector<ad::Parameter*> out = trunk_.Parameters();
  for (auto* p : adjacency_head_.Parameters()) out.push_back(p);
  for (auto* p : node_head_.Parameters()) out.push_back(p);
  return out;
}

void GeneratorNet::Save(const std::string& prefix, ad::Checkpoint& ckpt) {
  ckpt.meta[prefix] = {{"capacity", capacity_}, {"noise_dim", noise_dim_}};
  scaling_.Save(prefix, ckpt);
  ad::SaveMlp(trunk_, prefix + ".trunk", ckpt);
  ad::SaveMlp(adjacency_head_, prefix + ".adjacency", ckpt);
  ad::SaveMlp(node_head_, prefix + ".nodes", ckpt);
}

GeneratorNet GeneratorNet::Load(const ad::Checkpoint& ckpt, const std::string& prefix) {
  if (!ckpt.meta.contains(prefix)) throw DataError("checkpoint has no " + prefix);
  const auto& m = ckpt.meta[prefix];
  ad::Mlp trunk = ad::LoadMlp(ckpt, prefix + ".trunk");
  std::vector<int> hidden;
  for (const auto& l : trunk.layers()) hidden.push_back(l.out);
  Rng unused(0);
  GeneratorNet g(m.at("capacity").get<int>(), m.at("noise_dim").get<int>(), hidden,
                 unused);
  g.trunk_ = std::move(trunk);
  g.adjacency_head_ = ad::LoadMlp(ckpt, prefix + ".adjacency");
  g.node_head_ = ad::LoadMlp(ckpt, prefix + ".nodes");
  g.scaling_ = ConditionScaling::Load(ckpt, prefix);
  if (g.trunk_.in_dim() != g.noise_dim_ + kConditionDim ||
      g.adjacency_head_.out_dim() != g.num_pairs() ||
      g.node_head_.out_dim() != g.capacity_) {
    throw DataError("generator tensors do not match its capacity");
  }
  return g;
}

// ---- Discriminator ----

DiscriminatorNet::DiscriminatorNet(int capacity, const std::vector<int>& hidden,
                                   Rng& rng)
    : capacity_(capacity) {
  if (capacity < 2 || hidden.empty()) {
    throw ShapeError("discriminator needs capacity >= 2 and a hidden layer");
  }
  row_encoder_ = ad::Mlp(capacity + 1 + kConditionDim, AllButLast(hidden),
                         hidden.back(), ad::Activation::kTanh, ad::Activation::kTanh,
                         rng);
  head_ = ad::Mlp(hidden.back() + kConditionDim, {hidden.back()}, 1,
                  ad::Activation::kTanh, ad::Activation::kIdentity, rng);
}

DiscriminatorNet::Trace DiscriminatorNet::Run(Tape& tape, Var adjacency, Var mask,
                                              Var conditions) {
  const int b = adjacency.rows();
  const int cap = capacity_;
  if (adjacency.cols() != cap * cap || mask.cols() != cap || mask.rows() != b ||
      conditions.rows() != b || conditions.cols() != kConditionDim) {
    throw ShapeError("discriminator input shapes do not match its capacity");
  }
  Trace t;
  conditions = scaling_.Apply(conditions);
  Var rows = ad::Reshape(adjacency, b * cap, cap);
  t.order = RowOrder(rows.value());
  Var sorted = ad::GatherCols(rows, t.order);
  Var flags = ad::Reshape(mask, b * cap, 1);
  Var in = ad::ConcatCols({sorted, flags, ad::RepeatRows(conditions, cap)});
  Var h = row_encoder_.Forward(tape, in, &t.rows);
  Var pooled = ad::GroupMeanRows(h, cap);
  t.score = head_.Forward(tape, ad::ConcatCols({pooled, conditions}), &t.head);
  return t;
}

Var DiscriminatorNet::Score(Tape& tape, Var adjacency, Var mask, Var conditions) {
  return Run(tape, adjacency, mask, conditions).score;
}

CriticEval DiscriminatorNet::ScoreWithInputGradient(Tape& tape, Var adjacency,
                                                    Var mask, Var conditions) {
  Trace t = Run(tape, adjacency, mask, conditions);
  const int b = adjacency.rows();
  const int cap = capacity_;
  const int width = row_encoder_.out_dim();
  Var g_head = head_.InputVjp(tape, t.head, tape.Constant(Matrix(b, 1, 1.0)));
  Var g_rows_out = ad::Scale(ad::RepeatRows(ad::SliceCols(g_head, 0, width), cap),
                             1.0 / cap);
  Var g_in = row_encoder_.InputVjp(tape, t.rows, g_rows_out);
  Var g_sorted = ad::SliceCols(g_in, 0, cap);
  Var g_flags = ad::SliceCols(g_in, cap, cap + 1);
  CriticEval ev;
  ev.score = t.score;
  ev.grad_adjacency =
      ad::Reshape(ad::ScatterCols(g_sorted, t.order, cap), b, cap * cap);
  ev.grad_mask = ad::Reshape(g_flags, b, cap);
  return ev;
}

std::vector<ad::Parameter*> DiscriminatorNet::Parameters() {
  std::vector<ad::Parameter*> out = row_encoder_.Parameters();
  for (auto* p : head_.Parameters()) out.push_back(p);
  return out;
}

void DiscriminatorNet::Save(const std::string& prefix, ad::Checkpoint& ckpt) {
  ckpt.meta[prefix] = {{"capacity", capacity_}};
  scaling_.Save(prefix, ckpt);
  ad::SaveMlp(row_encoder_, prefix + ".rows", ckpt);
  ad::SaveMlp(head_, prefix + ".head", ckpt);
}

DiscriminatorNet DiscriminatorNet::Load(const ad::Checkpoint& ckpt,
                                        const std::string& prefix) {
  if (!ckpt.meta.contains(prefix)) throw DataError("checkpoint has no " + prefix);
  DiscriminatorNet d;
  d.capacity_ = ckpt.meta[prefix].at("capacity").get<int>();
  d.row_encoder_ = ad::LoadMlp(ckpt, prefix + ".rows");
  d.head_ = ad::LoadMlp(ckpt, prefix + ".head");
  d.scaling_ = ConditionScaling::Load(ckpt, prefix);
  if (d.row_encoder_.in_dim() != d.capacity_ + 1 + kConditionDim ||
      d.head_.in_dim() != d.row_encoder_.out_dim() + kConditionDim) {
    throw DataError("discriminator tensors do not match its capacity");
  }
  return d;
}

// ---- LinearCritic ----

LinearCritic::LinearCritic(Matrix w_adjacency, Matrix w_mask)
    : w_adjacency_(std::move(w_adjacency)), w_mask_(std::move(w_mask)) {
  if (w_adjacency_.value.cols() != 1 || w_mask_.value.cols() != 1) {
    throw ShapeError("linear critic weights must be column vectors");
  }
}

Var LinearCritic::Score(Tape& tape, Var adjacency, Var mask, Var) {
  return ad::Add(ad::MatMul(adjacency, tape.Param(w_adjacency_)),
                 ad::MatMul(mask, tape.Param(w_mask_)));
}

CriticEval LinearCritic::ScoreWithInputGradient(Tape& tape, Var adjacency, Var mask,
                                                Var conditions) {
  const int b = adjacency.rows();
  CriticEval ev;
  ev.score = Score(tape, adjacency, mask, conditions);
  ev.grad_adjacency = ad::RepeatRows(
      ad::Reshape(tape.Param(w_adjacency_), 1, w_adjacency_.value.rows()), b);
  ev.grad_mask =
      ad::RepeatRows(ad::Reshape(tape.Param(w_mask_), 1, w_mask_.value.rows()), b);
  return ev;
}

std::vector<ad::Parameter*> LinearCritic::Parameters() {
  return {&w_adjacency_, &w_mask_};
}

// ---- Penalty and reward ----

Var GradientPenalty(Tape& tape, Critic& critic, const Matrix& real_adjacency,
                    const Matrix& real_mask, const Matrix& fake_adjacency,
                    const Matrix& fake_mask, Var conditions, Rng& rng) {
  if (!real_adjacency.SameShape(fake_adjacency) || !real_mask.SameShape(fake_mask) ||
      real_adjacency.rows() != real_mask.rows()) {
    throw ShapeError("gradient penalty: real and fake batches differ in shape");
  }
  Matrix xa = real_adjacency;
  Matrix xm = real_mask;
  for (int b = 0; b < xa.rows(); ++b) {
    const double eps = Uniform01(rng);
    for (int c = 0; c < xa.cols(); ++c) {
      xa(b, c) = eps * real_adjacency(b, c) + (1.0 - eps) * fake_adjacency(b, c);
    }
    for (int c = 0; c < xm.cols(); ++c) {
      xm(b, c) = eps * real_mask(b, c) + (1.0 - eps) * fake_mask(b, c);
    }
  }
  CriticEval ev = critic.ScoreWithInputGradient(tape, tape.Constant(std::move(xa)),
                                                tape.Constant(std::move(xm)),
                                                conditions);
  Var sq = ad::Add(ad::RowSum(ad::Square(ev.grad_adjacency)),
                   ad::RowSum(ad::Square(ev.grad_mask)));
  return ad::Mean(ad::Square(ad::AddScalar(ad::Sqrt(sq), -1.0)));
}

Var CountReward::Loss(Tape& tape, Var soft_adjacency, Var soft_mask,
                      std::span<const PropertySpec> specs) const {
  const int b = soft_mask.rows();
  if (static_cast<int>(specs.size()) != b) {
    throw ShapeError("reward: one spec per batch row required");
  }
  Matrix tn(b, 1), te(b, 1), wn(b, 1), we(b, 1);
  const double sn = PropertyScale(PropertyKind::kNode);
  const double se = PropertyScale(PropertyKind::kEdge);
  for (int i = 0; i < b; ++i) {
    const bool has_n = specs[i].has(PropertyKind::kNode);
    const bool has_e = specs[i].has(PropertyKind::kEdge);
    const int terms = (has_n ? 1 : 0) + (has_e ? 1 : 0);
    if (has_n) {
      tn(i, 0) = specs[i].at(PropertyKind::kNode);
      wn(i, 0) = 1.0 / (terms * sn * sn);
    }
    if (has_e) {
      te(i, 0) = specs[i].at(PropertyKind::kEdge);
      we(i, 0) = 1.0 / (terms * se * se);
    }
  }
  Var n_hat = ad::RowSum(soft_mask);
  Var m_hat = ad::Scale(ad::RowSum(soft_adjacency), 0.5);
  Var node_term = ad::Mul(ad::Square(ad::Sub(n_hat, tape.Constant(std::move(tn)))),
                          tape.Constant(std::move(wn)));
  Var edge_term = ad::Mul(ad::Square(ad::Sub(m_hat, tape.Constant(std::move(te)))),
                          tape.Constant(std::move(we)));
  return ad::Mean(ad::Add(node_term, edge_term));
}

// ---- Batches ----

GraphBatch PackGraphs(std::span<const Graph* const> graphs, int capacity) {
  const int b = static_cast<int>(graphs.size());
  GraphBatch out{Matrix(b, capacity * capacity), Matrix(b, capacity)};
  for (int i = 0; i < b; ++i) {
    const Graph& g = *graphs[i];
    if (g.capacity() != capacity) {
      throw DataError("graph capacity " + std::to_string(g.capacity()) +
                      " does not match model capacity " + std::to_string(capacity));
    }
    auto mask = g.mask();
    auto adj = g.adjacency();
    for (int j = 0; j < capacity; ++j) out.mask(i, j) = mask[j];
    for (int j = 0; j < capacity * capacity; ++j) out.adjacency(i, j) = adj[j];
  }
  return out;
}

Matrix PackConditions(std::span<const ConditionVector> conditions) {
  Matrix out(static_cast<int>(conditions.size()), kConditionDim);
  for (std::size_t i = 0; i < conditions.size(); ++i) {
    std::copy(conditions[i].begin(), conditions[i].end(), out.row(static_cast<int>(i)));
  }
  return out;
}

std::vector<Graph> UnpackGraphs(const Matrix& adjacency, const Matrix& mask,
                                int capacity) {
  if (adjacency.cols() != capacity * capacity || mask.cols() != capacity ||
      adjacency.rows() != mask.rows()) {
    throw ShapeError("UnpackGraphs: shapes do not match capacity");
  }
  std::vector<Graph> out;
  out.reserve(mask.rows());
  for (int b = 0; b < mask.rows(); ++b) {
    out.push_back(GraphFromBuffers(
        capacity, std::span<const double>(mask.row(b), capacity),
        std::span<const double>(adjacency.row(b),
                                static_cast<std::size_t>(capacity) * capacity)));
  }
  return out;
}

// ---- Training ----

nlohmann::json EpochLogToJson(const EpochLog& log) {
  return {{"epoch", log.epoch},
          {"d_loss", log.d_loss},
          {"g_loss", log.g_loss},
          {"gp", log.gp},
          {"reward_loss", log.reward_loss},
          {"dev_prop_match", log.dev_prop_match},
          {"dev_closeness", log.dev_closeness}};
}

ConditionVector EncodeDescription(const Description& d) {
  if (d.mode == DescriptionMode::kShuffledNumbers) {
    return UnlabeledNumberEncoder().Encode(d.text);
  }
  return PropertyConditionEncoder().Encode(d.text);
}

namespace {

struct TrainState {
  TrainConfig cfg;
  GeneratorNet gen;
  DiscriminatorNet disc;
  ad::Adam opt_g;
  ad::Adam opt_d;
  Rng rng;
  int epoch = 0;  // last completed epoch
};

ConditionScaling FitScaling(std::span<const DatasetRecord> train) {
  std::vector<ConditionVector> conds;
  conds.reserve(train.size());
  for (const DatasetRecord& r : train) conds.push_back(EncodeDescription(r.text));
  return ConditionScaling::Fit(conds);
}

void InitState(TrainState& s, const TrainConfig& cfg, const ConditionScaling& scaling) {
  s.cfg = cfg;
  Rng init(MixSeed(cfg.seed, kInitStream));
  s.gen = GeneratorNet(cfg.capacity, cfg.noise_dim, cfg.gen_hidden, init);
  s.disc = DiscriminatorNet(cfg.capacity, cfg.disc_hidden, init);
  s.gen.set_condition_scaling(scaling);
  s.disc.set_condition_scaling(scaling);
  const ad::AdamConfig adam{cfg.lr, cfg.beta1, cfg.beta2, 1e-8};
  s.opt_g = ad::Adam(s.gen.Parameters(), adam);
  s.opt_d = ad::Adam(s.disc.Parameters(), adam);
  s.rng = Rng(MixSeed(cfg.seed, kTrainStream));
  s.epoch = 0;
}

void SaveOptimizer(ad::Adam& opt, const std::string& prefix, ad::Checkpoint& ckpt) {
  ckpt.meta[prefix + "_steps"] = opt.steps();
  for (std::size_t i = 0; i < opt.first_moments().size(); ++i) {
    ckpt.Add(prefix + ".m." + std::to_string(i), opt.first_moments()[i]);
    ckpt.Add(prefix + ".v." + std::to_string(i), opt.second_moments()[i]);
  }
}

void LoadOptimizer(ad::Adam& opt, const std::string& prefix, const ad::Checkpoint& ckpt) {
  opt.set_steps(ckpt.meta.at(prefix + "_steps").get<std::int64_t>());
  for (std::size_t i = 0; i < opt.first_moments().size(); ++i) {
    const Matrix& m = ckpt.Get(prefix + ".m." + std::to_string(i));
    const Matrix& v = ckpt.Get(prefix + ".v." + std::to_string(i));
    if (!m.SameShape(opt.first_moments()[i]) || !v.SameShape(opt.second_moments()[i])) {
      throw DataError("optimizer state shape mismatch in checkpoint");
    }
    opt.first_moments()[i] = m;
    opt.second_moments()[i] = v;
  }
}

ad::Checkpoint Snapshot(TrainState& s) {
  ad::Checkpoint ckpt;
  ckpt.meta["format"] = kCheckpointFormat;
  ckpt.meta["config"] = TrainConfigToJson(s.cfg);
  ckpt.meta["epoch"] = s.epoch;
  ckpt.meta["rng"] = SaveRng(s.rng);
  s.gen.Save("gen", ckpt);
  s.disc.Save("disc", ckpt);
  SaveOptimizer(s.opt_g, "opt_g", ckpt);
  SaveOptimizer(s.opt_d, "opt_d", ckpt);
  return ckpt;
}

void CheckFormat(const ad::Checkpoint& ckpt) {
  if (ckpt.meta.value("format", "") != kCheckpointFormat) {
    throw DataError("not a generator checkpoint");
  }
}

void Restore(TrainState& s, const ad::Checkpoint& ckpt, const TrainConfig& cfg) {
  CheckFormat(ckpt);
  const TrainConfig saved = TrainConfigFromJson(ckpt.meta.at("config"));
  if (saved.capacity != cfg.capacity || saved.noise_dim != cfg.noise_dim ||
      saved.gen_hidden != cfg.gen_hidden || saved.disc_hidden != cfg.disc_hidden) {
    throw DataError("resume checkpoint architecture differs from the config");
  }
  InitState(s, cfg, ConditionScaling());
  s.gen = GeneratorNet::Load(ckpt, "gen");
  s.disc = DiscriminatorNet::Load(ckpt, "disc");
  const ad::AdamConfig adam{cfg.lr, cfg.beta1, cfg.beta2, 1e-8};
  s.opt_g = ad::Adam(s.gen.Parameters(), adam);
  s.opt_d = ad::Adam(s.disc.Parameters(), adam);
  LoadOptimizer(s.opt_g, "opt_g", ckpt);
  LoadOptimizer(s.opt_d, "opt_d", ckpt);
  LoadRng(s.rng, ckpt.meta.at("rng").get<std::string>());
  s.epoch = ckpt.meta.at("epoch").get<int>();
}

struct StepStats {
  double d_loss = 0, g_loss = 0, gp = 0, reward = 0;
  long critic_steps = 0, gen_steps = 0;
};

void TrainBatch(TrainState& s, const GraphBatch& real, const Matrix& conds,
                std::span<const PropertySpec> specs, StepStats& stats) {
  const TrainConfig& cfg = s.cfg;
  const int b = conds.rows();
  for (int k = 0; k < cfg.n_critic; ++k) {
    Matrix fake_adj, fake_mask;
    {
      Tape gt;
      GeneratorOutput fake = s.gen.Forward(gt, conds, s.gen.DrawNoise(b, s.rng), cfg.tau);
      fake_adj = fake.adjacency.value();
      fake_mask = fake.mask.value();
    }
    Tape tape;
    Var c = tape.Constant(conds);
    Var d_real = s.disc.Score(tape, tape.Constant(real.adjacency), tape.Constant(real.mask), c);
    Var d_fake = s.disc.Score(tape, tape.Constant(fake_adj), tape.Constant(fake_mask), c);
    Var gp = GradientPenalty(tape, s.disc, real.adjacency, real.mask, fake_adj,
                             fake_mask, c, s.rng);
    Var loss = ad::Add(ad::Sub(ad::Mean(d_fake), ad::Mean(d_real)),
                       ad::Scale(gp, cfg.lambda_gp));
    CheckFinite(loss.value()(0, 0), "critic loss");
    tape.Backward(loss);
    s.opt_d.Step();
    stats.d_loss += loss.value()(0, 0);
    stats.gp += gp.value()(0, 0);
    ++stats.critic_steps;
  }

  Tape tape;
  GeneratorOutput out = s.gen.Forward(tape, conds, s.gen.DrawNoise(b, s.rng), cfg.tau);
  Var score = s.disc.Score(tape, out.adjacency, out.mask, tape.Constant(conds));
  Var wgan = ad::Neg(ad::Mean(score));
  Var reward = CountReward().Loss(tape, out.soft_adjacency, out.soft_mask, specs);
  Var loss = cfg.lambda_rew > 0 ? ad::Add(wgan, ad::Scale(reward, cfg.lambda_rew)) : wgan;
  CheckFinite(loss.value()(0, 0), "generator loss");
  tape.Backward(loss);
  s.opt_g.Step();
  s.opt_d.ZeroGrad();
  stats.g_loss += loss.value()(0, 0);
  stats.reward += reward.value()(0, 0);
  ++stats.gen_steps;
}

void Evaluate(TrainState& s, std::span<const DatasetRecord> dev, EpochLog& log) {
  std::size_t n = dev.size();
  if (s.cfg.dev_limit > 0) n = std::min<std::size_t>(n, s.cfg.dev_limit);
  if (n == 0) return;
  std::vector<ConditionVector> conds;
  std::vector<std::uint64_t> seeds;
  const std::uint64_t base = MixSeed(s.cfg.seed, kDevStream);
  for (std::size_t i = 0; i < n; ++i) {
    conds.push_back(EncodeDescription(dev[i].text));
    seeds.push_back(MixSeed(base, i));
  }
  const std::vector<Graph> graphs = s.gen.Generate(conds, seeds, s.cfg.tau);
  EvalAccumulator acc;
  for (std::size_t i = 0; i < n; ++i) {
    if (dev[i].spec.empty()) continue;
    acc.Add(dev[i].spec, ComputeProperties(graphs[i]), dev[i].graph.NumActive());
  }
  const EvalReport r = acc.Report();
  log.dev_prop_match = r.prop_match;
  log.dev_closeness = r.closeness;
}

void CheckRecords(std::span<const DatasetRecord> records, int capacity,
                  const char* which) {
  for (const DatasetRecord& r : records) {
    if (r.graph.capacity() != capacity) {
      throw DataError(std::string(which) + " record " + std::to_string(r.id) +
                      " has capacity " + std::to_string(r.graph.capacity()) +
                      ", config expects " + std::to_string(capacity));
    }
    if (!r.spec.IsSubsetOf(r.full_props)) {
      throw DataError(std::string(which) + " record " + std::to_string(r.id) +
                      ": spec does not match its graph");
    }
  }
}

// Drops log lines for epochs after `last_epoch`, left behind when a run
// stopped between writing the log and its checkpoint.
void TrimLog(const std::filesystem::path& path, int last_epoch) {
  if (!std::filesystem::exists(path)) return;
  std::istringstream in(ReadFile(path));
  std::string kept, line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.contains("epoch")) {
      throw DataError("malformed log line in " + path.string());
    }
    if (j["epoch"].get<int>() <= last_epoch) kept += line + "\n";
  }
  WriteFileAtomic(path, kept);
}

}  // namespace

TrainResult Train(std::span<const DatasetRecord> train,
                  std::span<const DatasetRecord> dev, const TrainConfig& cfg,
                  const TrainOptions& options) {
  cfg.Validate();
  if (train.empty()) throw DataError("training set is empty");
  CheckRecords(train, cfg.capacity, "train");
  CheckRecords(dev, cfg.capacity, "dev");

  TrainState s;
  if (options.resume_from) {
    Restore(s, ad::LoadCheckpoint(*options.resume_from), cfg);
  } else {
    InitState(s, cfg, FitScaling(train));
  }
  if (options.checkpoint_dir) std::filesystem::create_directories(*options.checkpoint_dir);

  std::ofstream log_file;
  if (options.log_path) {
    if (options.resume_from) TrimLog(*options.log_path, s.epoch);
    log_file.open(*options.log_path,
                  options.resume_from ? std::ios::app : std::ios::trunc);
    if (!log_file) throw DataError("cannot open log " + options.log_path->string());
  }

  TrainResult result;
  ad::Checkpoint last_good = Snapshot(s);
  std::vector<std::size_t> order(train.size());
  std::vector<ConditionVector> conds(train.size());

  try {
    for (int epoch = s.epoch + 1; epoch <= cfg.epochs; ++epoch) {
      const std::uint64_t render_seed = MixSeed(cfg.seed, kRenderStream + epoch);
      for (std::size_t i = 0; i < train.size(); ++i) {
        RenderConfig rc;
        rc.shuffle_properties = true;
        rc.mode = train[i].text.mode;
        rc.rng_seed = MixSeed(render_seed, train[i].id);
        conds[i] = EncodeDescription(Render(train[i].spec, rc));
      }
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), s.rng);

      StepStats stats;
      for (std::size_t start = 0; start < order.size();
           start += static_cast<std::size_t>(cfg.batch_size)) {
        const std::size_t end =
            std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
        std::vector<const Graph*> graphs;
        std::vector<ConditionVector> batch_conds;
        std::vector<PropertySpec> specs;
        for (std::size_t k = start; k < end; ++k) {
          graphs.push_back(&train[order[k]].graph);
          batch_conds.push_back(conds[order[k]]);
          specs.push_back(train[order[k]].spec);
        }
        TrainBatch(s, PackGraphs(graphs, cfg.capacity), PackConditions(batch_conds),
                   specs, stats);
      }

      EpochLog log;
      log.epoch = epoch;
      log.d_loss = stats.d_loss / static_cast<double>(stats.critic_steps);
      log.g_loss = stats.g_loss / static_cast<double>(stats.gen_steps);
      log.gp = stats.gp / static_cast<double>(stats.critic_steps);
      log.reward_loss = stats.reward / static_cast<double>(stats.gen_steps);
      Evaluate(s, dev, log);
      s.epoch = epoch;

      result.log.push_back(log);
      if (log_file.is_open()) {
        log_file << EpochLogToJson(log).dump() << "\n";
        log_file.flush();
      }
      last_good = Snapshot(s);
      if (options.checkpoint_dir && cfg.checkpoint_every > 0 &&
          epoch % cfg.checkpoint_every == 0) {
        ad::SaveCheckpoint(last_good, *options.checkpoint_dir /
                                          ("epoch_" + std::to_string(epoch) + ".ckpt"));
      }
      if (options.on_epoch) options.on_epoch(log);
    }
  } catch (const NumericError&) {
    if (options.checkpoint_dir) {
      ad::SaveCheckpoint(last_good, *options.checkpoint_dir / "last_good.ckpt");
    }
    throw;
  }

  if (options.checkpoint_dir) {
    ad::SaveCheckpoint(last_good, *options.checkpoint_dir / "final.ckpt");
  }
  result.final_checkpoint = std::move(last_good);
  return result;
}

TrainedModel LoadTrainedModel(const std::filesystem::path& path) {
  const ad::Checkpoint ckpt = ad::LoadCheckpoint(path);
  CheckFormat(ckpt);
  TrainedModel m;
  m.config = TrainConfigFromJson(ckpt.meta.at("config"));
  m.generator = GeneratorNet::Load(ckpt, "gen");
  m.epoch = ckpt.meta.at("epoch").get<int>();
  return m;
}

TrainedModel InitialModel(const TrainConfig& cfg, std::span<const DatasetRecord> train) {
  cfg.Validate();
  TrainState s;
  InitState(s, cfg, FitScaling(train));
  TrainedModel m;
  m.config = cfg;
  m.generator = std::move(s.gen);
  return m;
}

std::vector<Graph> GenerateForConditions(TrainedModel& model,
                                         std::span<const ConditionVector> conditions,
                                         std::uint64_t seed) {
  constexpr std::size_t kChunk = 256;
  std::vector<Graph> out;
  out.reserve(conditions.size());
  for (std::size_t start = 0; start < conditions.size(); start += kChunk) {
    const std::size_t end = std::min(conditions.size(), start + kChunk);
    std::vector<std::uint64_t> seeds;
    for (std::size_t i = start; i < end; ++i) seeds.push_back(MixSeed(seed, i));
    auto graphs = model.generator.Generate(conditions.subspan(start, end - start),
                                           seeds, model.config.tau);
    for (auto& g : graphs) out.push_back(std::move(g));
  }
  return out;
}

}  // namespace lcgraph
