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

#include "lcgraph/nn.h"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <string>

#include "lcgraph/errors.h"
#include "lcgraph/io.h"

namespace lcgraph::ad {

namespace {

constexpr char kMagic[8] = {'L', 'C', 'G', 'C', 'K', 'P', 'T', '\0'};

Var Activate(Var z, Activation a) {
  switch (a) {
    case Activation::kIdentity: return z;
    case Activation::kTanh: return Tanh(z);
    case Activation::kSigmoid: return Sigmoid(z);
    case Activation::kRelu: return Relu(z);
  }
  return z;
}

// g * f'(z) where a = f(z), expressed with differentiable ops.
Var ActivationVjp(Var g, Var z, Var a, Activation act) {
  switch (act) {
    case Activation::kIdentity: return g;
    case Activation::kTanh: return Mul(g, AddScalar(Neg(Square(a)), 1.0));
    case Activation::kSigmoid: return Mul(g, Mul(a, AddScalar(Neg(a), 1.0)));
    case Activation::kRelu: return Mul(g, Step(z));
  }
  return g;
}

template <typename T>
void AppendRaw(std::string& out, T v) {
  if constexpr (std::endian::native == std::endian::big) {
    auto bytes = std::bit_cast<std::array<char, sizeof(T)>>(v);
    out.append(bytes.rbegin(), bytes.rend());
  } else {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out.append(buf, sizeof(T));
  }
}

template <typename T>
T ReadRaw(const std::string& in, std::size_t& pos) {
  if (pos + sizeof(T) > in.size()) throw DataError("checkpoint is truncated");
  char buf[sizeof(T)];
  std::memcpy(buf, in.data() + pos, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(buf, buf + sizeof(T));
  }
  pos += sizeof(T);
  T v;
  std::memcpy(&v, buf, sizeof(T));
  return v;
}

}  // namespace

std::string_view ActivationName(Activation a) {
  switch (a) {
    case Activation::kIdentity: return "identity";
    case Activation::kTanh: return "tanh";
    case Activation::kSigmoid: return "sigmoid";
    case Activation::kRelu: return "relu";
  }
  return "identity";
}

Activation ActivationFromName(std::string_view name) {
  for (Activation a : {Activation::kIdentity, Activation::kTanh,
                       Activation::kSigmoid, Activation::kRelu}) {
    if (ActivationName(a) == name) return a;
  }
  throw DataError("unknown activation: " + std::string(name));
}

// ---- Mlp ----

Mlp::Mlp(int in, const std::vector<int>& hidden, int out, Activation hidden_act,
         Activation out_act, Rng& rng) {
  std::vector<LayerSpec> specs;
  int prev = in;
  for (int h : hidden) {
    specs.push_back({prev, h, hidden_act});
    prev = h;
  }
  specs.push_back({prev, out, out_act});
  *this = Mlp(std::move(specs));
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const double limit =
        std::sqrt(6.0 / static_cast<double>(layers_[l].in + layers_[l].out));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (double& w : weights_[l]->value.data()) w = dist(rng);
  }
}

Mlp::Mlp(std::vector<LayerSpec> layers) : layers_(std::move(layers)) {
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const LayerSpec& s = layers_[l];
    if (s.in <= 0 || s.out <= 0) throw ShapeError("Mlp layer with empty side");
    if (l > 0 && layers_[l - 1].out != s.in) {
      throw ShapeError("Mlp layer sizes do not chain");
    }
    weights_.push_back(std::make_unique<Parameter>(Matrix(s.in, s.out)));
    biases_.push_back(std::make_unique<Parameter>(Matrix(1, s.out)));
  }
}

Var Mlp::Forward(Tape& tape, Var x, MlpTrace* trace) {
  if (x.cols() != in_dim()) {
    throw ShapeError("Mlp input width " + std::to_string(x.cols()) +
                     ", expected " + std::to_string(in_dim()));
  }
  if (trace != nullptr) {
    trace->input = x;
    trace->pre.clear();
    trace->post.clear();
  }
  Var h = x;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    Var z = AddRowVector(MatMul(h, tape.Param(*weights_[l])),
                         tape.Param(*biases_[l]));
    h = Activate(z, layers_[l].activation);
    if (trace != nullptr) {
      trace->pre.push_back(z);
      trace->post.push_back(h);
    }
  }
  return h;
}

Var Mlp::InputVjp(Tape& tape, const MlpTrace& trace, Var cotangent) {
  if (trace.pre.size() != layers_.size()) {
    throw ShapeError("InputVjp trace does not match this Mlp");
  }
  Var g = cotangent;
  for (std::size_t l = layers_.size(); l-- > 0;) {
    g = ActivationVjp(g, trace.pre[l], trace.post[l], layers_[l].activation);
    g = MatMulBT(g, tape.Param(*weights_[l]));
  }
  return g;
}

std::vector<Parameter*> Mlp::Parameters() {
  std::vector<Parameter*> out;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    out.push_back(weights_[l].get());
    out.push_back(biases_[l].get());
  }
  return out;
}

// ---- Adam ----

Adam::Adam(std::vector<Parameter*> params, AdamConfig config)
    : params_(std::move(params)), config_(config) {
  for (Parameter* p : params_) {
    m_.emplace_back(p->value.rows(), p->value.cols());
    v_.emplace_back(p->value.rows(), p->value.cols());
    if (!p->grad.SameShape(p->value)) p->grad = Matrix(p->value.rows(), p->value.cols());
  }
}

void Adam::ZeroGrad() {
  for (Parameter* p : params_) p->ZeroGrad();
}

void Adam::Step() {
  for (Parameter* p : params_) {
    for (double g : p->grad.data()) {
      if (!std::isfinite(g)) throw NumericError("non-finite gradient");
    }
  }
  ++steps_;
  const double b1 = config_.beta1, b2 = config_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(steps_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(steps_));
  for (std::size_t i = 0; i < params_.size(); ++i) {
    auto w = params_[i]->value.data();
    auto g = params_[i]->grad.data();
    auto m = m_[i].data();
    auto v = v_[i].data();
    for (std::size_t k = 0; k < w.size(); ++k) {
      m[k] = b1 * m[k] + (1.0 - b1) * g[k];
      v[k] = b2 * v[k] + (1.0 - b2) * g[k] * g[k];
      const double mhat = m[k] / c1;
      const double vhat = v[k] / c2;
      w[k] -= config_.lr * mhat / (std::sqrt(vhat) + config_.eps);
    }
  }
  ZeroGrad();
}

// ---- Checkpoint ----

const Matrix& Checkpoint::Get(std::string_view name) const {
  for (const auto& [n, m] : tensors) {
    if (n == name) return m;
  }
  throw DataError("checkpoint has no tensor named " + std::string(name));
}

void SaveCheckpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  nlohmann::json header;
  header["meta"] = ckpt.meta;
  nlohmann::json list = nlohmann::json::array();
  for (const auto& [name, m] : ckpt.tensors) {
    list.push_back({{"name", name}, {"shape", {m.rows(), m.cols()}}});
  }
  header["tensors"] = list;
  const std::string text = header.dump();

  std::string out(kMagic, sizeof(kMagic));
  AppendRaw<std::uint32_t>(out, kCheckpointVersion);
  AppendRaw<std::uint64_t>(out, text.size());
  out += text;
  for (const auto& entry : ckpt.tensors) {
    for (double v : entry.second.data()) AppendRaw<double>(out, v);
  }
  WriteFileAtomic(path, out);
}

Checkpoint LoadCheckpoint(const std::filesystem::path& path) {
  const std::string in = ReadFile(path);
  if (in.size() < sizeof(kMagic) || std::memcmp(in.data(), kMagic, sizeof(kMagic)) != 0) {
    throw DataError(path.string() + " is not a checkpoint");
  }
  std::size_t pos = sizeof(kMagic);
  const auto version = ReadRaw<std::uint32_t>(in, pos);
  if (version != kCheckpointVersion) {
    throw DataError("unsupported checkpoint version " + std::to_string(version));
  }
  const auto len = ReadRaw<std::uint64_t>(in, pos);
  if (pos + len > in.size()) throw DataError("checkpoint is truncated");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(in.substr(pos, len));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bad checkpoint header: ") + e.what());
  }
  pos += len;
  Checkpoint ckpt;
  try {
    ckpt.meta = header.at("meta");
    for (const auto& t : header.at("tensors")) {
      const int rows = t.at("shape").at(0).get<int>();
      const int cols = t.at("shape").at(1).get<int>();
      if (rows < 0 || cols < 0) throw DataError("negative tensor shape");
      Matrix m(rows, cols);
      for (double& v : m.data()) v = ReadRaw<double>(in, pos);
      ckpt.tensors.emplace_back(t.at("name").get<std::string>(), std::move(m));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bad checkpoint header: ") + e.what());
  }
  if (pos != in.size()) throw DataError("trailing bytes after checkpoint payload");
  return ckpt;
}

nlohmann::json LayersToJson(const std::vector<LayerSpec>& layers) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& l : layers) {
    j.push_back({{"in", l.in},
                 {"out", l.out},
                 {"activation", std::string(ActivationName(l.activation))}});
  }
  return j;
}

std::vector<LayerSpec> LayersFromJson(const nlohmann::json& j) {
  std::vector<LayerSpec> layers;
  try {
    for (const auto& l : j) {
      layers.push_back({l.at("in").get<int>(), l.at("out").get<int>(),
                        ActivationFromName(l.at("activation").get<std::string>())});
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bad layer list: ") + e.what());
  }
  return layers;
}

void SaveMlp(Mlp& mlp, const std::string& prefix, Checkpoint& ckpt) {
  ckpt.meta["networks"][prefix] = LayersToJson(mlp.layers());
  const auto params = mlp.Parameters();
  for (std::size_t i = 0; i < params.size(); ++i) {
    ckpt.Add(prefix + "." + std::to_string(i / 2) + (i % 2 == 0 ? ".w" : ".b"),
             params[i]->value);
  }
}

Mlp LoadMlp(const Checkpoint& ckpt, const std::string& prefix) {
  if (!ckpt.meta.contains("networks") || !ckpt.meta["networks"].contains(prefix)) {
    throw DataError("checkpoint has no network " + prefix);
  }
  Mlp mlp(LayersFromJson(ckpt.meta["networks"][prefix]));
  const auto params = mlp.Parameters();
  for (std::size_t i = 0; i < params.size(); ++i) {
    const Matrix& m = ckpt.Get(prefix + "." + std::to_string(i / 2) +
                               (i % 2 == 0 ? ".w" : ".b"));
    if (!m.SameShape(params[i]->value)) {
      throw DataError("tensor shape mismatch in network " + prefix);
    }
    params[i]->value = m;
  }
  return mlp;
}

}  // namespace lcgraph::ad
