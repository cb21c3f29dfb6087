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

#ifndef LCGRAPH_NN_H_
#define LCGRAPH_NN_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "lcgraph/autodiff.h"
#include "lcgraph/random.h"

namespace lcgraph::ad {

enum class Activation { kIdentity, kTanh, kSigmoid, kRelu };

std::string_view ActivationName(Activation a);
Activation ActivationFromName(std::string_view name);

struct LayerSpec {
  int in = 0;
  int out = 0;
  Activation activation = Activation::kIdentity;
};

// Intermediate values of one Mlp::Forward call.
struct MlpTrace {
  Var input;
  std::vector<Var> pre;   // affine outputs, one per layer
  std::vector<Var> post;  // activations, one per layer
};

// Fully connected network. Weights are (in x out), biases (1 x out).
class Mlp {
 public:
  Mlp() = default;
  // Hidden layers use `hidden_act`; the last layer uses `out_act`. Weights
  // get Glorot-uniform initialization, biases start at zero.
  Mlp(int in, const std::vector<int>& hidden, int out, Activation hidden_act,
      Activation out_act, Rng& rng);
  // Rebuilds a network with the given layer shapes and zero parameters.
  explicit Mlp(std::vector<LayerSpec> layers);

  Var Forward(Tape& tape, Var x, MlpTrace* trace = nullptr);

  // d/dx of sum(cotangent * f(x)), written as tape operations so that the
  // result can itself be differentiated (with respect to the parameters or
  // x). `trace` must come from Forward on the same tape.
  Var InputVjp(Tape& tape, const MlpTrace& trace, Var cotangent);

  int in_dim() const { return layers_.empty() ? 0 : layers_.front().in; }
  int out_dim() const { return layers_.empty() ? 0 : layers_.back().out; }
  const std::vector<LayerSpec>& layers() const { return layers_; }

  // Weight then bias, layer by layer. Pointers stay valid for the Mlp's life.
  std::vector<Parameter*> Parameters();

 private:
  std::vector<LayerSpec> layers_;
  // unique_ptr keeps Parameter addresses stable across moves of the Mlp.
  std::vector<std::unique_ptr<Parameter>> weights_;
  std::vector<std::unique_ptr<Parameter>> biases_;
};

struct AdamConfig {
  double lr = 2e-4;
  double beta1 = 0.5;
  double beta2 = 0.9;
  double eps = 1e-8;
};

class Adam {
 public:
  Adam() = default;
  Adam(std::vector<Parameter*> params, AdamConfig config);

  // Applies one bias-corrected update from the accumulated gradients and
  // zeroes them. Throws NumericError, leaving parameters untouched, when a
  // gradient is not finite.
  void Step();
  void ZeroGrad();

  std::int64_t steps() const { return steps_; }
  const AdamConfig& config() const { return config_; }
  std::vector<Matrix>& first_moments() { return m_; }
  std::vector<Matrix>& second_moments() { return v_; }
  void set_steps(std::int64_t s) { steps_ = s; }

 private:
  std::vector<Parameter*> params_;
  AdamConfig config_;
  std::vector<Matrix> m_;
  std::vector<Matrix> v_;
  std::int64_t steps_ = 0;
};

// Named tensors plus a JSON header. On disk: the 8-byte magic "LCGCKPT\0",
// a uint32 format version, a uint64 header length, the UTF-8 JSON header,
// then every tensor's values as little-endian doubles in header order.
struct Checkpoint {
  nlohmann::json meta = nlohmann::json::object();
  std::vector<std::pair<std::string, Matrix>> tensors;

  void Add(std::string name, const Matrix& m) {
    tensors.emplace_back(std::move(name), m);
  }
  // Throws DataError when absent.
  const Matrix& Get(std::string_view name) const;
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

void SaveCheckpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
// Throws DataError on a bad magic, version, header or truncated payload.
Checkpoint LoadCheckpoint(const std::filesystem::path& path);

nlohmann::json LayersToJson(const std::vector<LayerSpec>& layers);
std::vector<LayerSpec> LayersFromJson(const nlohmann::json& j);

// Copies the Mlp's parameters into / out of `ckpt` under `prefix`.
void SaveMlp(Mlp& mlp, const std::string& prefix, Checkpoint& ckpt);
Mlp LoadMlp(const Checkpoint& ckpt, const std::string& prefix);

}  // namespace lcgraph::ad

#endif  // LCGRAPH_NN_H_
