// Copyright 2026 The qttt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// A deliberately small neural-network toolkit: dense layers, valid 3x3
// convolution, tanh, flatten, Huber loss and Adam. Single-sample forward and
// reverse-mode passes only.

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qttt/common.hpp"

namespace qttt::nn {

struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> data;

  Tensor() = default;
  Tensor(std::vector<std::size_t> shape_, std::vector<double> data_);
  static Tensor vector(std::vector<double> values);
  static Tensor zeros(std::vector<std::size_t> shape_);

  std::size_t size() const { return data.size(); }
};

// Fully connected, with bias. Weight is row-major [out][in].
struct Dense {
  int in = 0;
  int out = 0;
  std::vector<double> weight;
  std::vector<double> bias;
};

// Valid 3x3 convolution, stride 1, no bias. Kernel is [out][in][3][3];
// input is [in][H][W] and output [out][H-2][W-2].
struct Conv3x3 {
  int in_channels = 0;
  int out_channels = 0;
  std::vector<double> kernel;
};

struct Tanh {};
struct Flatten {};

using Layer = std::variant<Dense, Conv3x3, Tanh, Flatten>;

struct Network {
  std::vector<Layer> layers;
};

Dense make_dense(int in, int out);
Conv3x3 make_conv3x3(int in_channels, int out_channels);

// Uniform in [-k, k] with k = 1/sqrt(fan_in); biases use the same bound.
void init_uniform(Network& net, Rng& rng);

std::size_t param_count(const Layer& layer);
std::size_t param_count(const Network& net);

// Mutable views over every parameter array, in declaration order (a dense
// layer contributes weight then bias).
std::vector<std::span<double>> parameter_blocks(Network& net);
std::vector<std::span<const double>> parameter_blocks(const Network& net);

struct ForwardCache {
  std::vector<Tensor> layer_inputs;  // one per layer
  Tensor output;
};

// Throws ShapeMismatch when the input does not fit the first layer.
ForwardCache forward(const Network& net, const Tensor& input);
Tensor predict(const Network& net, const Tensor& input);

struct Gradients {
  // Shaped like parameter_blocks().
  std::vector<std::vector<double>> params;
  Tensor input;
};

Gradients backward(const Network& net, const ForwardCache& cache, const Tensor& output_grad);

struct HuberParams {
  double delta = 1.0;
};

struct LossAndGrad {
  double loss = 0.0;
  double grad = 0.0;  // d loss / d prediction
};

LossAndGrad huber(double prediction, double target, HuberParams params = {});

struct AdamConfig {
  double step_size = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  AdamConfig config;
  std::vector<std::vector<double>> first_moment;
  std::vector<std::vector<double>> second_moment;
  long long step = 0;
};

// Standard bias-corrected Adam update. Moment buffers are created on the
// first call; afterwards their shapes must match. Throws ShapeMismatch.
void adam_step(std::span<const std::span<double>> params,
               std::span<const std::vector<double>> grads, AdamState& state);

std::string describe(const Layer& layer);

}  // namespace qttt::nn
