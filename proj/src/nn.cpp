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

#include "qttt/nn.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace qttt::nn {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::size_t product(const std::vector<std::size_t>& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

std::string shape_str(const std::vector<std::size_t>& shape) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) os << (i ? "," : "") << shape[i];
  os << ']';
  return os.str();
}

void fill_uniform(std::vector<double>& v, double bound, Rng& rng) {
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (double& x : v) x = dist(rng);
}

Tensor dense_forward(const Dense& d, const Tensor& x) {
  if (x.shape.size() != 1 || x.shape[0] != static_cast<std::size_t>(d.in)) {
    throw ShapeMismatch("dense layer expects [" + std::to_string(d.in) + "], got " +
                        shape_str(x.shape));
  }
  std::vector<double> y(d.bias);
  for (int o = 0; o < d.out; ++o) {
    const double* w = d.weight.data() + static_cast<std::size_t>(o) * d.in;
    double acc = 0.0;
    for (int i = 0; i < d.in; ++i) acc += w[i] * x.data[i];
    y[o] += acc;
  }
  return Tensor::vector(std::move(y));
}

Tensor conv_forward(const Conv3x3& c, const Tensor& x) {
  if (x.shape.size() != 3 || x.shape[0] != static_cast<std::size_t>(c.in_channels) ||
      x.shape[1] < 3 || x.shape[2] < 3) {
    throw ShapeMismatch("conv3x3 expects [" + std::to_string(c.in_channels) +
                        ",H>=3,W>=3], got " + shape_str(x.shape));
  }
  const std::size_t h = x.shape[1], w = x.shape[2];
  const std::size_t oh = h - 2, ow = w - 2;
  Tensor y = Tensor::zeros({static_cast<std::size_t>(c.out_channels), oh, ow});
  for (int o = 0; o < c.out_channels; ++o) {
    for (std::size_t r = 0; r < oh; ++r) {
      for (std::size_t s = 0; s < ow; ++s) {
        double acc = 0.0;
        for (int i = 0; i < c.in_channels; ++i) {
          const double* k = c.kernel.data() + (static_cast<std::size_t>(o) * c.in_channels + i) * 9;
          const double* in = x.data.data() + static_cast<std::size_t>(i) * h * w;
          for (int kr = 0; kr < 3; ++kr) {
            for (int kc = 0; kc < 3; ++kc) acc += k[kr * 3 + kc] * in[(r + kr) * w + s + kc];
          }
        }
        y.data[(o * oh + r) * ow + s] = acc;
      }
    }
  }
  return y;
}

}  // namespace

Tensor::Tensor(std::vector<std::size_t> shape_, std::vector<double> data_)
    : shape(std::move(shape_)), data(std::move(data_)) {
  if (product(shape) != data.size()) {
    throw ShapeMismatch("tensor shape " + shape_str(shape) + " does not match " +
                        std::to_string(data.size()) + " values");
  }
}

Tensor Tensor::vector(std::vector<double> values) {
  const std::size_t n = values.size();
  return Tensor({n}, std::move(values));
}

Tensor Tensor::zeros(std::vector<std::size_t> shape_) {
  const std::size_t n = product(shape_);
  return Tensor(std::move(shape_), std::vector<double>(n, 0.0));
}

Dense make_dense(int in, int out) {
  Dense d;
  d.in = in;
  d.out = out;
  d.weight.assign(static_cast<std::size_t>(in) * out, 0.0);
  d.bias.assign(out, 0.0);
  return d;
}

Conv3x3 make_conv3x3(int in_channels, int out_channels) {
  Conv3x3 c;
  c.in_channels = in_channels;
  c.out_channels = out_channels;
  c.kernel.assign(static_cast<std::size_t>(in_channels) * out_channels * 9, 0.0);
  return c;
}

void init_uniform(Network& net, Rng& rng) {
  for (Layer& layer : net.layers) {
    std::visit(Overloaded{
                   [&](Dense& d) {
                     const double k = 1.0 / std::sqrt(static_cast<double>(d.in));
                     fill_uniform(d.weight, k, rng);
                     fill_uniform(d.bias, k, rng);
                   },
                   [&](Conv3x3& c) {
                     const double k = 1.0 / std::sqrt(9.0 * c.in_channels);
                     fill_uniform(c.kernel, k, rng);
                   },
                   [](auto&) {},
               },
               layer);
  }
}

std::size_t param_count(const Layer& layer) {
  return std::visit(Overloaded{
                        [](const Dense& d) {
                          return static_cast<std::size_t>(d.in) * d.out + d.out;
                        },
                        [](const Conv3x3& c) {
                          return static_cast<std::size_t>(9) * c.in_channels * c.out_channels;
                        },
                        [](const auto&) { return std::size_t{0}; },
                    },
                    layer);
}

std::size_t param_count(const Network& net) {
  std::size_t n = 0;
  for (const Layer& l : net.layers) n += param_count(l);
  return n;
}

std::vector<std::span<double>> parameter_blocks(Network& net) {
  std::vector<std::span<double>> blocks;
  for (Layer& layer : net.layers) {
    std::visit(Overloaded{
                   [&](Dense& d) {
                     blocks.emplace_back(d.weight);
                     blocks.emplace_back(d.bias);
                   },
                   [&](Conv3x3& c) { blocks.emplace_back(c.kernel); },
                   [](auto&) {},
               },
               layer);
  }
  return blocks;
}

std::vector<std::span<const double>> parameter_blocks(const Network& net) {
  std::vector<std::span<const double>> blocks;
  for (const Layer& layer : net.layers) {
    std::visit(Overloaded{
                   [&](const Dense& d) {
                     blocks.emplace_back(d.weight);
                     blocks.emplace_back(d.bias);
                   },
                   [&](const Conv3x3& c) { blocks.emplace_back(c.kernel); },
                   [](const auto&) {},
               },
               layer);
  }
  return blocks;
}

ForwardCache forward(const Network& net, const Tensor& input) {
  ForwardCache cache;
  cache.layer_inputs.reserve(net.layers.size());
  Tensor x = input;
  for (const Layer& layer : net.layers) {
    cache.layer_inputs.push_back(x);
    x = std::visit(Overloaded{
                       [&](const Dense& d) { return dense_forward(d, x); },
                       [&](const Conv3x3& c) { return conv_forward(c, x); },
                       [&](const Tanh&) {
                         Tensor y = x;
                         for (double& v : y.data) v = std::tanh(v);
                         return y;
                       },
                       [&](const Flatten&) { return Tensor::vector(x.data); },
                   },
                   layer);
  }
  cache.output = std::move(x);
  return cache;
}

Tensor predict(const Network& net, const Tensor& input) { return forward(net, input).output; }

Gradients backward(const Network& net, const ForwardCache& cache, const Tensor& output_grad) {
  if (cache.layer_inputs.size() != net.layers.size()) {
    throw ShapeMismatch("forward cache does not belong to this network");
  }
  if (output_grad.shape != cache.output.shape) {
    throw ShapeMismatch("output gradient " + shape_str(output_grad.shape) +
                        " does not match output " + shape_str(cache.output.shape));
  }
  // Per-layer gradients are collected back to front and then reordered.
  std::vector<std::vector<std::vector<double>>> per_layer(net.layers.size());
  Tensor g = output_grad;
  for (std::size_t li = net.layers.size(); li-- > 0;) {
    const Tensor& x = cache.layer_inputs[li];
    std::visit(Overloaded{
                   [&](const Dense& d) {
                     std::vector<double> gw(d.weight.size(), 0.0);
                     std::vector<double> gx(d.in, 0.0);
                     for (int o = 0; o < d.out; ++o) {
                       const double go = g.data[o];
                       if (go == 0.0) continue;
                       const std::size_t row = static_cast<std::size_t>(o) * d.in;
                       for (int i = 0; i < d.in; ++i) {
                         gw[row + i] = go * x.data[i];
                         gx[i] += go * d.weight[row + i];
                       }
                     }
                     per_layer[li] = {std::move(gw), g.data};
                     g = Tensor::vector(std::move(gx));
                   },
                   [&](const Conv3x3& c) {
                     const std::size_t h = x.shape[1], w = x.shape[2];
                     const std::size_t oh = h - 2, ow = w - 2;
                     std::vector<double> gk(c.kernel.size(), 0.0);
                     Tensor gx = Tensor::zeros(x.shape);
                     for (int o = 0; o < c.out_channels; ++o) {
                       for (std::size_t r = 0; r < oh; ++r) {
                         for (std::size_t s = 0; s < ow; ++s) {
                           const double go = g.data[(o * oh + r) * ow + s];
                           if (go == 0.0) continue;
                           for (int i = 0; i < c.in_channels; ++i) {
                             const std::size_t kb = (static_cast<std::size_t>(o) * c.in_channels + i) * 9;
                             const std::size_t ib = static_cast<std::size_t>(i) * h * w;
                             for (int kr = 0; kr < 3; ++kr) {
                               for (int kc = 0; kc < 3; ++kc) {
                                 const std::size_t xi = ib + (r + kr) * w + s + kc;
                                 gk[kb + kr * 3 + kc] += go * x.data[xi];
                                 gx.data[xi] += go * c.kernel[kb + kr * 3 + kc];
                               }
                             }
                           }
                         }
                       }
                     }
                     per_layer[li] = {std::move(gk)};
                     g = std::move(gx);
                   },
                   [&](const Tanh&) {
                     Tensor gx = g;
                     for (std::size_t i = 0; i < gx.data.size(); ++i) {
                       const double t = std::tanh(x.data[i]);
                       gx.data[i] *= 1.0 - t * t;
                     }
                     g = std::move(gx);
                   },
                   [&](const Flatten&) { g = Tensor(x.shape, g.data); },
               },
               net.layers[li]);
  }
  Gradients out;
  for (auto& blocks : per_layer) {
    for (auto& b : blocks) out.params.push_back(std::move(b));
  }
  out.input = std::move(g);
  return out;
}

LossAndGrad huber(double prediction, double target, HuberParams params) {
  const double r = prediction - target;
  const double a = std::abs(r);
  if (a <= params.delta) return {0.5 * r * r, r};
  return {params.delta * (a - 0.5 * params.delta), r > 0 ? params.delta : -params.delta};
}

void adam_step(std::span<const std::span<double>> params,
               std::span<const std::vector<double>> grads, AdamState& state) {
  if (params.size() != grads.size()) {
    throw ShapeMismatch("adam: " + std::to_string(params.size()) + " parameter blocks but " +
                        std::to_string(grads.size()) + " gradient blocks");
  }
  if (state.first_moment.empty()) {
    for (const auto& p : params) {
      state.first_moment.emplace_back(p.size(), 0.0);
      state.second_moment.emplace_back(p.size(), 0.0);
    }
  }
  if (state.first_moment.size() != params.size()) {
    throw ShapeMismatch("adam: moment buffers do not match parameter blocks");
  }
  for (std::size_t b = 0; b < params.size(); ++b) {
    if (params[b].size() != grads[b].size() || state.first_moment[b].size() != params[b].size()) {
      throw ShapeMismatch("adam: block " + std::to_string(b) + " size mismatch");
    }
  }
  ++state.step;
  const AdamConfig& c = state.config;
  const double bc1 = 1.0 - std::pow(c.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(c.beta2, static_cast<double>(state.step));
  for (std::size_t b = 0; b < params.size(); ++b) {
    auto& m = state.first_moment[b];
    auto& v = state.second_moment[b];
    const auto& g = grads[b];
    auto p = params[b];
    for (std::size_t i = 0; i < p.size(); ++i) {
      m[i] = c.beta1 * m[i] + (1.0 - c.beta1) * g[i];
      v[i] = c.beta2 * v[i] + (1.0 - c.beta2) * g[i] * g[i];
      const double m_hat = m[i] / bc1;
      const double v_hat = v[i] / bc2;
      p[i] -= c.step_size * m_hat / (std::sqrt(v_hat) + c.epsilon);
    }
  }
}

std::string describe(const Layer& layer) {
  return std::visit(Overloaded{
                        [](const Dense& d) {
                          return "dense(" + std::to_string(d.in) + "," + std::to_string(d.out) + ")";
                        },
                        [](const Conv3x3& c) {
                          return "conv3x3(" + std::to_string(c.in_channels) + "," +
                                 std::to_string(c.out_channels) + ")";
                        },
                        [](const Tanh&) { return std::string("tanh"); },
                        [](const Flatten&) { return std::string("flatten"); },
                    },
                    layer);
}

}  // namespace qttt::nn
