// Copyright 2026 The dsamp Authors
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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dsamp/core/rng.hpp"
#include "dsamp/nn/tensor.hpp"

namespace dsamp::nn {

struct UNetConfig {
  int levels = 4;         // number of contraction stages
  int base_channels = 16; // channels at the first level
  int in_channels = 1;
  int out_channels = 1;

  void validate() const;
  bool operator==(const UNetConfig&) const = default;
};

struct NamedParam {
  std::string name;
  Tensor* value;
  Tensor* grad;
};

namespace detail {

struct ConvLayer {
  int cin = 0, cout = 0, k = 3;
  Tensor w, b, gw, gb;
  Tensor x_cache;

  void init(int cin_, int cout_, int k_, Rng& rng);
  Tensor forward(const Tensor& x);
  Tensor backward(const Tensor& dy, bool param_grads);
};

struct ReluOp {
  Tensor x_cache;
  Tensor forward(const Tensor& x);
  Tensor backward(const Tensor& dy);
};

struct PoolOp {
  std::vector<int> idx;
  int c = 0, h = 0, w = 0;
  Tensor forward(const Tensor& x);
  Tensor backward(const Tensor& dy);
};

struct UpOp {
  int c = 0, h = 0, w = 0;
  Tensor forward(const Tensor& x);
  Tensor backward(const Tensor& dy);
};

// conv-relu-conv-relu
struct Block {
  ConvLayer c1, c2;
  ReluOp r1, r2;

  void init(int cin, int cmid, int cout, Rng& rng);
  Tensor forward(const Tensor& x);
  Tensor backward(const Tensor& dy, bool param_grads);
};

}  // namespace detail

/// Encoder-decoder with symmetric skip connections, manual backprop.
/// Spatial dimensions are preserved end to end; inputs must be divisible
/// by 2^levels in both dimensions.
class UNet {
 public:
  UNet(const UNetConfig& cfg, uint64_t seed);

  /// x is (in_channels, H, W); result is (out_channels, H, W).
  /// Caches activations for a subsequent backward().
  Tensor forward(const Tensor& x);

  /// Propagates dout back through the cached forward pass. Returns d(input).
  /// When param_grads is false only input gradients are computed, which is
  /// how gradients flow through a frozen network.
  Tensor backward(const Tensor& dout, bool param_grads = true);

  void zero_grad();
  std::vector<NamedParam> params();
  /// FNV-1a over all parameter bytes; used by freeze-contract checks.
  uint64_t param_hash() const;

  const UNetConfig& config() const { return cfg_; }

  bool frozen() const { return frozen_; }
  void set_frozen(bool f) { frozen_ = f; }

 private:
  UNetConfig cfg_;
  bool frozen_ = false;
  std::vector<detail::Block> enc_;
  std::vector<detail::PoolOp> pools_;
  detail::Block bottleneck_;
  std::vector<detail::UpOp> ups_;
  std::vector<detail::Block> dec_;
  detail::ConvLayer head_;  // 1x1 projection to out_channels
  std::vector<int> skip_channels_;
};

/// FNV-1a 64-bit over a byte range. Exposed for checkpoint/report use.
uint64_t fnv1a(const void* data, size_t bytes, uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace dsamp::nn
