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

#include <vector>

#include "dsamp/nn/unet.hpp"

namespace dsamp::nn {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Adam over a fixed set of named parameters. Moment buffers are allocated
/// per parameter on construction; the bound Tensor pointers must outlive
/// the optimizer.
class Adam {
 public:
  explicit Adam(std::vector<NamedParam> params, AdamConfig cfg = {});

  /// One update from the currently accumulated gradients. grad_scale is
  /// multiplied into each gradient (1/batch for accumulated minibatches).
  void step(double grad_scale = 1.0);

  int steps_taken() const { return t_; }
  const AdamConfig& config() const { return cfg_; }

 private:
  std::vector<NamedParam> params_;
  std::vector<Tensor> m_, v_;
  AdamConfig cfg_;
  int t_ = 0;
};

}  // namespace dsamp::nn
