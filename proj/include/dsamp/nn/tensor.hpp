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

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <vector>

#include "dsamp/core/error.hpp"

namespace dsamp::nn {

/// Dense row-major double tensor. Activations are (C,H,W), conv weights
/// (Co,Ci,K,K). Double precision throughout so finite-difference checks of
/// every gradient path are meaningful.
struct Tensor {
  std::vector<double> v;
  std::vector<int> shape;

  Tensor() = default;
  explicit Tensor(std::initializer_list<int> dims) { resize(dims); }

  static Tensor zeros(std::initializer_list<int> dims) { return Tensor(dims); }

  void resize(std::initializer_list<int> dims) {
    shape.assign(dims.begin(), dims.end());
    size_t n = 1;
    for (int d : shape) {
      if (d < 1) throw ShapeError("Tensor dims must be >= 1");
      n *= static_cast<size_t>(d);
    }
    v.assign(n, 0.0);
  }

  size_t numel() const { return v.size(); }
  int dim(size_t i) const { return shape[i]; }
  int channels() const { return shape.size() == 3 ? shape[0] : 1; }
  int h() const { return shape[shape.size() - 2]; }
  int w() const { return shape[shape.size() - 1]; }
  size_t plane() const { return static_cast<size_t>(h()) * w(); }

  double* data() { return v.data(); }
  const double* data() const { return v.data(); }

  double& at(int c, int y, int x) { return v[(static_cast<size_t>(c) * h() + y) * w() + x]; }
  double at(int c, int y, int x) const { return v[(static_cast<size_t>(c) * h() + y) * w() + x]; }

  void zero() { std::fill(v.begin(), v.end(), 0.0); }

  bool same_shape(const Tensor& o) const { return shape == o.shape; }

  double sum() const { return std::accumulate(v.begin(), v.end(), 0.0); }
};

/// Stack single-plane or multi-plane tensors along the channel axis.
Tensor concat_channels(const Tensor& a, const Tensor& b);

/// Inverse of concat_channels.
void split_channels(const Tensor& ab, int ca, Tensor& a, Tensor& b);

}  // namespace dsamp::nn
