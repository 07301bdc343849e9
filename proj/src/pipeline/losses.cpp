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

#include "dsamp/pipeline/losses.hpp"

#include <cmath>

#include "dsamp/core/error.hpp"

namespace dsamp::pipeline {

void LossWeights::validate() const {
  if (!std::isfinite(alpha) || alpha < 0.0)
    throw ConfigError("loss weight alpha must be finite and >= 0");
}

namespace {

void check_shapes(const DepthMap& a, const DepthMap& b) {
  if (a.height != b.height || a.width != b.width)
    throw ShapeError("depth map shapes differ");
}

}  // namespace

double task_loss(const DepthMap& pred, const DepthMap& gt) {
  check_shapes(pred, gt);
  double acc = 0.0;
  size_t n = 0;
  for (size_t i = 0; i < gt.values.size(); ++i) {
    if (!gt.valid[i]) continue;
    const double d = pred.values[i] - gt.values[i];
    acc += d * d;
    ++n;
  }
  if (n == 0) throw MetricError("task_loss: ground truth has no valid pixels");
  return acc / static_cast<double>(n);
}

double total_loss(double task, double sample, const LossWeights& weights) {
  weights.validate();
  if (!std::isfinite(task) || !std::isfinite(sample))
    throw NumericError("total_loss: non-finite loss term");
  return task + weights.alpha * sample;
}

double sampled_maps_loss(const DepthMap& new_sparse, const DepthMap& reference_sparse) {
  check_shapes(new_sparse, reference_sparse);
  double acc = 0.0;
  size_t n = 0;
  for (size_t i = 0; i < new_sparse.values.size(); ++i) {
    const bool va = new_sparse.valid[i] != 0;
    const bool vb = reference_sparse.valid[i] != 0;
    if (!va && !vb) continue;
    const double a = va ? new_sparse.values[i] : 0.0;
    const double b = vb ? reference_sparse.values[i] : 0.0;
    acc += std::abs(a - b);
    ++n;
  }
  return n == 0 ? 0.0 : acc / static_cast<double>(n);
}

double prednet_loss(const DepthMap& pred, const DepthMap& gt) {
  check_shapes(pred, gt);
  double acc = 0.0;
  size_t n = 0;
  for (size_t i = 0; i < gt.values.size(); ++i) {
    if (!gt.valid[i]) continue;
    acc += std::abs(pred.values[i] - gt.values[i]);
    ++n;
  }
  if (n == 0) throw MetricError("prednet_loss: ground truth has no valid pixels");
  return acc / static_cast<double>(n);
}

}  // namespace dsamp::pipeline
