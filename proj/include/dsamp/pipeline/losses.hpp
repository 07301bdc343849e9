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

#include "dsamp/core/types.hpp"

namespace dsamp::pipeline {

struct LossWeights {
  double alpha = 0.0;  // weight of the budget term in the total loss

  void validate() const;
};

/// Mean squared error over gt-valid pixels. Callers pass depth on the
/// normalized scale; the function itself is scale-agnostic.
double task_loss(const DepthMap& pred, const DepthMap& gt);

/// task + alpha * sample. Throws NumericError on non-finite inputs.
double total_loss(double task, double sample, const LossWeights& weights);

/// Mean absolute difference over the union of both maps' valid pixels,
/// treating a pixel absent from one map as 0 there. An empty union is 0.
double sampled_maps_loss(const DepthMap& new_sparse, const DepthMap& reference_sparse);

/// Mean absolute error over gt-valid pixels, normalized scale.
double prednet_loss(const DepthMap& pred, const DepthMap& gt);

}  // namespace dsamp::pipeline
