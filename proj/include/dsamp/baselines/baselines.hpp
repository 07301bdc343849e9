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

#include "dsamp/core/rng.hpp"
#include "dsamp/core/types.hpp"

namespace dsamp::baselines {

/// Exactly k ones placed uniformly at random without replacement.
/// Deterministic for a fixed seed.
SampleMask random_mask(int height, int width, const SamplingBudget& budget,
                       uint64_t seed);

/// Deterministic LiDAR-like pattern: floor(k/width) evenly spaced full
/// rows, with the k mod width leftover pixels filling the start of one more
/// evenly spaced row. Always exactly k ones.
SampleMask scanline_mask(int height, int width, const SamplingBudget& budget);

/// Free H*W*2 logit grid trained in place of the encoder-decoder sampler.
/// Produces the same mask for every input frame.
struct FixedMaskParams {
  ProbabilityMap logits;
  uint64_t seed = 0;

  /// Kaiming-normal initialization over the channel fan (fan = 2, gain 1).
  FixedMaskParams(int height, int width, uint64_t seed);
  FixedMaskParams() = default;
};

SampleMask fixed_mask_forward(const FixedMaskParams& params,
                              const Temperature& temp);

}  // namespace dsamp::baselines
