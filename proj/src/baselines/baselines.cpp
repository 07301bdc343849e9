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

#include "dsamp/baselines/baselines.hpp"

#include <cmath>
#include <numeric>
#include <vector>

#include "dsamp/mask/mask_ops.hpp"

namespace dsamp::baselines {

SampleMask random_mask(int height, int width, const SamplingBudget& budget,
                       uint64_t seed) {
  budget.validate_for(height, width);
  SampleMask m(height, width, budget);
  m.hardened = true;
  const size_t n = m.pixel_count();
  std::vector<size_t> pool(n);
  std::iota(pool.begin(), pool.end(), size_t{0});
  Rng rng(seed);
  // Partial Fisher-Yates: only the first k draws are needed.
  for (int i = 0; i < budget.k; ++i) {
    const size_t j = i + rng.below(n - i);
    std::swap(pool[i], pool[j]);
    m.values[pool[i]] = 1.0;
  }
  return m;
}

SampleMask scanline_mask(int height, int width, const SamplingBudget& budget) {
  budget.validate_for(height, width);
  SampleMask m(height, width, budget);
  m.hardened = true;
  const int full_rows = budget.k / width;
  const int leftover = budget.k % width;
  const int rows = full_rows + (leftover > 0 ? 1 : 0);
  for (int i = 0; i < rows; ++i) {
    const int y = static_cast<int>(static_cast<long long>(i) * height / rows);
    const int span = (i < full_rows) ? width : leftover;
    for (int x = 0; x < span; ++x) m.values[m.idx(y, x)] = 1.0;
  }
  return m;
}

FixedMaskParams::FixedMaskParams(int height, int width, uint64_t seed_)
    : logits(height, width), seed(seed_) {
  Rng rng(seed_);
  const double stddev = 1.0 / std::sqrt(2.0);  // fan over the 2 channels, gain 1
  for (double& v : logits.logits) v = stddev * rng.normal();
}

SampleMask fixed_mask_forward(const FixedMaskParams& params,
                              const Temperature& temp) {
  return mask::soft_argmax(params.logits, temp);
}

}  // namespace dsamp::baselines
