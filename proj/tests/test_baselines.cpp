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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dsamp/baselines/baselines.hpp"
#include "dsamp/mask/mask_ops.hpp"

using namespace dsamp;
using namespace dsamp::baselines;

TEST_CASE("random mask hits the budget exactly and reproducibly") {
  const SampleMask a = random_mask(4, 4, SamplingBudget{5}, 11);
  CHECK(a.hardened);
  CHECK(a.ones_count() == 5);

  const SampleMask b = random_mask(4, 4, SamplingBudget{5}, 11);
  CHECK(a.values == b.values);
  const SampleMask c = random_mask(4, 4, SamplingBudget{5}, 12);
  CHECK(a.values != c.values);

  CHECK(random_mask(4, 4, SamplingBudget{16}, 1).ones_count() == 16);
  CHECK_THROWS_AS(random_mask(4, 4, SamplingBudget{17}, 1), BudgetError);

  // Budget holds across many draws.
  for (uint64_t seed = 0; seed < 40; ++seed)
    CHECK(random_mask(6, 9, SamplingBudget{13}, seed).ones_count() == 13);
}

TEST_CASE("scanline mask lays out evenly spaced rows") {
  const SampleMask two_rows = scanline_mask(4, 4, SamplingBudget{8});
  CHECK(two_rows.ones_count() == 8);
  for (int x = 0; x < 4; ++x) {
    CHECK(two_rows.values[two_rows.idx(0, x)] == 1.0);
    CHECK(two_rows.values[two_rows.idx(2, x)] == 1.0);
    CHECK(two_rows.values[two_rows.idx(1, x)] == 0.0);
    CHECK(two_rows.values[two_rows.idx(3, x)] == 0.0);
  }

  CHECK(scanline_mask(4, 4, SamplingBudget{16}).ones_count() == 16);

  const SampleMask one_row = scanline_mask(6, 8, SamplingBudget{8});
  CHECK(one_row.ones_count() == 8);
  for (int x = 0; x < 8; ++x) CHECK(one_row.values[one_row.idx(0, x)] == 1.0);

  // Budgets that are not multiples of the width still land exactly.
  for (int k = 1; k <= 54; ++k)
    CHECK(scanline_mask(6, 9, SamplingBudget{k}).ones_count() ==
          static_cast<size_t>(k));

  CHECK_THROWS_AS(scanline_mask(2, 2, SamplingBudget{5}), BudgetError);
}

TEST_CASE("fixed mask is input-independent and symmetric at zero logits") {
  FixedMaskParams params(8, 16, 3);
  const SampleMask m1 = fixed_mask_forward(params, Temperature{1.0});
  const SampleMask m2 = fixed_mask_forward(params, Temperature{1.0});
  CHECK(m1.values == m2.values);  // no frame enters the computation

  FixedMaskParams zero(4, 4, 0);
  for (double& v : zero.logits.logits) v = 0.7;
  for (double v : fixed_mask_forward(zero, Temperature{2.0}).values)
    CHECK(v == 0.5);

  // Same seed, same initialization; different seed differs.
  FixedMaskParams again(8, 16, 3), other(8, 16, 4);
  CHECK(again.logits.logits == params.logits.logits);
  CHECK(other.logits.logits != params.logits.logits);
  for (double v : params.logits.logits) CHECK(std::isfinite(v));
}
