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

#include <cmath>

#include "dsamp/core/rng.hpp"
#include "dsamp/mask/mask_ops.hpp"
#include "testutil.hpp"

using namespace dsamp;
using namespace dsamp::mask;
using testutil::close_rel;

TEST_CASE("soft_argmax equals the two-term softmax oracle") {
  // Direct evaluation of c=1 probability mass, the 'oracle' form.
  auto oracle = [](double l0, double l1, double beta) {
    const double e0 = std::exp(beta * l0), e1 = std::exp(beta * l1);
    return e1 / (e0 + e1);
  };

  ProbabilityMap p(1, 1);
  p.at(0, 0, 0) = 0.0;
  p.at(1, 0, 0) = 2.0;
  SampleMask m = soft_argmax(p, Temperature{1.0});
  CHECK(m.values[0] == doctest::Approx(0.880797).epsilon(1e-6));
  CHECK(m.values[0] == doctest::Approx(oracle(0, 2, 1.0)).epsilon(1e-12));
  CHECK_FALSE(m.hardened);

  // Equal logits give exactly one half.
  ProbabilityMap eq(2, 3);
  for (double& v : eq.logits) v = 1.7;
  for (double v : soft_argmax(eq, Temperature{3.0}).values) CHECK(v == 0.5);

  // Saturation at large beta.
  CHECK(soft_argmax(p, Temperature{100.0}).values[0] == doctest::Approx(1.0).epsilon(1e-9));

  Rng rng(404);
  for (int trial = 0; trial < 1000; ++trial) {
    const double l0 = rng.uniform(-6, 6), l1 = rng.uniform(-6, 6);
    const double beta = std::vector<double>{0.5, 1.0, 4.0}[trial % 3];
    ProbabilityMap q(1, 1);
    q.at(0, 0, 0) = l0;
    q.at(1, 0, 0) = l1;
    const double got = soft_argmax(q, Temperature{beta}).values[0];
    CHECK(close_rel(got, oracle(l0, l1, beta), 1e-6, 1e-9));
    CHECK(got >= 0.0);
    CHECK(got <= 1.0);
  }

  ProbabilityMap bad(1, 1);
  bad.at(1, 0, 0) = std::nan("");
  CHECK_THROWS_AS(soft_argmax(bad, Temperature{1.0}), NumericError);
}

TEST_CASE("soft_argmax is monotone in the logit difference") {
  Rng rng(7);
  double prev = -1.0;
  for (double delta = -8.0; delta <= 8.0; delta += 0.25) {
    ProbabilityMap p(1, 1);
    p.at(0, 0, 0) = rng.uniform(-2, 2);
    p.at(1, 0, 0) = p.at(0, 0, 0) + delta;
    const double v = soft_argmax(p, Temperature{1.5}).values[0];
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("soft_argmax backward matches finite differences") {
  Rng rng(12);
  ProbabilityMap p(4, 6);
  for (double& v : p.logits) v = rng.uniform(-3, 3);
  const Temperature temp{1.3};
  std::vector<double> dmask(24);
  for (double& v : dmask) v = rng.uniform(-1, 1);

  auto objective = [&]() {
    const SampleMask m = soft_argmax(p, temp);
    double s = 0.0;
    for (size_t i = 0; i < m.values.size(); ++i) s += dmask[i] * m.values[i];
    return s;
  };

  const SampleMask m = soft_argmax(p, temp);
  std::vector<double> dlogits(p.logits.size(), 0.0);
  soft_argmax_backward(m, temp, dmask, dlogits);
  for (size_t i = 0; i < p.logits.size(); i += 5) {
    const double fd = testutil::central_diff(objective, p.logits[i]);
    CHECK(close_rel(dlogits[i], fd, 1e-6, 1e-9));
  }
}

TEST_CASE("mask cardinality and sample loss hand values") {
  SampleMask m(2, 2, SamplingBudget{2});
  m.values = {0.5, 0.5, 0.25, 0.75};
  CHECK(mask_cardinality(m) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(sample_loss(m, SamplingBudget{2}) == 0.0);

  SampleMask zeros(2, 2, SamplingBudget{2});
  CHECK(mask_cardinality(zeros) == 0.0);
  CHECK(sample_loss(zeros, SamplingBudget{2}) == 1.0);

  SampleMask full(2, 2, SamplingBudget{2});
  full.values = {1, 1, 1, 1};
  CHECK(sample_loss(full, SamplingBudget{2}) == 1.0);  // |M| = 2k

  SampleMask half(2, 2, SamplingBudget{2});
  half.values = {1, 0, 0, 0};
  CHECK(sample_loss(half, SamplingBudget{2}) == 0.5);  // |M| = k/2

  CHECK_THROWS_AS(sample_loss(m, SamplingBudget{0}), ConfigError);
}

TEST_CASE("sample loss gradient matches finite differences off the kink") {
  Rng rng(3);
  SampleMask m(3, 3, SamplingBudget{4});
  for (double& v : m.values) v = rng.uniform(0.0, 1.0);
  const SamplingBudget k{4};
  if (std::abs(mask_cardinality(m) - 4.0) < 1e-3) m.values[0] += 0.01;

  const double g = sample_loss_grad(m, k);
  auto objective = [&]() { return sample_loss(m, k); };
  for (size_t i = 0; i < m.values.size(); ++i) {
    const double fd = testutil::central_diff(objective, m.values[i], 1e-7);
    CHECK(close_rel(g, fd, 1e-4));
  }

  // Subgradient at the kink is defined as zero.
  SampleMask exact(1, 4, SamplingBudget{2});
  exact.values = {1, 1, 0, 0};
  CHECK(sample_loss_grad(exact, SamplingBudget{2}) == 0.0);
}

TEST_CASE("harden_topk obeys budget, ties and idempotence") {
  SampleMask m(2, 2, SamplingBudget{2});
  m.values = {0.9, 0.1, 0.4, 0.6};
  const SampleMask h = harden_topk(m, SamplingBudget{2});
  CHECK(h.hardened);
  CHECK(h.values == std::vector<double>{1, 0, 0, 1});

  // Already-binary input with matching k is a fixed point.
  const SampleMask again = harden_topk(h, SamplingBudget{2});
  CHECK(again.values == h.values);

  // k = 0 empties the mask.
  CHECK(harden_topk(m, SamplingBudget{0}).ones_count() == 0);

  // Row-major tie-break: the smaller linear index wins.
  SampleMask ties(1, 4, SamplingBudget{2});
  ties.values = {0.5, 0.5, 0.5, 0.5};
  CHECK(harden_topk(ties, SamplingBudget{2}).values ==
        std::vector<double>{1, 1, 0, 0});

  Rng rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    SampleMask r(5, 7, SamplingBudget{1});
    for (double& v : r.values) v = rng.uniform(0, 1);
    const int k = 1 + static_cast<int>(rng.below(40));
    const SampleMask hh = harden_topk(r, SamplingBudget{k});
    CHECK(hh.ones_count() == static_cast<size_t>(std::min(k, 35)));
    // Every selected value >= every unselected value.
    double min_sel = 2.0, max_unsel = -1.0;
    for (size_t i = 0; i < r.values.size(); ++i) {
      if (hh.values[i] > 0.5) min_sel = std::min(min_sel, r.values[i]);
      else max_unsel = std::max(max_unsel, r.values[i]);
    }
    if (max_unsel >= 0.0 && min_sel <= 1.0) CHECK(min_sel >= max_unsel);
  }
}

TEST_CASE("sparse_budget_select skips invalid pixels") {
  SampleMask m(1, 4, SamplingBudget{2});
  m.values = {0.9, 0.8, 0.7, 0.6};
  DepthMap gt(1, 4);
  gt.set(0, 1, 5.0, true);
  gt.set(0, 3, 9.0, true);
  const SampleMask sel = sparse_budget_select(gt, m, SamplingBudget{2});
  CHECK(sel.values == std::vector<double>{0, 1, 0, 1});

  // Fully valid GT degenerates to plain top-k.
  const DepthMap dense = DepthMap::dense(1, 4, 3.0);
  CHECK(sparse_budget_select(dense, m, SamplingBudget{2}).values ==
        harden_topk(m, SamplingBudget{2}).values);

  // No valid pixels -> empty mask.
  DepthMap none(1, 4);
  CHECK(sparse_budget_select(none, m, SamplingBudget{2}).ones_count() == 0);

  // Fewer valid pixels than budget -> all valid pixels selected.
  CHECK(sparse_budget_select(gt, m, SamplingBudget{4}).ones_count() == 2);
}

TEST_CASE("sparse_budget_select matches brute force on all 3x3 patterns") {
  // Oracle: enumerate pixels sorted by (value desc, index asc), filter to
  // valid, take k. Checked against every one of the 2^9 validity patterns.
  Rng rng(77);
  SampleMask m(3, 3, SamplingBudget{1});
  for (double& v : m.values) v = rng.uniform(0, 1);

  for (int pattern = 0; pattern < 512; ++pattern) {
    DepthMap gt(3, 3);
    for (int i = 0; i < 9; ++i)
      gt.set(i / 3, i % 3, 1.0, (pattern >> i) & 1);
    for (int k = 1; k <= 9; ++k) {
      const SampleMask got = sparse_budget_select(gt, m, SamplingBudget{k});

      std::vector<int> order(9);
      for (int i = 0; i < 9; ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (m.values[a] != m.values[b]) return m.values[a] > m.values[b];
        return a < b;
      });
      std::vector<double> expect(9, 0.0);
      int left = k;
      for (int i : order) {
        if (!gt.valid[i] || left == 0) continue;
        expect[i] = 1.0;
        --left;
      }
      CHECK(got.values == expect);
      size_t nvalid = gt.valid_count();
      CHECK(got.ones_count() == std::min<size_t>(k, nvalid));
      for (int i = 0; i < 9; ++i)
        if (got.values[i] > 0.5) CHECK(gt.valid[i] == 1);
    }
  }
}
