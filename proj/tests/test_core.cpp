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

#include "dsamp/core/metrics.hpp"
#include "dsamp/core/rng.hpp"
#include "dsamp/core/types.hpp"

using namespace dsamp;

TEST_CASE("depth map keeps value/validity coupled") {
  DepthMap d(2, 3);
  CHECK(d.valid_count() == 0);
  d.set(0, 0, 5.0, true);
  d.set(1, 2, 7.0, false);
  CHECK(d.values[d.idx(1, 2)] == 0.0);
  CHECK(d.valid_count() == 1);
  CHECK(d.valid_fraction() == doctest::Approx(1.0 / 6.0));
  CHECK_THROWS_AS(DepthMap(0, 3), ShapeError);
}

TEST_CASE("sampling budget bounds") {
  SamplingBudget b{5};
  b.validate_for(2, 3);
  CHECK_THROWS_AS(SamplingBudget{0}.validate_for(2, 3), BudgetError);
  CHECK_THROWS_AS(SamplingBudget{7}.validate_for(2, 3), BudgetError);
  CHECK_THROWS_AS(Temperature{0.0}.validate(), ConfigError);
}

TEST_CASE("rng streams are seed-deterministic and split cleanly") {
  Rng a(123), b(123), c(124);
  for (int i = 0; i < 100; ++i) {
    CHECK(a.next() == b.next());
  }
  CHECK(a.next() != c.next());

  CHECK(Rng::split(1, 2, 3) != Rng::split(1, 3, 2));
  CHECK(Rng::split(1, 2) == Rng::split(1, 2));
  CHECK(Rng::split(1, 2) != Rng::split(2, 2));

  Rng d(7);
  for (int i = 0; i < 1000; ++i) {
    const uint64_t v = d.below(10);
    CHECK(v < 10);
    const double u = d.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }

  // Box-Muller sanity: mean near 0, variance near 1.
  Rng e(99);
  double sum = 0.0, sq = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double x = e.normal();
    sum += x;
    sq += x * x;
  }
  CHECK(std::abs(sum / n) < 0.03);
  CHECK(std::abs(sq / n - 1.0) < 0.05);
}

TEST_CASE("apply_mask multiplies values and intersects validity") {
  DepthMap d = DepthMap::dense(2, 2);
  d.values = {2, 4, 6, 8};
  SampleMask m(2, 2, SamplingBudget{2});
  m.values = {1, 0, 0, 1};
  m.hardened = true;

  const DepthMap out = apply_mask(d, m);
  CHECK(out.values == std::vector<double>{2, 0, 0, 8});
  CHECK(out.valid_count() == 2);

  // Idempotent for hardened masks.
  const DepthMap again = apply_mask(out, m);
  CHECK(again.values == out.values);
  CHECK(again.valid == out.valid);

  SampleMask wrong(3, 2, SamplingBudget{1});
  CHECK_THROWS_AS(apply_mask(d, wrong), ShapeError);
}

TEST_CASE("rmse and mae hand values") {
  DepthMap gt = DepthMap::dense(1, 3);
  gt.values = {1, 2, 5};
  DepthMap pred = DepthMap::dense(1, 3);
  pred.values = {1, 2, 3};

  CHECK(rmse(pred, gt) == doctest::Approx(std::sqrt(4.0 / 3.0)).epsilon(1e-12));
  // Residuals {0, 0, 2}: mean absolute error is 2/3, strictly below rmse.
  CHECK(mae(pred, gt) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(mae(pred, gt) < rmse(pred, gt));
  CHECK(rmse(gt, gt) == 0.0);

  DepthMap single(1, 3);
  single.set(0, 1, 4.0, true);
  DepthMap p2 = DepthMap::dense(1, 3);
  p2.values = {9, 2, 9};
  CHECK(rmse(p2, single) == doctest::Approx(2.0));
  CHECK(mae(p2, single) == doctest::Approx(2.0));

  DepthMap empty(1, 3);
  CHECK_THROWS_AS(rmse(pred, empty), MetricError);
}

TEST_CASE("metrics ignore gt-invalid pixels") {
  Rng rng(5);
  DepthMap gt(4, 4);
  for (int i = 0; i < 16; ++i)
    gt.set(i / 4, i % 4, rng.uniform(1, 50), i % 3 != 0);
  DepthMap pred = DepthMap::dense(4, 4, 10.0);
  const double r0 = rmse(pred, gt);
  for (int i = 0; i < 16; i += 3) pred.values[i] += 1000.0;  // gt-invalid slots
  CHECK(rmse(pred, gt) == r0);
}

TEST_CASE("rmse dominates mae on random pairs") {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    DepthMap gt(3, 5), pred(3, 5);
    for (int i = 0; i < 15; ++i) {
      gt.set(i / 5, i % 5, rng.uniform(0, 90), rng.below(4) != 0);
      pred.set(i / 5, i % 5, rng.uniform(0, 90), true);
    }
    if (gt.valid_count() == 0) continue;
    CHECK(rmse(pred, gt) >= mae(pred, gt));
  }
}

TEST_CASE("depth histogram hand values and clamping") {
  CHECK(depth_histogram({5, 5, 5}, {0, 10, 20}) == std::vector<double>{1.0, 0.0});
  CHECK(depth_histogram({5, 15}, {0, 10, 20}) == std::vector<double>{0.5, 0.5});
  CHECK(depth_histogram({1, 9, 11, 95}, {0, 10, 85, 100}) ==
        std::vector<double>{0.5, 0.25, 0.25});

  // Out-of-range samples land in the outermost bins.
  const auto h = depth_histogram({-5, 500}, {0, 10, 20});
  CHECK(h == std::vector<double>{0.5, 0.5});

  double total = 0.0;
  Rng rng(8);
  std::vector<double> samples;
  for (int i = 0; i < 500; ++i) samples.push_back(rng.uniform(-20, 140));
  for (double f : depth_histogram(samples, {0, 25, 50, 75, 100})) total += f;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));

  CHECK_THROWS_AS(depth_histogram({}, {0, 10}), MetricError);
  CHECK_THROWS_AS(depth_histogram({1.0}, {10, 0}), ConfigError);
  CHECK_THROWS_AS(depth_histogram({1.0}, {10}), ConfigError);
}

TEST_CASE("normalize/denormalize round trip") {
  DepthMap d = DepthMap::dense(1, 4);
  d.values = {0, 25, 100, 250};
  const DepthMap n = normalize_depth(d, 100.0);
  CHECK(n.values == std::vector<double>{0, 0.25, 1.0, 1.0});

  DepthMap in_range = DepthMap::dense(1, 3);
  in_range.values = {0.5, 42.0, 99.0};
  const DepthMap back = denormalize_depth(normalize_depth(in_range, 100.0), 100.0);
  for (int i = 0; i < 3; ++i)
    CHECK(back.values[i] == doctest::Approx(in_range.values[i]).epsilon(1e-9));

  DepthMap with_invalid(1, 2);
  with_invalid.set(0, 0, 50.0, true);
  const DepthMap ni = normalize_depth(with_invalid, 100.0);
  CHECK(ni.values[1] == 0.0);
  CHECK(ni.valid[1] == 0);

  CHECK_THROWS_AS(normalize_depth(d, 0.0), ConfigError);
}
