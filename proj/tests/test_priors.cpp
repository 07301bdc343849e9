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

#include "dsamp/nn/models.hpp"
#include "dsamp/priors/priors.hpp"

using namespace dsamp;
using namespace dsamp::priors;

TEST_CASE("prior stack evicts oldest-first with value semantics") {
  PriorStack s(4);
  CHECK(s.size() == 0);
  CHECK_FALSE(s.full());

  const PriorStack s1 = s.pushed(DepthMap::dense(2, 2, 1.0));
  CHECK(s.size() == 0);  // original untouched
  CHECK(s1.size() == 1);

  PriorStack cur(4);
  for (int tag = 1; tag <= 5; ++tag)
    cur = push_reconstruction(cur, DepthMap::dense(2, 2, tag));
  CHECK(cur.size() == 4);
  CHECK(cur.full());
  CHECK(cur.at(0).values[0] == 5.0);
  CHECK(cur.at(1).values[0] == 4.0);
  CHECK(cur.at(2).values[0] == 3.0);
  CHECK(cur.at(3).values[0] == 2.0);

  CHECK_THROWS_AS(cur.pushed(DepthMap::dense(3, 2, 0.0)), ShapeError);
  CHECK_THROWS_AS(PriorStack(0), ConfigError);
}

TEST_CASE("prior mode names round trip") {
  for (auto mode : {PriorMode::none, PriorMode::lower_bound, PriorMode::prednet,
                    PriorMode::implicit})
    CHECK(prior_mode_from_string(to_string(mode)) == mode);
  CHECK_THROWS_AS(prior_mode_from_string("prior"), ConfigError);

  CHECK(prior_channels(PriorMode::lower_bound, 4) == 1);
  CHECK(prior_channels(PriorMode::prednet, 4) == 1);
  CHECK(prior_channels(PriorMode::implicit, 2) == 2);
  CHECK_THROWS_AS(prior_channels(PriorMode::none, 4), ConfigError);
}

TEST_CASE("make_prior assembles normalized mode-specific inputs") {
  const DepthMap gt = DepthMap::dense(2, 2, 25.0);
  PriorStack stack(2);

  // lower_bound: identity on GT up to normalization.
  const nn::Tensor lb = make_prior(PriorMode::lower_bound, stack, nullptr, &gt, 100.0);
  CHECK(lb.channels() == 1);
  for (double v : lb.v) CHECK(v == 0.25);

  // implicit: b channels, newest first, untouched stack.
  stack = stack.pushed(DepthMap::dense(2, 2, 10.0));
  CHECK_THROWS_AS(make_prior(PriorMode::implicit, stack, nullptr, nullptr, 100.0),
                  HistoryError);
  stack = stack.pushed(DepthMap::dense(2, 2, 50.0));
  const nn::Tensor imp = make_prior(PriorMode::implicit, stack, nullptr, nullptr, 100.0);
  CHECK(imp.channels() == 2);
  CHECK(imp.v[0] == 0.5);   // newest plane first
  CHECK(imp.v[4] == 0.1);
  CHECK(stack.size() == 2);

  // prednet: a full stack plus a model produce a single normalized plane.
  nn::UNetConfig cfg;
  cfg.levels = 3;
  cfg.base_channels = 2;
  cfg.in_channels = 2;
  nn::PredNetModel model(cfg, 5, 100.0);
  PriorStack wide(2);
  wide = wide.pushed(DepthMap::dense(8, 16, 20.0));
  CHECK_THROWS_AS(make_prior(PriorMode::prednet, wide, &model, nullptr, 100.0),
                  HistoryError);
  wide = wide.pushed(DepthMap::dense(8, 16, 22.0));
  const nn::Tensor pn = make_prior(PriorMode::prednet, wide, &model, nullptr, 100.0);
  CHECK(pn.channels() == 1);
  for (double v : pn.v) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }

  CHECK_THROWS_AS(make_prior(PriorMode::none, stack, nullptr, nullptr, 100.0),
                  ConfigError);
  CHECK_THROWS_AS(make_prior(PriorMode::lower_bound, stack, nullptr, nullptr, 100.0),
                  ConfigError);
}

TEST_CASE("reconstruction store is write-once per key") {
  ReconstructionStore store;
  store.put("seq_a", 0, DepthMap::dense(2, 2, 1.0));
  store.put("seq_a", 1, DepthMap::dense(2, 2, 2.0));
  store.put("seq_b", 0, DepthMap::dense(2, 2, 3.0));
  CHECK(store.size() == 3);
  CHECK(store.get("seq_a", 1).values[0] == 2.0);
  CHECK(store.find("seq_b", 9) == nullptr);
  CHECK_THROWS_AS(store.put("seq_a", 0, DepthMap::dense(2, 2, 9.0)), DataError);
  CHECK_THROWS_AS(store.get("zzz", 0), DataError);

  const auto keys = store.keys();
  REQUIRE(keys.size() == 3);
  CHECK(keys[0] == ReconstructionStore::Key{"seq_a", 0});
  CHECK(keys[2] == ReconstructionStore::Key{"seq_b", 0});
}
