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

#include <omp.h>

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "dsamp/nn/adam.hpp"
#include "dsamp/nn/checkpoint.hpp"
#include "dsamp/nn/kernels.hpp"
#include "dsamp/nn/models.hpp"
#include "dsamp/nn/unet.hpp"
#include "testutil.hpp"

using namespace dsamp;
using namespace dsamp::nn;
using testutil::central_diff;
using testutil::close_rel;
using testutil::fill_uniform;

namespace {

struct ConvCase {
  int ci, co, h, w;
  Tensor x, wgt, bias;
  ConvCase(int ci_, int co_, int h_, int w_, int k, uint64_t seed)
      : ci(ci_), co(co_), h(h_), w(w_),
        x({ci_, h_, w_}), wgt({co_, ci_, k, k}), bias({co_, 1, 1}) {
    Rng rng(seed);
    fill_uniform(x, rng);
    fill_uniform(wgt, rng);
    fill_uniform(bias, rng);
  }
};

}  // namespace

TEST_CASE("conv3x3 parallel matches serial reference") {
  ConvCase c(3, 5, 9, 11, 3, 17);
  Tensor y_omp({c.co, c.h, c.w}), y_ser({c.co, c.h, c.w});
  kernels::conv3x3_forward(c.x.data(), c.wgt.data(), c.bias.data(), y_omp.data(),
                           c.ci, c.co, c.h, c.w);
  kernels::serial::conv3x3_forward(c.x.data(), c.wgt.data(), c.bias.data(),
                                   y_ser.data(), c.ci, c.co, c.h, c.w);
  for (size_t i = 0; i < y_omp.numel(); ++i)
    CHECK(close_rel(y_omp.v[i], y_ser.v[i], 1e-12, 1e-12));

  Rng rng(5);
  Tensor dy({c.co, c.h, c.w});
  fill_uniform(dy, rng);
  Tensor dx_o({c.ci, c.h, c.w}), dx_s({c.ci, c.h, c.w});
  kernels::conv3x3_backward_input(dy.data(), c.wgt.data(), dx_o.data(), c.ci,
                                  c.co, c.h, c.w);
  kernels::serial::conv3x3_backward_input(dy.data(), c.wgt.data(), dx_s.data(),
                                          c.ci, c.co, c.h, c.w);
  for (size_t i = 0; i < dx_o.numel(); ++i)
    CHECK(close_rel(dx_o.v[i], dx_s.v[i], 1e-12, 1e-12));

  Tensor dw_o({c.co, c.ci, 3, 3}), dw_s({c.co, c.ci, 3, 3});
  Tensor db_o({c.co, 1, 1}), db_s({c.co, 1, 1});
  kernels::conv3x3_backward_params(dy.data(), c.x.data(), dw_o.data(),
                                   db_o.data(), c.ci, c.co, c.h, c.w);
  kernels::serial::conv3x3_backward_params(dy.data(), c.x.data(), dw_s.data(),
                                           db_s.data(), c.ci, c.co, c.h, c.w);
  for (size_t i = 0; i < dw_o.numel(); ++i)
    CHECK(close_rel(dw_o.v[i], dw_s.v[i], 1e-12, 1e-12));
  for (size_t i = 0; i < db_o.numel(); ++i)
    CHECK(close_rel(db_o.v[i], db_s.v[i], 1e-12, 1e-12));
}

TEST_CASE("conv1x1 parallel matches serial reference") {
  ConvCase c(4, 3, 6, 7, 1, 23);
  Tensor y_omp({c.co, c.h, c.w}), y_ser({c.co, c.h, c.w});
  kernels::conv1x1_forward(c.x.data(), c.wgt.data(), c.bias.data(), y_omp.data(),
                           c.ci, c.co, c.h, c.w);
  kernels::serial::conv1x1_forward(c.x.data(), c.wgt.data(), c.bias.data(),
                                   y_ser.data(), c.ci, c.co, c.h, c.w);
  for (size_t i = 0; i < y_omp.numel(); ++i)
    CHECK(close_rel(y_omp.v[i], y_ser.v[i], 1e-12, 1e-12));
}

TEST_CASE("parallel kernels are bit-identical across thread counts") {
  ConvCase c(3, 4, 16, 20, 3, 99);
  Tensor y1({c.co, c.h, c.w}), y4({c.co, c.h, c.w});
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  kernels::conv3x3_forward(c.x.data(), c.wgt.data(), c.bias.data(), y1.data(),
                           c.ci, c.co, c.h, c.w);
  omp_set_num_threads(4);
  kernels::conv3x3_forward(c.x.data(), c.wgt.data(), c.bias.data(), y4.data(),
                           c.ci, c.co, c.h, c.w);
  omp_set_num_threads(saved);
  CHECK(std::memcmp(y1.data(), y4.data(), y1.numel() * sizeof(double)) == 0);
}

TEST_CASE("conv3x3 gradients match finite differences") {
  ConvCase c(2, 3, 5, 7, 3, 31);
  Rng rng(7);
  Tensor dy({c.co, c.h, c.w});
  fill_uniform(dy, rng);

  // Scalar objective: sum(dy .* conv(x, w, b)).
  auto objective = [&]() {
    Tensor y({c.co, c.h, c.w});
    kernels::serial::conv3x3_forward(c.x.data(), c.wgt.data(), c.bias.data(),
                                     y.data(), c.ci, c.co, c.h, c.w);
    double s = 0.0;
    for (size_t i = 0; i < y.numel(); ++i) s += dy.v[i] * y.v[i];
    return s;
  };

  Tensor dx({c.ci, c.h, c.w}), dw({c.co, c.ci, 3, 3}), db({c.co, 1, 1});
  kernels::conv3x3_backward_input(dy.data(), c.wgt.data(), dx.data(), c.ci,
                                  c.co, c.h, c.w);
  kernels::conv3x3_backward_params(dy.data(), c.x.data(), dw.data(), db.data(),
                                   c.ci, c.co, c.h, c.w);

  for (size_t i = 0; i < dx.numel(); i += 7)
    CHECK(close_rel(dx.v[i], central_diff(objective, c.x.v[i]), 1e-7));
  for (size_t i = 0; i < dw.numel(); i += 5)
    CHECK(close_rel(dw.v[i], central_diff(objective, c.wgt.v[i]), 1e-7));
  for (size_t i = 0; i < db.numel(); ++i)
    CHECK(close_rel(db.v[i], central_diff(objective, c.bias.v[i]), 1e-7));
}

TEST_CASE("maxpool2x2 forward picks maxima and routes gradients") {
  Tensor x({1, 2, 4});
  x.v = {1, 5, 2, 2,
         3, 4, 8, 7};
  Tensor y({1, 1, 2});
  std::vector<int> idx(2);
  kernels::maxpool2x2_forward(x.data(), y.data(), idx.data(), 1, 2, 4);
  CHECK(y.v[0] == 5);
  CHECK(y.v[1] == 8);

  Tensor dy({1, 1, 2});
  dy.v = {10, 20};
  Tensor dx({1, 2, 4});
  kernels::maxpool2x2_backward(dy.data(), idx.data(), dx.data(), 1, 2, 4);
  CHECK(dx.v[1] == 10);   // position of the 5
  CHECK(dx.v[6] == 20);   // position of the 8
  double total = 0;
  for (double v : dx.v) total += v;
  CHECK(total == 30);
}

TEST_CASE("upsample2x nearest forward/backward") {
  Tensor x({1, 1, 2});
  x.v = {3, 4};
  Tensor y({1, 2, 4});
  kernels::upsample2x_forward(x.data(), y.data(), 1, 1, 2);
  CHECK(y.v == std::vector<double>{3, 3, 4, 4, 3, 3, 4, 4});

  Tensor dy({1, 2, 4});
  dy.v = {1, 2, 3, 4, 5, 6, 7, 8};
  Tensor dx({1, 1, 2});
  kernels::upsample2x_backward(dy.data(), dx.data(), 1, 1, 2);
  CHECK(dx.v[0] == 1 + 2 + 5 + 6);
  CHECK(dx.v[1] == 3 + 4 + 7 + 8);
}

TEST_CASE("adam step matches the hand-computed update") {
  double w = 1.0, g = 0.5, m = 0.0, v = 0.0;
  kernels::adam_step(&w, &g, &m, &v, 1, 0.1, 0.9, 0.999, 1e-8, 0.9, 0.999, 1.0);
  CHECK(m == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(v == doctest::Approx(0.00025).epsilon(1e-12));
  const double expect = 1.0 - 0.1 * 0.5 / (0.5 + 1e-8);
  CHECK(w == doctest::Approx(expect).epsilon(1e-12));

  // grad_scale folds into the gradient before the moment updates.
  double w2 = 1.0, g2 = 1.0, m2 = 0.0, v2 = 0.0;
  kernels::adam_step(&w2, &g2, &m2, &v2, 1, 0.1, 0.9, 0.999, 1e-8, 0.9, 0.999, 0.5);
  CHECK(w2 == doctest::Approx(w).epsilon(1e-12));
}

TEST_CASE("unet preserves spatial shape and rejects bad input") {
  UNetConfig cfg;
  cfg.levels = 3;
  cfg.base_channels = 4;
  cfg.in_channels = 2;
  cfg.out_channels = 2;
  UNet net(cfg, 42);

  Rng rng(1);
  Tensor x({2, 16, 24});
  fill_uniform(x, rng);
  Tensor y = net.forward(x);
  CHECK(y.channels() == 2);
  CHECK(y.h() == 16);
  CHECK(y.w() == 24);

  Tensor bad({2, 12, 24});  // 12 not divisible by 8
  CHECK_THROWS_AS(net.forward(bad), ShapeError);
  Tensor wrong_c({3, 16, 24});
  CHECK_THROWS_AS(net.forward(wrong_c), ShapeError);
}

TEST_CASE("unet initialization is seed-deterministic") {
  UNetConfig cfg;
  cfg.levels = 3;
  cfg.base_channels = 4;
  UNet a(cfg, 7), b(cfg, 7), c(cfg, 8);
  CHECK(a.param_hash() == b.param_hash());
  CHECK(a.param_hash() != c.param_hash());
  CHECK_THROWS_AS(UNet(UNetConfig{.levels = 2}, 1), ConfigError);
}

TEST_CASE("unet backward matches finite differences") {
  UNetConfig cfg;
  cfg.levels = 3;
  cfg.base_channels = 2;
  cfg.in_channels = 2;
  cfg.out_channels = 1;
  UNet net(cfg, 3);

  Rng rng(11);
  Tensor x({2, 8, 16});
  fill_uniform(x, rng, 0.05, 1.0);
  Tensor w({1, 8, 16});
  fill_uniform(w, rng);

  auto objective = [&]() {
    UNet probe(cfg, 3);
    for (size_t pi = 0; pi < probe.params().size(); ++pi)
      *probe.params()[pi].value = *net.params()[pi].value;
    const Tensor y = probe.forward(x);
    double s = 0.0;
    for (size_t i = 0; i < y.numel(); ++i) s += w.v[i] * y.v[i];
    return s;
  };

  net.zero_grad();
  const Tensor y = net.forward(x);
  REQUIRE(y.numel() == w.numel());
  const Tensor dx = net.backward(w);

  int checked = 0;
  for (size_t i = 0; i < x.numel(); i += 13) {
    CHECK(close_rel(dx.v[i], central_diff(objective, x.v[i], 1e-6), 1e-5, 1e-7));
    ++checked;
  }
  CHECK(checked >= 9);

  // A few parameter gradients from assorted layers.
  auto params = net.params();
  for (size_t pi = 0; pi < params.size(); pi += 5) {
    double& slot = params[pi].value->v[0];
    CHECK(close_rel(params[pi].grad->v[0], central_diff(objective, slot, 1e-6),
                    1e-5, 1e-7));
  }
}

TEST_CASE("frozen nets pass input gradients but accumulate none") {
  UNetConfig cfg;
  cfg.levels = 3;
  cfg.base_channels = 2;
  UNet net(cfg, 5);
  Rng rng(2);
  Tensor x({1, 8, 8});
  fill_uniform(x, rng);
  Tensor dy({1, 8, 8});
  fill_uniform(dy, rng);

  net.set_frozen(true);
  net.zero_grad();
  net.forward(x);
  const Tensor dx = net.backward(dy);
  double dx_mag = 0.0, grad_mag = 0.0;
  for (double v : dx.v) dx_mag += std::abs(v);
  for (auto& p : net.params())
    for (double v : p.grad->v) grad_mag += std::abs(v);
  CHECK(dx_mag > 0.0);
  CHECK(grad_mag == 0.0);
}

TEST_CASE("adam optimizer drives a small net downhill") {
  UNetConfig cfg;
  cfg.levels = 3;
  cfg.base_channels = 2;
  UNet net(cfg, 9);
  Rng rng(4);
  Tensor x({1, 8, 8});
  fill_uniform(x, rng, 0.1, 1.0);
  const Tensor target = [] {
    Tensor t({1, 8, 8});
    std::fill(t.v.begin(), t.v.end(), 0.4);
    return t;
  }();

  Adam opt(net.params(), {.lr = 1e-2});
  auto loss_and_grad = [&]() {
    net.zero_grad();
    const Tensor y = net.forward(x);
    Tensor dy({1, 8, 8});
    double loss = 0.0;
    for (size_t i = 0; i < y.numel(); ++i) {
      const double d = y.v[i] - target.v[i];
      loss += d * d / y.numel();
      dy.v[i] = 2.0 * d / y.numel();
    }
    net.backward(dy);
    return loss;
  };

  const double first = loss_and_grad();
  double last = first;
  for (int i = 0; i < 50; ++i) {
    opt.step();
    last = loss_and_grad();
  }
  CHECK(last < 0.2 * first);
}

TEST_CASE("checkpoint round trip is bit exact and tag checked") {
  namespace fs = std::filesystem;
  const auto path = fs::temp_directory_path() / "dsamp_ckpt_test.bin";

  UNetConfig cfg;
  cfg.levels = 3;
  cfg.base_channels = 3;
  cfg.in_channels = 4;
  UNet net(cfg, 77);
  const uint64_t hash = net.param_hash();

  save_checkpoint(path.string(), snapshot_net("completion", net,
                                              {{"epoch", 3}, {"seed", 77}}));
  const Checkpoint ck = load_checkpoint_as(path.string(), "completion");
  CHECK(ck.meta.at("epoch") == 3);
  auto restored = restore_net(ck);
  CHECK(restored->param_hash() == hash);
  CHECK(restored->config() == cfg);

  CHECK_THROWS_AS(load_checkpoint_as(path.string(), "sampler"), ComponentError);

  // Truncation is detected.
  auto bytes = std::ifstream(path, std::ios::binary | std::ios::ate).tellg();
  {
    std::ifstream in(path, std::ios::binary);
    std::vector<char> buf(static_cast<size_t>(bytes) / 2);
    in.read(buf.data(), buf.size());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(buf.data(), buf.size());
  }
  CHECK_THROWS_AS(load_checkpoint(path.string()), FormatError);

  // Unknown schema version is rejected.
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    const std::string header = "{\"schema_version\":99,\"component\":\"x\",\"tensors\":[]}";
    out.write("DSCKPT01", 8);
    uint64_t len = header.size();
    for (int i = 0; i < 8; ++i) out.put(static_cast<char>(len >> (8 * i)));
    out.write(header.data(), header.size());
  }
  CHECK_THROWS_AS(load_checkpoint(path.string()), FormatError);
  fs::remove(path);
}

TEST_CASE("model wrappers enforce channel contracts") {
  UNetConfig cfg;
  cfg.levels = 3;
  cfg.base_channels = 2;
  cfg.in_channels = 1;
  SamplerNet sampler(cfg, 1);
  CHECK(sampler.net().config().out_channels == 2);

  Rng rng(6);
  Tensor prior({1, 8, 16});
  fill_uniform(prior, rng, 0.0, 1.0);
  ProbabilityMap p = sampler.forward(prior);
  CHECK(p.height == 8);
  CHECK(p.width == 16);
  for (double v : p.logits) CHECK(std::isfinite(v));

  cfg.in_channels = 4;
  PredNetModel prednet(cfg, 2, 100.0);
  CHECK(prednet.net().config().out_channels == 1);
  priors::PriorStack stack(4);
  for (int i = 0; i < 4; ++i)
    stack = stack.pushed(DepthMap::dense(8, 16, 5.0 + i));
  const DepthMap pred = prednet.predict(stack);
  CHECK(pred.height == 8);
  CHECK(pred.valid_count() == pred.pixel_count());
  for (double v : pred.values) CHECK(v >= 0.0);
}
