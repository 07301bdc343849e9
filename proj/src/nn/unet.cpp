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

#include "dsamp/nn/unet.hpp"

#include <cmath>
#include <cstring>

#include "dsamp/nn/kernels.hpp"

namespace dsamp::nn {

using namespace kernels;

Tensor concat_channels(const Tensor& a, const Tensor& b) {
  if (a.h() != b.h() || a.w() != b.w())
    throw ShapeError("concat_channels: spatial dims differ");
  Tensor out({a.channels() + b.channels(), a.h(), a.w()});
  std::memcpy(out.data(), a.data(), a.numel() * sizeof(double));
  std::memcpy(out.data() + a.numel(), b.data(), b.numel() * sizeof(double));
  return out;
}

void split_channels(const Tensor& ab, int ca, Tensor& a, Tensor& b) {
  const int cb = ab.channels() - ca;
  if (cb < 1 || ca < 1) throw ShapeError("split_channels: bad split point");
  a.resize({ca, ab.h(), ab.w()});
  b.resize({cb, ab.h(), ab.w()});
  std::memcpy(a.data(), ab.data(), a.numel() * sizeof(double));
  std::memcpy(b.data(), ab.data() + a.numel(), b.numel() * sizeof(double));
}

void UNetConfig::validate() const {
  if (levels < 3 || levels > 5) throw ConfigError("UNetConfig: levels must be in {3,4,5}");
  if (base_channels < 1) throw ConfigError("UNetConfig: base_channels must be >= 1");
  if (in_channels < 1 || out_channels < 1)
    throw ConfigError("UNetConfig: channel counts must be >= 1");
}

namespace detail {

void ConvLayer::init(int cin_, int cout_, int k_, Rng& rng) {
  cin = cin_;
  cout = cout_;
  k = k_;
  w.resize({cout, cin, k, k});
  b.resize({cout, 1, 1});
  gw.resize({cout, cin, k, k});
  gb.resize({cout, 1, 1});
  // Kaiming normal, fan-in over cin*k*k; ReLU gain for the 3x3 body convs,
  // gain 1 for the linear 1x1 head.
  const double gain = (k == 3) ? std::sqrt(2.0) : 1.0;
  const double stddev = gain / std::sqrt(static_cast<double>(cin) * k * k);
  for (double& x : w.v) x = stddev * rng.normal();
  b.zero();
}

Tensor ConvLayer::forward(const Tensor& x) {
  if (x.channels() != cin) throw ShapeError("conv: input channel mismatch");
  x_cache = x;
  Tensor y({cout, x.h(), x.w()});
  if (k == 3)
    conv3x3_forward(x.data(), w.data(), b.data(), y.data(), cin, cout, x.h(), x.w());
  else
    conv1x1_forward(x.data(), w.data(), b.data(), y.data(), cin, cout, x.h(), x.w());
  return y;
}

Tensor ConvLayer::backward(const Tensor& dy, bool param_grads) {
  const int h = x_cache.h(), wd = x_cache.w();
  if (param_grads) {
    if (k == 3)
      conv3x3_backward_params(dy.data(), x_cache.data(), gw.data(), gb.data(),
                              cin, cout, h, wd);
    else
      conv1x1_backward_params(dy.data(), x_cache.data(), gw.data(), gb.data(),
                              cin, cout, h, wd);
  }
  Tensor dx({cin, h, wd});
  if (k == 3)
    conv3x3_backward_input(dy.data(), w.data(), dx.data(), cin, cout, h, wd);
  else
    conv1x1_backward_input(dy.data(), w.data(), dx.data(), cin, cout, h, wd);
  return dx;
}

Tensor ReluOp::forward(const Tensor& x) {
  x_cache = x;
  Tensor y;
  y.resize({x.channels(), x.h(), x.w()});
  relu_forward(x.data(), y.data(), x.numel());
  return y;
}

Tensor ReluOp::backward(const Tensor& dy) {
  Tensor dx;
  dx.resize({x_cache.channels(), x_cache.h(), x_cache.w()});
  relu_backward(x_cache.data(), dy.data(), dx.data(), dy.numel());
  return dx;
}

Tensor PoolOp::forward(const Tensor& x) {
  c = x.channels();
  h = x.h();
  w = x.w();
  idx.resize(static_cast<size_t>(c) * (h / 2) * (w / 2));
  Tensor y({c, h / 2, w / 2});
  maxpool2x2_forward(x.data(), y.data(), idx.data(), c, h, w);
  return y;
}

Tensor PoolOp::backward(const Tensor& dy) {
  Tensor dx({c, h, w});
  maxpool2x2_backward(dy.data(), idx.data(), dx.data(), c, h, w);
  return dx;
}

Tensor UpOp::forward(const Tensor& x) {
  c = x.channels();
  h = x.h();
  w = x.w();
  Tensor y({c, 2 * h, 2 * w});
  upsample2x_forward(x.data(), y.data(), c, h, w);
  return y;
}

Tensor UpOp::backward(const Tensor& dy) {
  Tensor dx({c, h, w});
  upsample2x_backward(dy.data(), dx.data(), c, h, w);
  return dx;
}

void Block::init(int cin, int cmid, int cout, Rng& rng) {
  c1.init(cin, cmid, 3, rng);
  c2.init(cmid, cout, 3, rng);
}

Tensor Block::forward(const Tensor& x) {
  return r2.forward(c2.forward(r1.forward(c1.forward(x))));
}

Tensor Block::backward(const Tensor& dy, bool param_grads) {
  Tensor d = r2.backward(dy);
  d = c2.backward(d, param_grads);
  d = r1.backward(d);
  return c1.backward(d, param_grads);
}

}  // namespace detail

UNet::UNet(const UNetConfig& cfg, uint64_t seed) : cfg_(cfg) {
  cfg_.validate();
  Rng rng(seed);
  enc_.resize(cfg_.levels);
  pools_.resize(cfg_.levels);
  ups_.resize(cfg_.levels);
  dec_.resize(cfg_.levels);
  int cin = cfg_.in_channels;
  for (int i = 0; i < cfg_.levels; ++i) {
    const int c = cfg_.base_channels << i;
    enc_[i].init(cin, c, c, rng);
    skip_channels_.push_back(c);
    cin = c;
  }
  const int cb = cfg_.base_channels << cfg_.levels;
  bottleneck_.init(cin, cb, cb, rng);
  int cabove = cb;
  for (int i = cfg_.levels - 1; i >= 0; --i) {
    const int c = skip_channels_[i];
    dec_[i].init(c + cabove, c, c, rng);
    cabove = c;
  }
  head_.init(cfg_.base_channels, cfg_.out_channels, 1, rng);
}

Tensor UNet::forward(const Tensor& x) {
  if (x.shape.size() != 3 || x.channels() != cfg_.in_channels)
    throw ShapeError("UNet: expected (" + std::to_string(cfg_.in_channels) +
                     ",H,W) input");
  const int div = 1 << cfg_.levels;
  if (x.h() % div != 0 || x.w() % div != 0)
    throw ShapeError("UNet: H and W must be divisible by 2^levels");

  std::vector<Tensor> skips;
  Tensor cur = x;
  for (int i = 0; i < cfg_.levels; ++i) {
    Tensor e = enc_[i].forward(cur);
    cur = pools_[i].forward(e);
    skips.push_back(std::move(e));
  }
  cur = bottleneck_.forward(cur);
  for (int i = cfg_.levels - 1; i >= 0; --i) {
    Tensor up = ups_[i].forward(cur);
    cur = dec_[i].forward(concat_channels(skips[i], up));
  }
  return head_.forward(cur);
}

Tensor UNet::backward(const Tensor& dout, bool param_grads) {
  const bool pg = param_grads && !frozen_;
  Tensor d = head_.backward(dout, pg);
  std::vector<Tensor> skip_grads(cfg_.levels);
  for (int i = 0; i < cfg_.levels; ++i) {
    d = dec_[i].backward(d, pg);
    Tensor dskip, dup;
    split_channels(d, skip_channels_[i], dskip, dup);
    skip_grads[i] = std::move(dskip);
    d = ups_[i].backward(dup);
  }
  d = bottleneck_.backward(d, pg);
  for (int i = cfg_.levels - 1; i >= 0; --i) {
    d = pools_[i].backward(d);
    // Skip connections fan out, so gradients add.
    for (size_t j = 0; j < d.numel(); ++j) d.v[j] += skip_grads[i].v[j];
    d = enc_[i].backward(d, pg);
  }
  return d;
}

void UNet::zero_grad() {
  for (auto& p : params()) p.grad->zero();
}

std::vector<NamedParam> UNet::params() {
  std::vector<NamedParam> out;
  auto add = [&out](const std::string& prefix, detail::ConvLayer& c) {
    out.push_back({prefix + ".w", &c.w, &c.gw});
    out.push_back({prefix + ".b", &c.b, &c.gb});
  };
  auto add_block = [&add](const std::string& prefix, detail::Block& b) {
    add(prefix + ".c1", b.c1);
    add(prefix + ".c2", b.c2);
  };
  for (int i = 0; i < cfg_.levels; ++i) add_block("enc" + std::to_string(i), enc_[i]);
  add_block("bottleneck", bottleneck_);
  for (int i = 0; i < cfg_.levels; ++i) add_block("dec" + std::to_string(i), dec_[i]);
  add("head", head_);
  return out;
}

uint64_t fnv1a(const void* data, size_t bytes, uint64_t seed) {
  const auto* p = static_cast<const unsigned char*>(data);
  uint64_t h = seed;
  for (size_t i = 0; i < bytes; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

uint64_t UNet::param_hash() const {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (auto& p : const_cast<UNet*>(this)->params())
    h = fnv1a(p.value->data(), p.value->numel() * sizeof(double), h);
  return h;
}

}  // namespace dsamp::nn
