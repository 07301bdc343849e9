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

#include "dsamp/nn/models.hpp"

#include <cmath>
#include <cstring>
#include <utility>

#include "dsamp/core/metrics.hpp"

namespace dsamp::nn {

Tensor depth_to_tensor(const DepthMap& d) {
  Tensor t({1, d.height, d.width});
  std::memcpy(t.data(), d.values.data(), d.values.size() * sizeof(double));
  return t;
}

DepthMap dense_depth_from_tensor(const Tensor& t) {
  DepthMap d(t.h(), t.w());
  std::memcpy(d.values.data(), t.data(), d.values.size() * sizeof(double));
  std::fill(d.valid.begin(), d.valid.end(), uint8_t{1});
  return d;
}

Tensor image_to_gray(const Image& img) {
  Tensor t({1, img.height, img.width});
  double* p = t.data();
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      *p++ = (img.intensity(y, x, 0) + img.intensity(y, x, 1) +
              img.intensity(y, x, 2)) / 3.0;
  return t;
}

SamplerNet::SamplerNet(UNetConfig cfg, uint64_t seed) {
  cfg.out_channels = 2;
  net_ = std::make_unique<UNet>(cfg, seed);
}

SamplerNet::SamplerNet(std::unique_ptr<UNet> backbone)
    : net_(std::move(backbone)) {
  if (net_->config().out_channels != 2)
    throw ComponentError("SamplerNet backbone must have 2 output channels");
}

ProbabilityMap SamplerNet::forward(const Tensor& prior) {
  Tensor out = net_->forward(prior);
  last_h_ = out.h();
  last_w_ = out.w();
  ProbabilityMap p(out.h(), out.w());
  std::memcpy(p.logits.data(), out.data(), out.numel() * sizeof(double));
  for (double v : p.logits)
    if (!std::isfinite(v)) throw NumericError("sampler produced non-finite logit");
  return p;
}

Tensor SamplerNet::backward(const std::vector<double>& dlogits,
                            bool param_grads) {
  if (last_h_ == 0) throw TrainingError("SamplerNet::backward before forward");
  Tensor d({2, last_h_, last_w_});
  if (dlogits.size() != d.numel())
    throw ShapeError("SamplerNet::backward: gradient size mismatch");
  std::memcpy(d.data(), dlogits.data(), dlogits.size() * sizeof(double));
  return net_->backward(d, param_grads);
}

PredNetModel::PredNetModel(UNetConfig cfg, uint64_t seed, double max_range)
    : max_range_(max_range) {
  cfg.out_channels = 1;
  net_ = std::make_unique<UNet>(cfg, seed);
  if (max_range_ <= 0.0) throw ConfigError("PredNet max_range must be > 0");
}

PredNetModel::PredNetModel(std::unique_ptr<UNet> backbone, double max_range)
    : net_(std::move(backbone)), max_range_(max_range) {
  if (net_->config().out_channels != 1)
    throw ComponentError("PredNet backbone must have 1 output channel");
  if (max_range_ <= 0.0) throw ConfigError("PredNet max_range must be > 0");
}

Tensor PredNetModel::stack_to_tensor(const priors::PriorStack& past) const {
  if (past.size() != history())
    throw ShapeError("PredNet expects " + std::to_string(history()) +
                     " past maps, got " + std::to_string(past.size()));
  const int h = past.at(0).height, w = past.at(0).width;
  Tensor t({history(), h, w});
  for (int c = 0; c < history(); ++c) {
    const DepthMap n = normalize_depth(past.at(c), max_range_);
    std::memcpy(t.data() + c * t.plane(), n.values.data(),
                n.values.size() * sizeof(double));
  }
  return t;
}

DepthMap PredNetModel::predict(const priors::PriorStack& past) {
  const Tensor out = net_->forward(stack_to_tensor(past));
  DepthMap pred(out.h(), out.w());
  for (size_t i = 0; i < pred.values.size(); ++i) {
    pred.values[i] = std::max(0.0, out.v[i] * max_range_);
    pred.valid[i] = 1;
  }
  return pred;
}

DepthMap prednet_forward(PredNetModel& net, const priors::PriorStack& past) {
  return net.predict(past);
}

DepthMap CompletionTask::complete(const DepthMap& sparse, const SampleMask& mask,
                                  const Image& image) {
  if (sparse.height != image.height || sparse.width != image.width ||
      sparse.height != mask.height || sparse.width != mask.width)
    throw ShapeError("complete: input shapes differ");
  const DepthMap norm = normalize_depth(sparse, max_range());
  Tensor masked({1, sparse.height, sparse.width});
  Tensor mplane({1, sparse.height, sparse.width});
  std::memcpy(masked.data(), norm.values.data(), norm.values.size() * sizeof(double));
  std::memcpy(mplane.data(), mask.values.data(), mask.values.size() * sizeof(double));
  const Tensor out = forward_normalized(masked, mplane, image);
  DepthMap dense(out.h(), out.w());
  for (size_t i = 0; i < dense.values.size(); ++i) {
    dense.values[i] = std::max(0.0, out.v[i] * max_range());
    dense.valid[i] = 1;
  }
  return dense;
}

ReferenceCompletion::ReferenceCompletion(UNetConfig cfg, uint64_t seed,
                                         double max_range)
    : max_range_(max_range) {
  cfg.in_channels = 4;
  cfg.out_channels = 1;
  net_ = std::make_unique<UNet>(cfg, seed);
  if (max_range_ <= 0.0) throw ConfigError("completion max_range must be > 0");
}

ReferenceCompletion::ReferenceCompletion(std::unique_ptr<UNet> backbone,
                                         double max_range)
    : net_(std::move(backbone)), max_range_(max_range) {
  if (net_->config().in_channels != 4 || net_->config().out_channels != 1)
    throw ComponentError("completion backbone must map 4 channels to 1");
  if (max_range_ <= 0.0) throw ConfigError("completion max_range must be > 0");
}

Tensor ReferenceCompletion::forward_normalized(const Tensor& masked_norm,
                                               const Tensor& mask_plane,
                                               const Image& image) {
  const int h = masked_norm.h(), w = masked_norm.w();
  if (mask_plane.h() != h || mask_plane.w() != w || image.height != h ||
      image.width != w)
    throw ShapeError("completion input shapes differ");
  Tensor in({4, h, w});
  const size_t plane = in.plane();
  std::memcpy(in.data(), masked_norm.data(), plane * sizeof(double));
  std::memcpy(in.data() + plane, mask_plane.data(), plane * sizeof(double));
  const Tensor gray = image_to_gray(image);
  std::memcpy(in.data() + 2 * plane, gray.data(), plane * sizeof(double));
  std::fill(in.data() + 3 * plane, in.data() + 4 * plane, 1.0);
  return net_->forward(in);
}

void ReferenceCompletion::backward_normalized(const Tensor& dpred,
                                              Tensor& dmasked, Tensor& dmask,
                                              bool param_grads) {
  const Tensor din = net_->backward(dpred, param_grads);
  const size_t plane = din.plane();
  dmasked.resize({1, din.h(), din.w()});
  dmask.resize({1, din.h(), din.w()});
  std::memcpy(dmasked.data(), din.data(), plane * sizeof(double));
  std::memcpy(dmask.data(), din.data() + plane, plane * sizeof(double));
}

}  // namespace dsamp::nn
