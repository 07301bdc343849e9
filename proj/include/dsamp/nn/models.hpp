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

#include <memory>
#include <string>
#include <vector>

#include "dsamp/core/types.hpp"
#include "dsamp/nn/unet.hpp"
#include "dsamp/priors/priors.hpp"

namespace dsamp::nn {

/// Depth values as a (1,H,W) tensor; invalid pixels contribute 0.
Tensor depth_to_tensor(const DepthMap& d);

/// Dense all-valid depth map from plane 0 of a tensor.
DepthMap dense_depth_from_tensor(const Tensor& t);

/// Grayscale plane of an image as (1,H,W), mean of the RGB intensities.
Tensor image_to_gray(const Image& img);

/// Sampling-mask predictor: U-Net whose two output channels are read as
/// per-pixel sampling logits.
class SamplerNet {
 public:
  /// cfg.out_channels is forced to 2; cfg.in_channels is the number of
  /// prior maps the net consumes.
  SamplerNet(UNetConfig cfg, uint64_t seed);
  explicit SamplerNet(std::unique_ptr<UNet> backbone);

  /// prior: (in_channels,H,W), values normalized to [0,1].
  ProbabilityMap forward(const Tensor& prior);

  /// dlogits in ProbabilityMap layout for the last forward; returns
  /// d(prior).
  Tensor backward(const std::vector<double>& dlogits, bool param_grads = true);

  UNet& net() { return *net_; }
  const UNet& net() const { return *net_; }

 private:
  std::unique_ptr<UNet> net_;
  int last_h_ = 0, last_w_ = 0;
};

/// Predicts the current depth map from the b most recent reconstructions.
class PredNetModel {
 public:
  /// cfg.out_channels is forced to 1; cfg.in_channels = b.
  PredNetModel(UNetConfig cfg, uint64_t seed, double max_range);
  PredNetModel(std::unique_ptr<UNet> backbone, double max_range);

  int history() const { return net_->config().in_channels; }
  double max_range() const { return max_range_; }

  /// Normalized (b,H,W) input from a full stack, newest first.
  Tensor stack_to_tensor(const priors::PriorStack& past) const;

  /// Dense prediction, all pixels valid, clamped to >= 0 meters.
  DepthMap predict(const priors::PriorStack& past);

  UNet& net() { return *net_; }
  const UNet& net() const { return *net_; }

 private:
  std::unique_ptr<UNet> net_;
  double max_range_;
};

DepthMap prednet_forward(PredNetModel& net, const priors::PriorStack& past);

/// Pluggable depth-completion task: maps a (softly) masked depth signal
/// plus image to a dense depth map, and is differentiable with respect to
/// the masked signal so sampler gradients can flow through it while its own
/// parameters stay frozen.
class CompletionTask {
 public:
  virtual ~CompletionTask() = default;

  virtual std::string name() const = 0;
  virtual double max_range() const = 0;

  /// masked_norm: (1,H,W) normalized depth times mask value; mask_plane:
  /// (1,H,W) mask values. Returns the normalized dense prediction (1,H,W)
  /// and caches activations for backward_normalized.
  virtual Tensor forward_normalized(const Tensor& masked_norm,
                                    const Tensor& mask_plane,
                                    const Image& image) = 0;

  /// Backpropagates d(prediction), filling gradients for the two
  /// depth-carrying planes. Parameter gradients accumulate only when
  /// param_grads is true and the task is not frozen.
  virtual void backward_normalized(const Tensor& dpred, Tensor& dmasked,
                                   Tensor& dmask, bool param_grads) = 0;

  virtual std::vector<NamedParam> params() = 0;
  virtual void set_frozen(bool f) = 0;
  virtual bool frozen() const = 0;
  virtual uint64_t param_hash() const = 0;

  /// Domain-level pass: normalize the already-masked sparse input, run the
  /// net, denormalize. Output is dense (all pixels valid, >= 0 m).
  DepthMap complete(const DepthMap& sparse, const SampleMask& mask,
                    const Image& image);
};

/// Small U-Net completion baseline. Input channels: masked normalized
/// depth, mask, grayscale image, constant bias plane of ones.
class ReferenceCompletion : public CompletionTask {
 public:
  /// cfg.in_channels is forced to 4 and cfg.out_channels to 1.
  ReferenceCompletion(UNetConfig cfg, uint64_t seed, double max_range);
  ReferenceCompletion(std::unique_ptr<UNet> backbone, double max_range);

  std::string name() const override { return "reference_unet"; }
  double max_range() const override { return max_range_; }
  Tensor forward_normalized(const Tensor& masked_norm, const Tensor& mask_plane,
                            const Image& image) override;
  void backward_normalized(const Tensor& dpred, Tensor& dmasked, Tensor& dmask,
                           bool param_grads) override;
  std::vector<NamedParam> params() override { return net_->params(); }
  void set_frozen(bool f) override { net_->set_frozen(f); }
  bool frozen() const override { return net_->frozen(); }
  uint64_t param_hash() const override { return net_->param_hash(); }

  UNet& net() { return *net_; }
  const UNet& net() const { return *net_; }

 private:
  std::unique_ptr<UNet> net_;
  double max_range_;
};

}  // namespace dsamp::nn
