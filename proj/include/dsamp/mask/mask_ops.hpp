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

#include <vector>

#include "dsamp/core/types.hpp"

namespace dsamp::mask {

/// Per-pixel two-channel softmax over the logits, read off as the
/// probability of channel 1 ("sampled"). Numerically evaluated as
/// logistic(beta * (l1 - l0)). Differentiable; hardened = false.
SampleMask soft_argmax(const ProbabilityMap& p, const Temperature& temp);

/// Accumulates d(loss)/d(logits) into dlogits (layout of
/// ProbabilityMap::logits) given d(loss)/d(mask values) and the soft mask
/// produced by soft_argmax with the same temperature.
void soft_argmax_backward(const SampleMask& soft, const Temperature& temp,
                          const std::vector<double>& dmask,
                          std::vector<double>& dlogits);

/// Sum of mask values; the differentiable surrogate for the sample count.
double mask_cardinality(const SampleMask& m);

/// |cardinality - k| / k. Zero exactly at the budget.
double sample_loss(const SampleMask& m, const SamplingBudget& budget);

/// d(sample_loss)/d(m[i]), identical for every pixel: sign(|M|-k)/k with
/// the subgradient at the kink taken as 0.
double sample_loss_grad(const SampleMask& m, const SamplingBudget& budget);

/// Exactly min(k, H*W) ones at the largest soft values; ties broken by
/// row-major pixel order (smaller linear index wins). k <= 0 gives an
/// all-zeros mask.
SampleMask harden_topk(const SampleMask& m, const SamplingBudget& budget);

/// Top-k restricted to pixels where sparse_gt is valid; selection walks the
/// same descending soft-value order as harden_topk and skips invalid
/// pixels, so the result has min(k, #valid) ones, all on valid pixels.
SampleMask sparse_budget_select(const DepthMap& sparse_gt, const SampleMask& m,
                                const SamplingBudget& budget);

}  // namespace dsamp::mask
