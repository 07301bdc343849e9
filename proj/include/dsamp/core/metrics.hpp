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

namespace dsamp {

/// Element-wise product of a depth map with a sampling mask. Output pixels
/// are valid where the input is valid and the mask is strictly positive.
DepthMap apply_mask(const DepthMap& depth, const SampleMask& mask);

/// Root mean square error in meters over gt-valid pixels only.
/// Throws MetricError when gt has no valid pixel.
double rmse(const DepthMap& pred, const DepthMap& gt);

/// Mean absolute error in meters over gt-valid pixels only.
double mae(const DepthMap& pred, const DepthMap& gt);

/// Per-bin fractions of sampled depth values. bin_edges must be strictly
/// increasing with at least two entries; out-of-range samples are clamped
/// into the first/last bin so the fractions always sum to 1.
std::vector<double> depth_histogram(const std::vector<double>& samples,
                                    const std::vector<double>& bin_edges);

/// Clip to [0, max_range], divide by max_range. Invalid pixels map to 0.
DepthMap normalize_depth(const DepthMap& depth, double max_range);

/// Exact inverse of normalize_depth on valid in-range pixels.
DepthMap denormalize_depth(const DepthMap& normalized, double max_range);

}  // namespace dsamp
