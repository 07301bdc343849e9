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

#include "dsamp/core/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace dsamp {

DepthMap apply_mask(const DepthMap& depth, const SampleMask& mask) {
  if (depth.height != mask.height || depth.width != mask.width)
    throw ShapeError("apply_mask: depth and mask dimensions differ");
  DepthMap out(depth.height, depth.width);
  const size_t n = depth.pixel_count();
  for (size_t i = 0; i < n; ++i) {
    const bool v = depth.valid[i] != 0 && mask.values[i] > 0.0;
    out.values[i] = v ? depth.values[i] * mask.values[i] : 0.0;
    out.valid[i] = v ? 1 : 0;
  }
  return out;
}

namespace {

// Accumulate residual moments over gt-valid pixels.
template <typename F>
double masked_mean(const DepthMap& pred, const DepthMap& gt, F residual) {
  if (!pred.same_shape(gt)) throw ShapeError("metric: shape mismatch");
  double acc = 0.0;
  size_t count = 0;
  const size_t n = gt.pixel_count();
  for (size_t i = 0; i < n; ++i) {
    if (!gt.valid[i]) continue;
    acc += residual(pred.values[i] - gt.values[i]);
    ++count;
  }
  if (count == 0) throw MetricError("metric undefined: gt has no valid pixels");
  return acc / static_cast<double>(count);
}

}  // namespace

double rmse(const DepthMap& pred, const DepthMap& gt) {
  return std::sqrt(masked_mean(pred, gt, [](double r) { return r * r; }));
}

double mae(const DepthMap& pred, const DepthMap& gt) {
  return masked_mean(pred, gt, [](double r) { return std::abs(r); });
}

std::vector<double> depth_histogram(const std::vector<double>& samples,
                                    const std::vector<double>& bin_edges) {
  if (bin_edges.size() < 2) throw ConfigError("depth_histogram: need >= 2 bin edges");
  for (size_t i = 1; i < bin_edges.size(); ++i)
    if (!(bin_edges[i] > bin_edges[i - 1]))
      throw ConfigError("depth_histogram: bin edges must be strictly increasing");
  if (samples.empty()) throw MetricError("depth_histogram undefined for empty sample list");

  const size_t bins = bin_edges.size() - 1;
  std::vector<double> counts(bins, 0.0);
  for (double s : samples) {
    // Clamp out-of-range values into the outermost bins.
    size_t b;
    if (s < bin_edges.front()) {
      b = 0;
    } else if (s >= bin_edges.back()) {
      b = bins - 1;
    } else {
      b = static_cast<size_t>(
              std::upper_bound(bin_edges.begin(), bin_edges.end(), s) -
              bin_edges.begin()) - 1;
    }
    counts[b] += 1.0;
  }
  const double total = static_cast<double>(samples.size());
  for (double& c : counts) c /= total;
  return counts;
}

DepthMap normalize_depth(const DepthMap& depth, double max_range) {
  if (!(max_range > 0.0)) throw ConfigError("normalize_depth: max_range must be > 0");
  DepthMap out(depth.height, depth.width);
  const size_t n = depth.pixel_count();
  for (size_t i = 0; i < n; ++i) {
    if (!depth.valid[i]) continue;
    double v = depth.values[i];
    if (v < 0.0) v = 0.0;
    if (v > max_range) v = max_range;
    out.values[i] = v / max_range;
    out.valid[i] = 1;
  }
  return out;
}

DepthMap denormalize_depth(const DepthMap& normalized, double max_range) {
  if (!(max_range > 0.0)) throw ConfigError("denormalize_depth: max_range must be > 0");
  DepthMap out(normalized.height, normalized.width);
  const size_t n = normalized.pixel_count();
  for (size_t i = 0; i < n; ++i) {
    if (!normalized.valid[i]) continue;
    out.values[i] = normalized.values[i] * max_range;
    out.valid[i] = 1;
  }
  return out;
}

}  // namespace dsamp
