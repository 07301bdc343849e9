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

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "dsamp/core/error.hpp"

namespace dsamp {

/// H x W depth grid in meters with per-pixel validity. Invalid pixels hold
/// value 0, matching the KITTI sparse-depth convention where 0 means
/// "no measurement". The same type serves as ground truth, sparse input,
/// reconstruction and prediction.
struct DepthMap {
  int height = 0;
  int width = 0;
  std::vector<double> values;   // meters, >= 0; 0 wherever invalid
  std::vector<uint8_t> valid;   // 0 or 1 per pixel

  DepthMap() = default;
  DepthMap(int h, int w)
      : height(h), width(w),
        values(static_cast<size_t>(h) * w, 0.0),
        valid(static_cast<size_t>(h) * w, 0) {
    if (h < 1 || w < 1) throw ShapeError("DepthMap dimensions must be >= 1");
  }

  /// Fully valid map filled with a constant value.
  static DepthMap dense(int h, int w, double value = 0.0) {
    DepthMap m(h, w);
    std::fill(m.values.begin(), m.values.end(), value);
    std::fill(m.valid.begin(), m.valid.end(), uint8_t{1});
    return m;
  }

  size_t idx(int y, int x) const { return static_cast<size_t>(y) * width + x; }
  size_t pixel_count() const { return static_cast<size_t>(height) * width; }

  size_t valid_count() const {
    size_t n = 0;
    for (uint8_t v : valid) n += v;
    return n;
  }

  double valid_fraction() const {
    return static_cast<double>(valid_count()) / static_cast<double>(pixel_count());
  }

  /// Set one pixel, keeping the value/validity coupling intact.
  void set(int y, int x, double value, bool is_valid) {
    values[idx(y, x)] = is_valid ? value : 0.0;
    valid[idx(y, x)] = is_valid ? 1 : 0;
  }

  bool same_shape(const DepthMap& o) const {
    return height == o.height && width == o.width;
  }
};

/// RGB image stored as 8-bit HWC; intensity(y,x,c) exposes the [0,1] view.
struct Image {
  int height = 0;
  int width = 0;
  std::vector<uint8_t> rgb;  // height*width*3, row-major, interleaved

  Image() = default;
  Image(int h, int w) : height(h), width(w), rgb(static_cast<size_t>(h) * w * 3, 0) {}

  double intensity(int y, int x, int c) const {
    return rgb[(static_cast<size_t>(y) * width + x) * 3 + c] / 255.0;
  }
  void set_rgb(int y, int x, double r, double g, double b) {
    auto q = [](double v) {
      if (v < 0.0) v = 0.0;
      if (v > 1.0) v = 1.0;
      return static_cast<uint8_t>(v * 255.0 + 0.5);
    };
    size_t p = (static_cast<size_t>(y) * width + x) * 3;
    rgb[p] = q(r);
    rgb[p + 1] = q(g);
    rgb[p + 2] = q(b);
  }
};

/// One frame of a sequence: image + depth at integer timestamp t >= 0.
struct SequenceFrame {
  Image image;
  DepthMap depth;
  int timestamp = 0;
};

struct DepthSequence {
  std::string sequence_id;
  std::vector<SequenceFrame> frames;

  size_t length() const { return frames.size(); }
};

/// Target number of sampled points per frame.
struct SamplingBudget {
  int k = 1;

  /// 1 <= k <= H*W of the signal being sampled.
  void validate_for(int height, int width) const {
    if (k < 1) throw BudgetError("sampling budget k must be >= 1");
    if (static_cast<long long>(k) > static_cast<long long>(height) * width)
      throw BudgetError("sampling budget k exceeds pixel count");
  }
};

/// Pre-softmax sampling logits, two channels per pixel:
/// channel 0 = "not sampled", channel 1 = "sampled". Planar layout,
/// channel 0 first.
struct ProbabilityMap {
  int height = 0;
  int width = 0;
  std::vector<double> logits;  // 2 * height * width

  ProbabilityMap() = default;
  ProbabilityMap(int h, int w)
      : height(h), width(w), logits(2 * static_cast<size_t>(h) * w, 0.0) {}

  size_t plane() const { return static_cast<size_t>(height) * width; }
  double& at(int channel, int y, int x) {
    return logits[channel * plane() + static_cast<size_t>(y) * width + x];
  }
  double at(int channel, int y, int x) const {
    return logits[channel * plane() + static_cast<size_t>(y) * width + x];
  }
};

/// Soft (near-binary) or hardened binary sampling mask with its budget.
struct SampleMask {
  int height = 0;
  int width = 0;
  std::vector<double> values;  // in [0,1]; exactly {0,1} when hardened
  bool hardened = false;
  SamplingBudget budget;

  SampleMask() = default;
  SampleMask(int h, int w, SamplingBudget b)
      : height(h), width(w), values(static_cast<size_t>(h) * w, 0.0), budget(b) {}

  size_t idx(int y, int x) const { return static_cast<size_t>(y) * width + x; }
  size_t pixel_count() const { return static_cast<size_t>(height) * width; }

  size_t ones_count() const {
    size_t n = 0;
    for (double v : values) n += (v > 0.5) ? 1 : 0;
    return n;
  }
};

/// Sharpness of the soft argmax relaxation.
struct Temperature {
  double beta = 1.0;

  void validate() const {
    if (!(beta > 0.0)) throw ConfigError("temperature beta must be > 0");
  }
};

}  // namespace dsamp
