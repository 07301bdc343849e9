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

#include "dsamp/io/depth_codec.hpp"

#include <cmath>

#include "dsamp/io/png_io.hpp"

namespace dsamp::io {

DepthMap kitti_decode_depth(const std::vector<uint8_t>& png_bytes) {
  const Gray16 img = decode_gray16(png_bytes);
  DepthMap d(img.height, img.width);
  for (size_t i = 0; i < img.pixels.size(); ++i) {
    const uint16_t raw = img.pixels[i];
    d.values[i] = raw / 256.0;
    d.valid[i] = raw > 0 ? 1 : 0;
  }
  return d;
}

std::vector<uint8_t> kitti_encode_depth(const DepthMap& depth) {
  Gray16 img;
  img.height = depth.height;
  img.width = depth.width;
  img.pixels.resize(depth.pixel_count());
  for (size_t i = 0; i < img.pixels.size(); ++i) {
    if (!depth.valid[i]) {
      img.pixels[i] = 0;
      continue;
    }
    const double raw = std::round(depth.values[i] * 256.0);
    if (raw < 0.0 || raw > 65535.0)
      throw RangeError("depth value out of 16-bit KITTI range: " +
                       std::to_string(depth.values[i]) + " m");
    img.pixels[i] = raw == 0.0 ? uint16_t{1} : static_cast<uint16_t>(raw);
  }
  return encode_gray16(img);
}

std::vector<uint8_t> encode_mask_png(const SampleMask& mask) {
  if (!mask.hardened)
    throw FormatError("only hardened masks are serialized as PNG");
  std::vector<uint8_t> pixels(mask.pixel_count());
  for (size_t i = 0; i < pixels.size(); ++i)
    pixels[i] = mask.values[i] > 0.5 ? 255 : 0;
  return encode_gray8(mask.height, mask.width, pixels);
}

SampleMask decode_mask_png(const std::vector<uint8_t>& png_bytes) {
  int h = 0, w = 0;
  const std::vector<uint8_t> pixels = decode_gray8(png_bytes, h, w);
  SampleMask mask(h, w, SamplingBudget{});
  mask.hardened = true;
  int ones = 0;
  for (size_t i = 0; i < pixels.size(); ++i) {
    if (pixels[i] != 0 && pixels[i] != 255)
      throw FormatError("mask PNG contains a value other than 0/255");
    mask.values[i] = pixels[i] ? 1.0 : 0.0;
    ones += pixels[i] ? 1 : 0;
  }
  mask.budget.k = ones > 0 ? ones : 1;
  return mask;
}

}  // namespace dsamp::io
