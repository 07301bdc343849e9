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

#include <cstdint>
#include <vector>

#include "dsamp/core/types.hpp"

namespace dsamp::io {

/// KITTI depth-completion convention: single-channel 16-bit PNG,
/// meters = raw / 256, raw 0 = no measurement.

/// Throws FormatError for anything but a 16-bit single-channel PNG.
DepthMap kitti_decode_depth(const std::vector<uint8_t>& png_bytes);

/// raw = round(value * 256) for valid pixels, 0 for invalid. Values must
/// stay below 65535/256 m (RangeError otherwise). Because raw 0 encodes
/// "invalid", valid values that round to raw 0 are stored as raw 1
/// (reported as 1/256 m), keeping validity exact and values within
/// 1/512 m + rounding of the true depth.
std::vector<uint8_t> kitti_encode_depth(const DepthMap& depth);

/// Hardened masks as 8-bit PNG: 0 = unsampled, 255 = sampled.
std::vector<uint8_t> encode_mask_png(const SampleMask& mask);
SampleMask decode_mask_png(const std::vector<uint8_t>& png_bytes);

}  // namespace dsamp::io
