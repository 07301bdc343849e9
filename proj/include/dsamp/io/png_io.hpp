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
#include <string>
#include <vector>

#include "dsamp/core/types.hpp"

namespace dsamp::io {

/// Single-channel 16-bit grid, host byte order.
struct Gray16 {
  int height = 0;
  int width = 0;
  std::vector<uint16_t> pixels;
};

// All encoders use pinned libpng settings (fixed compression level, filter
// NONE, no ancillary chunks), so encoding given pixels always yields the
// same bytes and decode/encode round trips of our own files are
// byte-identical.

std::vector<uint8_t> encode_gray16(const Gray16& img);
Gray16 decode_gray16(const std::vector<uint8_t>& bytes);

std::vector<uint8_t> encode_gray8(int height, int width,
                                  const std::vector<uint8_t>& pixels);
std::vector<uint8_t> decode_gray8(const std::vector<uint8_t>& bytes,
                                  int& height, int& width);

std::vector<uint8_t> encode_rgb8(const Image& img);
Image decode_rgb8(const std::vector<uint8_t>& bytes);

void write_bytes(const std::string& path, const std::vector<uint8_t>& bytes);
std::vector<uint8_t> read_bytes(const std::string& path);

}  // namespace dsamp::io
