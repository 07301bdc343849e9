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

#include "dsamp/core/types.hpp"

namespace dsamp::io {

/// Driving-style scene: flat ground plane under a pinhole camera, sky above
/// the horizon, fronto-parallel boxes that approach with ego motion and
/// drift laterally.
struct SyntheticSceneConfig {
  int height = 64;
  int width = 128;
  int num_boxes = 6;
  double ego_speed = 1.0;           // meters per frame toward the scene
  double object_speed_range = 0.3;  // lateral meters per frame, +/- uniform
  double cam_height = 1.5;          // meters above the ground plane
  double focal = 100.0;             // pixels
  int horizon_row = 20;             // image row of the vanishing line
  double max_range = 100.0;         // meters; also the sky depth
  uint64_t seed = 0;

  void validate() const;
};

/// Deterministic for a fixed config. Ground depth below the horizon follows
/// cam_height*focal/(v - horizon_row) clipped to max_range; rows at or
/// above the horizon read max_range. Every depth pixel is valid. The RGB
/// rendering carries scene structure (ground texture anchored to world
/// coordinates, per-box albedo, sky color) but no direct encoding of
/// absolute depth, so the image alone does not determine the depth map.
DepthSequence synth_generate(const SyntheticSceneConfig& cfg, int frames);

}  // namespace dsamp::io
