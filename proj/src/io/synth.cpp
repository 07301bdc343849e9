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

#include "dsamp/io/synth.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "dsamp/core/rng.hpp"

namespace dsamp::io {

namespace {

struct Box {
  double z;       // meters ahead of the camera
  double x;       // lateral offset of the center, meters
  double w, h;    // extent in meters; base sits on the ground
  double vx;      // lateral speed, meters per frame
  double albedo[3];
};

Box spawn_box(Rng& rng, const SyntheticSceneConfig& cfg, bool initial) {
  Box b;
  b.z = initial ? rng.uniform(5.0, 40.0) : rng.uniform(25.0, 45.0);
  b.x = rng.uniform(-8.0, 8.0);
  b.w = rng.uniform(1.0, 4.0);
  b.h = rng.uniform(1.0, 3.0);
  b.vx = rng.uniform(-cfg.object_speed_range, cfg.object_speed_range);
  for (double& a : b.albedo) a = rng.uniform(0.2, 0.9);
  return b;
}

int clamp_index(double v, int n) {
  return std::clamp(static_cast<int>(std::floor(v)), 0, n - 1);
}

}  // namespace

void SyntheticSceneConfig::validate() const {
  if (height < 8 || width < 8)
    throw ConfigError("scene dimensions must be at least 8x8");
  if (horizon_row < 0 || horizon_row >= height)
    throw ConfigError("horizon_row must lie inside the image");
  if (!(focal > 0.0)) throw ConfigError("focal must be > 0");
  if (!(cam_height > 0.0)) throw ConfigError("cam_height must be > 0");
  if (!(max_range > 0.0)) throw ConfigError("max_range must be > 0");
  if (num_boxes < 0) throw ConfigError("num_boxes must be >= 0");
  if (!(ego_speed >= 0.0)) throw ConfigError("ego_speed must be >= 0");
  if (!(object_speed_range >= 0.0))
    throw ConfigError("object_speed_range must be >= 0");
}

DepthSequence synth_generate(const SyntheticSceneConfig& cfg, int frames) {
  cfg.validate();
  if (frames < 1) throw ConfigError("frame count must be >= 1");

  Rng rng(cfg.seed);
  std::vector<Box> boxes;
  boxes.reserve(cfg.num_boxes);
  for (int i = 0; i < cfg.num_boxes; ++i) boxes.push_back(spawn_box(rng, cfg, true));

  DepthSequence seq;
  seq.frames.reserve(frames);

  for (int t = 0; t < frames; ++t) {
    SequenceFrame frame;
    frame.timestamp = t;
    frame.depth = DepthMap(cfg.height, cfg.width);
    frame.image = Image(cfg.height, cfg.width);
    const double cam_z = t * cfg.ego_speed;  // world position of the camera

    for (int v = 0; v < cfg.height; ++v) {
      const bool sky = v <= cfg.horizon_row;
      const double zg =
          sky ? cfg.max_range
              : std::min(cfg.max_range,
                         cfg.cam_height * cfg.focal / (v - cfg.horizon_row));
      for (int u = 0; u < cfg.width; ++u) {
        frame.depth.set(v, u, zg, true);
        if (sky) {
          frame.image.set_rgb(v, u, 0.55, 0.70, 0.90);
        } else {
          // Checker texture pinned to the world so ego motion scrolls it.
          const double zr = cfg.cam_height * cfg.focal / (v - cfg.horizon_row);
          const double xw = (u - cfg.width / 2.0 + 0.5) * zr / cfg.focal;
          const double zw = zr + cam_z;
          const long long tile = static_cast<long long>(std::floor(xw / 2.0)) +
                                 static_cast<long long>(std::floor(zw / 2.0));
          const double a = (tile % 2 == 0) ? 0.52 : 0.34;
          frame.image.set_rgb(v, u, a * 0.9, a, a * 0.72);
        }
      }
    }

    // Painter's algorithm, far to near; boxes are fronto-parallel planes.
    std::vector<const Box*> order;
    for (const Box& b : boxes) order.push_back(&b);
    std::stable_sort(order.begin(), order.end(),
                     [](const Box* a, const Box* b) { return a->z > b->z; });
    for (const Box* b : order) {
      const double z = std::min(b->z, cfg.max_range);
      const double v_bottom = cfg.horizon_row + cfg.focal * cfg.cam_height / b->z;
      const double v_top =
          cfg.horizon_row + cfg.focal * (cfg.cam_height - b->h) / b->z;
      const double u_c = cfg.width / 2.0 + cfg.focal * b->x / b->z;
      const double u_half = cfg.focal * (b->w / 2.0) / b->z;
      if (v_bottom < 0 || v_top > cfg.height - 1) continue;
      if (u_c + u_half < 0 || u_c - u_half > cfg.width - 1) continue;
      const int v0 = clamp_index(v_top, cfg.height);
      const int v1 = clamp_index(v_bottom, cfg.height);
      const int u0 = clamp_index(u_c - u_half, cfg.width);
      const int u1 = clamp_index(u_c + u_half, cfg.width);
      for (int v = v0; v <= v1; ++v)
        for (int u = u0; u <= u1; ++u) {
          if (z >= frame.depth.values[frame.depth.idx(v, u)]) continue;
          frame.depth.set(v, u, z, true);
          frame.image.set_rgb(v, u, b->albedo[0], b->albedo[1], b->albedo[2]);
        }
    }

    seq.frames.push_back(std::move(frame));

    for (Box& b : boxes) {
      b.z -= cfg.ego_speed;
      b.x += b.vx;
      if (b.z < 2.0) b = spawn_box(rng, cfg, false);
    }
  }
  return seq;
}

}  // namespace dsamp::io
