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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "dsamp/core/metrics.hpp"
#include "dsamp/core/rng.hpp"
#include "dsamp/io/dataset.hpp"
#include "dsamp/io/depth_codec.hpp"
#include "dsamp/io/png_io.hpp"
#include "dsamp/io/synth.hpp"

using namespace dsamp;
using namespace dsamp::io;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() /
                   ("dsamp_io_" + std::to_string(Rng(::getpid()).next()))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("kitti depth codec hand values") {
  DepthMap d(1, 3);
  d.set(0, 0, 0.0, false);
  d.set(0, 1, 1.0, true);
  d.set(0, 2, 48.2227, true);

  const DepthMap back = kitti_decode_depth(kitti_encode_depth(d));
  CHECK(back.valid[0] == 0);
  CHECK(back.values[0] == 0.0);
  CHECK(back.values[1] == 1.0);           // raw 256
  CHECK(back.values[2] == doctest::Approx(12345.0 / 256.0).epsilon(1e-12));
  CHECK(back.values[2] == doctest::Approx(48.22265625).epsilon(1e-12));
}

TEST_CASE("kitti codec round trips within quantization") {
  Rng rng(55);
  DepthMap d(16, 24);
  for (int i = 0; i < 16 * 24; ++i)
    d.set(i / 24, i % 24, rng.uniform(0.004, 250.0), rng.below(5) != 0);

  const std::vector<uint8_t> png = kitti_encode_depth(d);
  const DepthMap back = kitti_decode_depth(png);
  CHECK(back.height == 16);
  CHECK(back.valid == d.valid);
  for (size_t i = 0; i < d.values.size(); ++i)
    CHECK(std::abs(back.values[i] - d.values[i]) <= 1.0 / 512.0);

  // Already-quantized data re-encodes to the identical byte stream.
  CHECK(kitti_encode_depth(back) == png);

  DepthMap too_far = DepthMap::dense(1, 1, 65535.0 / 256.0 + 1.0);
  CHECK_THROWS_AS(kitti_encode_depth(too_far), RangeError);

  CHECK_THROWS_AS(kitti_decode_depth(encode_gray8(2, 2, {0, 0, 0, 0})), FormatError);
  CHECK_THROWS_AS(kitti_decode_depth({1, 2, 3}), FormatError);
}

TEST_CASE("mask png serializes hardened masks as 0/255") {
  SampleMask m(2, 3, SamplingBudget{2});
  m.values = {1, 0, 0, 0, 1, 0};
  m.hardened = true;
  const SampleMask back = decode_mask_png(encode_mask_png(m));
  CHECK(back.values == m.values);
  CHECK(back.hardened);

  SampleMask soft(2, 3, SamplingBudget{2});
  soft.values = {0.4, 0, 0, 0, 1, 0};
  CHECK_THROWS_AS(encode_mask_png(soft), FormatError);
}

TEST_CASE("rgb8 and gray16 png round trips") {
  Rng rng(9);
  Image img(5, 7);
  for (auto& b : img.rgb) b = static_cast<uint8_t>(rng.below(256));
  const Image back = decode_rgb8(encode_rgb8(img));
  CHECK(back.rgb == img.rgb);

  Gray16 g;
  g.height = 3;
  g.width = 4;
  for (int i = 0; i < 12; ++i) g.pixels.push_back(static_cast<uint16_t>(rng.below(65536)));
  const Gray16 gb = decode_gray16(encode_gray16(g));
  CHECK(gb.pixels == g.pixels);
}

TEST_CASE("synthetic scenes honor the pinhole ground model") {
  SyntheticSceneConfig cfg;
  cfg.height = 64;
  cfg.width = 128;
  cfg.num_boxes = 0;
  cfg.cam_height = 1.5;
  cfg.focal = 100.0;
  cfg.horizon_row = 20;
  cfg.seed = 1;

  const DepthSequence seq = synth_generate(cfg, 3);
  REQUIRE(seq.frames.size() == 3);
  const DepthMap& d = seq.frames[0].depth;

  CHECK(d.values[d.idx(40, 64)] == doctest::Approx(7.5).epsilon(1e-12));
  CHECK(d.values[d.idx(10, 3)] == 100.0);  // sky
  CHECK(d.valid_count() == d.pixel_count());
  for (double v : d.values) {
    CHECK(v > 0.0);
    CHECK(v <= cfg.max_range);
  }

  // Determinism.
  const DepthSequence seq2 = synth_generate(cfg, 3);
  CHECK(seq2.frames[2].depth.values == seq.frames[2].depth.values);
  CHECK(seq2.frames[2].image.rgb == seq.frames[2].image.rgb);

  // Static-scene ground depth never increases as the world approaches.
  for (size_t t = 1; t < seq.frames.size(); ++t)
    for (size_t i = 0; i < d.values.size(); ++i)
      CHECK(seq.frames[t].depth.values[i] <= seq.frames[t - 1].depth.values[i]);

  SyntheticSceneConfig bad = cfg;
  bad.horizon_row = 64;
  CHECK_THROWS_AS(synth_generate(bad, 1), ConfigError);
  CHECK_THROWS_AS(synth_generate(cfg, 0), ConfigError);
}

TEST_CASE("boxes occlude the ground and move with the scene") {
  SyntheticSceneConfig cfg;
  cfg.num_boxes = 5;
  cfg.seed = 3;
  const DepthSequence seq = synth_generate(cfg, 12);

  // Boxes only ever bring pixels nearer than the empty scene.
  SyntheticSceneConfig empty = cfg;
  empty.num_boxes = 0;
  const DepthSequence bare = synth_generate(empty, 12);
  size_t covered = 0;
  for (size_t t = 0; t < 12; ++t)
    for (size_t i = 0; i < seq.frames[t].depth.values.size(); ++i) {
      CHECK(seq.frames[t].depth.values[i] <= bare.frames[t].depth.values[i]);
      if (seq.frames[t].depth.values[i] < bare.frames[t].depth.values[i]) ++covered;
    }
  CHECK(covered > 100);  // scene is not empty
}

TEST_CASE("crop_frame anchors bottom-center") {
  SyntheticSceneConfig cfg;
  cfg.height = 16;
  cfg.width = 20;
  cfg.horizon_row = 4;
  cfg.num_boxes = 2;
  cfg.seed = 8;
  const SequenceFrame frame = synth_generate(cfg, 1).frames[0];

  const SequenceFrame same = crop_frame(frame, 16, 20);
  CHECK(same.depth.values == frame.depth.values);
  CHECK(same.image.rgb == frame.image.rgb);

  const SequenceFrame small = crop_frame(frame, 8, 10);
  // Rows 8..15, cols 5..14 of the source.
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 10; ++x) {
      CHECK(small.depth.values[small.depth.idx(y, x)] ==
            frame.depth.values[frame.depth.idx(8 + y, 5 + x)]);
      CHECK(small.image.rgb[(y * 10 + x) * 3] ==
            frame.image.rgb[(frame.depth.idx(8 + y, 5 + x)) * 3]);
    }

  CHECK_THROWS_AS(crop_frame(frame, 17, 20), ShapeError);
  CHECK_THROWS_AS(crop_frame(frame, 16, 21), ShapeError);

  // The KITTI-style crop arithmetic: 375x1242 to 256x1216.
  CHECK(375 - 256 == 119);
  CHECK((1242 - 1216) / 2 == 13);
}

TEST_CASE("manifest round trip validates files and counts") {
  TempDir tmp;
  SyntheticSceneConfig cfg;
  cfg.height = 16;
  cfg.width = 16;
  cfg.horizon_row = 5;
  cfg.num_boxes = 1;

  SplitSpec spec{"mini", 2, 3};
  const DatasetManifest written = generate_split(cfg, spec, 42, tmp.path.string());
  CHECK(written.sequences.size() == 2);

  const DatasetManifest loaded = load_manifest((tmp.path / "mini.json").string());
  CHECK(loaded.split == "mini");
  REQUIRE(loaded.sequences.size() == 2);
  CHECK(loaded.sequences[0].sequence_id == "mini_000");
  CHECK(loaded.sequences[0].frames.size() == 3);

  const DepthSequence seq = load_sequence(loaded.sequences[1], tmp.path.string());
  CHECK(seq.frames.size() == 3);
  CHECK(seq.frames[0].depth.height == 16);
  CHECK(seq.frames[0].depth.valid_count() == 256);

  // Jitter separates the per-sequence geometries.
  const DepthSequence seq0 = load_sequence(loaded.sequences[0], tmp.path.string());
  CHECK(seq0.frames[0].depth.values != seq.frames[0].depth.values);

  // A missing file is reported by name.
  fs::remove(tmp.path / loaded.sequences[0].frames[0].depth_path);
  CHECK_THROWS_AS(load_manifest((tmp.path / "mini.json").string()), DataError);
}

TEST_CASE("reconstruction store persists through kitti png files") {
  TempDir tmp;
  priors::ReconstructionStore store;
  Rng rng(31);
  DepthMap a(8, 8), b(8, 8);
  for (int i = 0; i < 64; ++i) {
    a.set(i / 8, i % 8, std::round(rng.uniform(0.1, 90.0) * 256.0) / 256.0, true);
    b.set(i / 8, i % 8, std::round(rng.uniform(0.1, 90.0) * 256.0) / 256.0,
          rng.below(3) != 0);
  }
  store.put("s0", 4, a);
  store.put("s0", 5, b);

  save_store(store, (tmp.path / "store").string());
  const priors::ReconstructionStore back = load_store((tmp.path / "store").string());
  CHECK(back.size() == 2);
  CHECK(back.get("s0", 4).values == a.values);
  CHECK(back.get("s0", 5).values == b.values);
  CHECK(back.get("s0", 5).valid == b.valid);
}
