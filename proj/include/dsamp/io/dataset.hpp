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
#include "dsamp/io/synth.hpp"
#include "dsamp/priors/priors.hpp"

namespace dsamp::io {

/// Bottom-anchored, horizontally centered crop applied identically to image
/// and depth. Throws ShapeError when the target exceeds the source.
SequenceFrame crop_frame(const SequenceFrame& frame, int target_h, int target_w);

struct ManifestFrame {
  std::string image_path;  // relative to the manifest's directory
  std::string depth_path;
};

struct ManifestSequence {
  std::string sequence_id;
  std::vector<ManifestFrame> frames;
};

struct DatasetManifest {
  int schema_version = 1;
  std::string split;
  std::vector<ManifestSequence> sequences;
};

/// Validates schema_version, per-sequence frame counts and the existence of
/// every referenced file (paths resolved against the manifest's directory).
DatasetManifest load_manifest(const std::string& path);
void write_manifest(const DatasetManifest& m, const std::string& path);

/// Writes <dir>/<sequence_id>/img_NNNN.png + depth_NNNN.png and returns the
/// manifest entry with paths relative to base_dir.
ManifestSequence save_sequence(const DepthSequence& seq,
                               const std::string& base_dir);

DepthSequence load_sequence(const ManifestSequence& entry,
                            const std::string& base_dir);

/// One split of jittered synthetic sequences. Per-sequence geometry
/// (cam_height, focal, horizon_row) is perturbed so the image alone cannot
/// pin down absolute depth; seeds derive from the master seed by sequence
/// index. Writes frames plus "<split>.json" under base_dir.
struct SplitSpec {
  std::string name;
  int num_sequences = 0;
  int frames_per_sequence = 0;
};

DatasetManifest generate_split(const SyntheticSceneConfig& base,
                               const SplitSpec& spec, uint64_t master_seed,
                               const std::string& base_dir);

/// Reconstruction-store persistence: one KITTI-encoded PNG per entry plus
/// "store.json" listing the keys.
void save_store(const priors::ReconstructionStore& store,
                const std::string& dir);
priors::ReconstructionStore load_store(const std::string& dir);

}  // namespace dsamp::io
