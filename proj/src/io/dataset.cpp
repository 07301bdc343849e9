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

#include "dsamp/io/dataset.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "dsamp/core/rng.hpp"
#include "dsamp/io/depth_codec.hpp"
#include "dsamp/io/png_io.hpp"

namespace dsamp::io {

namespace fs = std::filesystem;
using nlohmann::json;

SequenceFrame crop_frame(const SequenceFrame& frame, int target_h, int target_w) {
  const int h = frame.depth.height, w = frame.depth.width;
  if (target_h < 1 || target_w < 1 || target_h > h || target_w > w)
    throw ShapeError("crop target exceeds source dimensions");
  const int y0 = h - target_h;
  const int x0 = (w - target_w) / 2;

  SequenceFrame out;
  out.timestamp = frame.timestamp;
  out.depth = DepthMap(target_h, target_w);
  out.image = Image(target_h, target_w);
  for (int y = 0; y < target_h; ++y)
    for (int x = 0; x < target_w; ++x) {
      const size_t src = frame.depth.idx(y0 + y, x0 + x);
      out.depth.values[out.depth.idx(y, x)] = frame.depth.values[src];
      out.depth.valid[out.depth.idx(y, x)] = frame.depth.valid[src];
      for (int c = 0; c < 3; ++c)
        out.image.rgb[(static_cast<size_t>(y) * target_w + x) * 3 + c] =
            frame.image.rgb[src * 3 + c];
    }
  return out;
}

namespace {

std::string frame_name(const char* stem, int t) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s_%04d.png", stem, t);
  return buf;
}

json manifest_to_json(const DatasetManifest& m) {
  json seqs = json::array();
  for (const auto& s : m.sequences) {
    json frames = json::array();
    for (const auto& f : s.frames)
      frames.push_back({{"image", f.image_path}, {"depth", f.depth_path}});
    seqs.push_back({{"sequence_id", s.sequence_id},
                    {"frame_count", s.frames.size()},
                    {"frames", frames}});
  }
  return {{"schema_version", m.schema_version}, {"split", m.split},
          {"sequences", seqs}};
}

}  // namespace

void write_manifest(const DatasetManifest& m, const std::string& path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw DataError("cannot open manifest for writing: " + path);
  os << manifest_to_json(m).dump(2) << "\n";
  if (!os) throw DataError("manifest write failed: " + path);
}

DatasetManifest load_manifest(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open manifest: " + path);
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw FormatError("manifest is not valid JSON: " + path + ": " + e.what());
  }
  DatasetManifest m;
  m.schema_version = j.value("schema_version", -1);
  if (m.schema_version != 1)
    throw FormatError("unknown manifest schema_version in " + path);
  m.split = j.value("split", "");
  const fs::path base = fs::path(path).parent_path();
  for (const auto& s : j.at("sequences")) {
    ManifestSequence seq;
    seq.sequence_id = s.at("sequence_id").get<std::string>();
    const size_t declared = s.at("frame_count").get<size_t>();
    for (const auto& f : s.at("frames")) {
      ManifestFrame mf;
      mf.image_path = f.at("image").get<std::string>();
      mf.depth_path = f.at("depth").get<std::string>();
      for (const std::string& rel : {mf.image_path, mf.depth_path})
        if (!fs::exists(base / rel))
          throw DataError("manifest references a missing file: " +
                          (base / rel).string());
      seq.frames.push_back(std::move(mf));
    }
    if (seq.frames.size() != declared)
      throw DataError("manifest frame_count mismatch for sequence " +
                      seq.sequence_id);
    m.sequences.push_back(std::move(seq));
  }
  return m;
}

ManifestSequence save_sequence(const DepthSequence& seq,
                               const std::string& base_dir) {
  const fs::path dir = fs::path(base_dir) / seq.sequence_id;
  fs::create_directories(dir);
  ManifestSequence entry;
  entry.sequence_id = seq.sequence_id;
  for (const auto& frame : seq.frames) {
    ManifestFrame mf;
    mf.image_path = (fs::path(seq.sequence_id) /
                     frame_name("img", frame.timestamp)).string();
    mf.depth_path = (fs::path(seq.sequence_id) /
                     frame_name("depth", frame.timestamp)).string();
    write_bytes((fs::path(base_dir) / mf.image_path).string(),
                encode_rgb8(frame.image));
    write_bytes((fs::path(base_dir) / mf.depth_path).string(),
                kitti_encode_depth(frame.depth));
    entry.frames.push_back(std::move(mf));
  }
  return entry;
}

DepthSequence load_sequence(const ManifestSequence& entry,
                            const std::string& base_dir) {
  DepthSequence seq;
  seq.sequence_id = entry.sequence_id;
  int t = 0;
  for (const auto& mf : entry.frames) {
    SequenceFrame frame;
    frame.image = decode_rgb8(read_bytes((fs::path(base_dir) / mf.image_path).string()));
    frame.depth = kitti_decode_depth(read_bytes((fs::path(base_dir) / mf.depth_path).string()));
    frame.timestamp = t++;
    seq.frames.push_back(std::move(frame));
  }
  return seq;
}

DatasetManifest generate_split(const SyntheticSceneConfig& base,
                               const SplitSpec& spec, uint64_t master_seed,
                               const std::string& base_dir) {
  if (spec.num_sequences < 0 || spec.frames_per_sequence < 1)
    throw ConfigError("split needs >= 0 sequences of >= 1 frames");
  fs::create_directories(base_dir);
  DatasetManifest m;
  m.split = spec.name;
  for (int i = 0; i < spec.num_sequences; ++i) {
    const uint64_t seq_seed = Rng::split(master_seed, static_cast<uint64_t>(i));
    Rng jitter(Rng::mix(seq_seed ^ 0x9e3779b97f4a7c15ULL));
    SyntheticSceneConfig cfg = base;
    cfg.seed = seq_seed;
    cfg.cam_height = base.cam_height * jitter.uniform(0.8, 1.2);
    cfg.focal = base.focal * jitter.uniform(0.85, 1.15);
    cfg.horizon_row = base.horizon_row +
                      static_cast<int>(jitter.below(7)) - 3;  // +/- 3 rows
    char id[64];
    std::snprintf(id, sizeof(id), "%s_%03d", spec.name.c_str(), i);
    DepthSequence seq = synth_generate(cfg, spec.frames_per_sequence);
    seq.sequence_id = id;
    m.sequences.push_back(save_sequence(seq, base_dir));
  }
  write_manifest(m, (fs::path(base_dir) / (spec.name + ".json")).string());
  return m;
}

void save_store(const priors::ReconstructionStore& store,
                const std::string& dir) {
  fs::create_directories(dir);
  json entries = json::array();
  for (const auto& [seq_id, t] : store.keys()) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "_%04d.png", t);
    const std::string file = seq_id + buf;
    write_bytes((fs::path(dir) / file).string(),
                kitti_encode_depth(store.get(seq_id, t)));
    entries.push_back({{"sequence_id", seq_id}, {"frame", t}, {"path", file}});
  }
  std::ofstream os(fs::path(dir) / "store.json", std::ios::trunc);
  if (!os) throw DataError("cannot write store manifest in " + dir);
  os << json{{"schema_version", 1}, {"entries", entries}}.dump(2) << "\n";
}

priors::ReconstructionStore load_store(const std::string& dir) {
  std::ifstream is(fs::path(dir) / "store.json");
  if (!is) throw DataError("cannot open store manifest in " + dir);
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw FormatError(std::string("store manifest is not valid JSON: ") + e.what());
  }
  if (j.value("schema_version", -1) != 1)
    throw FormatError("unknown store schema_version in " + dir);
  priors::ReconstructionStore store;
  for (const auto& e : j.at("entries")) {
    const auto path = fs::path(dir) / e.at("path").get<std::string>();
    store.put(e.at("sequence_id").get<std::string>(), e.at("frame").get<int>(),
              kitti_decode_depth(read_bytes(path.string())));
  }
  return store;
}

}  // namespace dsamp::io
