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

#include <json.hpp>

#include "dsamp/core/types.hpp"
#include "dsamp/io/synth.hpp"
#include "dsamp/nn/unet.hpp"
#include "dsamp/priors/priors.hpp"

namespace dsamp::pipeline {

struct StageParams {
  int epochs = 1;
  int batch_size = 1;
  double learning_rate = 1e-3;
  double alpha = 0.0;              // budget-loss weight
  double sampled_maps_weight = 1.0;  // implicit-prior imitation term
  uint64_t seed = 0;               // 0 derives a stream from the run seed

  void validate(const std::string& stage_name) const;
};

struct SplitParams {
  std::string name;
  int num_sequences = 1;
  int frames_per_sequence = 1;
};

/// One config file drives every command; each command reads the sections
/// it needs. Mirrors the on-disk JSON schema exactly (schema_version 1).
struct RunConfig {
  int schema_version = 1;
  uint64_t seed = 1;
  std::string out_dir = "runs/out";

  io::SyntheticSceneConfig scene;
  std::vector<SplitParams> splits;
  std::string train_split = "train";
  std::string eval_split = "eval";
  std::string e2e_split = "e2e";

  SamplingBudget budget{1};
  Temperature temperature{1.0};

  nn::UNetConfig completion_arch;  // channel counts are fixed by the wrappers
  nn::UNetConfig sampler_arch;
  nn::UNetConfig prednet_arch;
  int prednet_history = 4;
  int implicit_history = 2;

  StageParams stage_completion;
  StageParams stage_sampler;
  StageParams stage_joint;
  StageParams stage_fixed;
  StageParams stage_prednet;
  StageParams stage_pseudo;
  priors::PriorMode sampler_prior = priors::PriorMode::prednet;
  double pseudo_fraction = 0.20;
  std::string completion_name = "completion_a";
  std::string mix_completion_b = "completion_b";

  int memory_size = 4;
  bool allow_memory_mismatch = false;  // permits memory_size > prednet_history
  bool allow_fresh = false;            // lets a stage start without its upstream checkpoint

  std::string data_dir() const { return out_dir + "/data"; }
  std::string ckpt_path(const std::string& name) const {
    return out_dir + "/ckpt/" + name + ".ckpt";
  }
  std::string store_dir(const std::string& name) const {
    return out_dir + "/store/" + name;
  }
  std::string trace_path(const std::string& name) const {
    return out_dir + "/traces/" + name + ".csv";
  }
  std::string report_dir() const { return out_dir + "/report"; }
  std::string resolved_dir() const { return out_dir + "/resolved"; }

  const SplitParams& split_named(const std::string& name) const;
  void validate() const;
};

/// Parses a config file. Read failures and malformed JSON are ConfigErrors.
nlohmann::json load_config_json(const std::string& path);

/// Strict mapping; unknown keys and type mismatches are ConfigErrors.
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& cfg);

/// Applies one `--set dotted.path=value` override. Values parse as JSON
/// literals when possible and fall back to strings.
void apply_override(nlohmann::json& j, const std::string& assignment);

uint64_t config_hash(const nlohmann::json& resolved);

/// Writes <out>/resolved/<command>.json with the full resolved config,
/// its hash, and the seed in effect. Every command calls this first.
void write_resolved_config(const RunConfig& cfg, const nlohmann::json& resolved,
                           const std::string& command);

/// Per-stage RNG stream: the stage's explicit seed, or a documented split
/// of the run seed by a fixed stage tag.
uint64_t stage_seed(const RunConfig& cfg, const StageParams& stage, uint64_t tag);

// Fixed stage tags for stage_seed.
inline constexpr uint64_t kSeedGenData = 1;
inline constexpr uint64_t kSeedCompletion = 2;
inline constexpr uint64_t kSeedSampler = 3;
inline constexpr uint64_t kSeedJoint = 4;
inline constexpr uint64_t kSeedFixed = 5;
inline constexpr uint64_t kSeedPredNet = 6;
inline constexpr uint64_t kSeedPseudo = 7;
inline constexpr uint64_t kSeedEval = 8;
inline constexpr uint64_t kSeedE2E = 9;
inline constexpr uint64_t kSeedMixMatch = 10;

}  // namespace dsamp::pipeline
