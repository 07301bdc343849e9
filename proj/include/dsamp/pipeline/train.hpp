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

#include <string>
#include <vector>

#include "dsamp/baselines/baselines.hpp"
#include "dsamp/io/dataset.hpp"
#include "dsamp/nn/models.hpp"
#include "dsamp/pipeline/config.hpp"
#include "dsamp/priors/priors.hpp"

namespace dsamp::pipeline {

struct LoadedSplit {
  io::DatasetManifest manifest;
  std::vector<DepthSequence> sequences;

  size_t frame_count() const;
};

/// Loads every sequence of a split into memory. The manifest must exist
/// (run data generation first); a missing manifest is a ConfigError.
LoadedSplit load_split(const RunConfig& cfg, const std::string& split_name);

struct EpochStats {
  double task = 0.0;       // mean task loss over steps
  double sample = 0.0;     // mean budget loss
  double extra = 0.0;      // mean auxiliary loss (imitation term, predictor L1)
  double total = 0.0;
  double soft_card = 0.0;  // mean soft mask cardinality, 0 where not applicable
  int steps = 0;
  int skipped = 0;
};

struct TrainResult {
  std::vector<EpochStats> epochs;
  int total_steps = 0;
  int skipped_frames = 0;

  const EpochStats& last() const { return epochs.back(); }
};

/// Stage 1: trains the completion net on randomly sampled (exactly-k)
/// depth signals. Throws TrainingError on divergence, ConfigError on an
/// empty dataset.
TrainResult pretrain_completion(nn::ReferenceCompletion& net, const LoadedSplit& data,
                                const SamplingBudget& budget, const StageParams& stage,
                                uint64_t seed);

/// Sampler-stage wiring that differs per prior mode.
struct SamplerTrainIO {
  // Ground-truth-prior runs populate these during their final epoch.
  priors::ReconstructionStore* recon_out = nullptr;
  priors::ReconstructionStore* sampled_out = nullptr;
  // Stack-based priors read past reconstructions from here.
  const priors::ReconstructionStore* recon_in = nullptr;
  // Imitation targets for the implicit mode.
  const priors::ReconstructionStore* sampled_ref = nullptr;
  // Frozen predictor for the prednet mode.
  nn::PredNetModel* prednet = nullptr;
};

/// Stage 2: trains the sampler against a frozen completion task with
/// total = task + alpha * budget (+ imitation in implicit mode). Frames
/// lacking the required history are skipped and counted.
TrainResult train_sampler(nn::SamplerNet& sampler, nn::CompletionTask& completion,
                          const LoadedSplit& data, priors::PriorMode mode,
                          const SamplerTrainIO& io, const SamplingBudget& budget,
                          const Temperature& temp, int history,
                          const StageParams& stage, uint64_t seed);

/// Stage 3: same objective, both parameter sets updated.
TrainResult joint_finetune(nn::SamplerNet& sampler, nn::CompletionTask& completion,
                           const LoadedSplit& data, priors::PriorMode mode,
                           const SamplerTrainIO& io, const SamplingBudget& budget,
                           const Temperature& temp, int history,
                           const StageParams& stage, uint64_t seed);

/// One free logit grid for the whole dataset, completion frozen.
TrainResult train_fixed_mask(baselines::FixedMaskParams& params,
                             nn::CompletionTask& completion, const LoadedSplit& data,
                             const SamplingBudget& budget, const Temperature& temp,
                             const StageParams& stage, uint64_t seed);

/// Trains the predictor to map b stored past reconstructions to the
/// current ground truth (L1, normalized). Sequences shorter than b+1
/// contribute only skips.
TrainResult train_prednet(nn::PredNetModel& model,
                          const priors::ReconstructionStore& store,
                          const LoadedSplit& data, const StageParams& stage,
                          uint64_t seed);

struct PseudoGtResult {
  TrainResult train;
  double validity_fraction = 0.0;  // of the emitted maps; 1.0 by contract
  double mean_rmse_vs_gt = 0.0;
  io::DatasetManifest manifest;
};

/// Trains a fresh completion net on `fraction` random samples of the GT and
/// writes its dense outputs as a pseudo ground-truth dataset (manifest
/// "pseudo_<split>") under out_base.
PseudoGtResult generate_pseudo_gt(const RunConfig& cfg, const LoadedSplit& data,
                                  const std::string& split_name, double fraction,
                                  const StageParams& stage, uint64_t seed,
                                  const std::string& out_base);

}  // namespace dsamp::pipeline
