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

#include "dsamp/core/types.hpp"
#include "dsamp/nn/models.hpp"

namespace dsamp::pipeline {

/// One frame of a rollout. `branch` is "random" during warm-up and
/// "adaptive" once the predictor takes over; evaluation reuses the row
/// type with the method name as the branch.
struct TraceRow {
  std::string sequence_id;
  int t = 0;
  std::string branch;
  double soft_count = 0.0;
  int hard_count = 0;
  double rmse = 0.0;
  double mae = 0.0;
};

struct E2EOptions {
  int memory_size = 4;  // warm-up length S; must cover the predictor history
  SamplingBudget budget;
  Temperature temp;
  uint64_t seed = 1;
  // When set, receives the depth value of every sampled point.
  std::vector<double>* sampled_values = nullptr;
};

/// Uniform choice of min(k, #valid) pixels among the valid ones.
SampleMask random_valid_mask(const DepthMap& depth, const SamplingBudget& budget,
                             uint64_t seed);

/// The adaptive loop. Frames before memory_size use random masks; from
/// then on the predictor maps the stack of past reconstructions to a
/// prior, the sampler scores it, and the mask is hardened onto the
/// frame's valid pixels. Every frame's reconstruction is pushed into the
/// stack. No parameters are updated.
std::vector<TraceRow> run_end_to_end(const DepthSequence& seq,
                                     nn::SamplerNet& sampler,
                                     nn::PredNetModel& prednet,
                                     nn::CompletionTask& completion,
                                     const E2EOptions& opts);

/// Baseline rollout: every frame sampled at random.
std::vector<TraceRow> run_all_random(const DepthSequence& seq,
                                     nn::CompletionTask& completion,
                                     const E2EOptions& opts);

/// Rollout for samplers that read the raw stack of past reconstructions
/// instead of a predicted map. `history` is the stack capacity;
/// opts.memory_size still sets the warm-up length and must cover it.
std::vector<TraceRow> run_stack_rollout(const DepthSequence& seq,
                                        nn::SamplerNet& sampler,
                                        nn::CompletionTask& completion,
                                        int history, const E2EOptions& opts);

}  // namespace dsamp::pipeline
