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
#include "dsamp/nn/models.hpp"
#include "dsamp/pipeline/end_to_end.hpp"
#include "dsamp/pipeline/train.hpp"

namespace dsamp::pipeline {

inline constexpr const char* kTraceHeader =
    "sequence_id,t,branch,soft_count,hard_count,rmse,mae";

/// Writes rows under kTraceHeader, creating parent directories.
void write_trace_csv(const std::vector<TraceRow>& rows, const std::string& path);

/// Strict inverse of write_trace_csv; bad header or row is a DataError.
std::vector<TraceRow> read_trace_csv(const std::string& path);

struct MethodSummary {
  std::string method;
  int frames = 0;
  double mean_rmse = 0.0;
  double mean_mae = 0.0;
  double mean_soft = 0.0;
  double mean_hard = 0.0;
};

/// Averages per-frame metrics over rows with t >= min_t, skipping frames
/// whose metrics are undefined (no valid ground truth).
MethodSummary summarize(const std::string& method,
                        const std::vector<TraceRow>& rows, int min_t);

/// Canonical comparison order: agnostic, fixed, implicit, prednet,
/// lower_bound.
const std::vector<std::string>& method_order();
int method_index(const std::string& method);

/// Checkpoint-backed pieces evaluation can use. The completion task is
/// always required; the rest only for their respective methods.
struct EvalArtifacts {
  nn::CompletionTask* completion = nullptr;
  nn::SamplerNet* sampler_lower_bound = nullptr;
  nn::SamplerNet* sampler_prednet = nullptr;
  nn::SamplerNet* sampler_implicit = nullptr;
  nn::PredNetModel* prednet = nullptr;
  const baselines::FixedMaskParams* fixed = nullptr;
  int memory_size = 4;
  int implicit_history = 2;
};

/// Stable per-method RNG stream derived from the run seed.
uint64_t method_seed(uint64_t run_seed, const std::string& method);

/// Runs one sampling method over a split and returns a row per frame.
/// prednet and implicit roll out per sequence (random warm-up, then the
/// sampler); agnostic, fixed and lower_bound mask each frame directly.
/// No parameters are updated.
std::vector<TraceRow> evaluate_method(const std::string& method,
                                      const LoadedSplit& data,
                                      const EvalArtifacts& art,
                                      const SamplingBudget& budget,
                                      const Temperature& temp, uint64_t seed,
                                      std::vector<double>* sampled_values = nullptr);

/// Histogram of sampled depth values as "bin_lo,bin_hi,fraction" rows over
/// [0, max_range] split into `bins` equal bins. Fractions sum to 1.
void write_histogram_csv(const std::vector<double>& samples, double max_range,
                         int bins, const std::string& path);

}  // namespace dsamp::pipeline
