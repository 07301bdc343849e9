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

#include "dsamp/pipeline/end_to_end.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "dsamp/core/error.hpp"
#include "dsamp/core/metrics.hpp"
#include "dsamp/core/rng.hpp"
#include "dsamp/mask/mask_ops.hpp"
#include "dsamp/priors/priors.hpp"

namespace dsamp::pipeline {

SampleMask random_valid_mask(const DepthMap& depth, const SamplingBudget& budget,
                             uint64_t seed) {
  budget.validate_for(depth.height, depth.width);
  std::vector<size_t> idx;
  idx.reserve(depth.valid_count());
  for (size_t i = 0; i < depth.valid.size(); ++i)
    if (depth.valid[i]) idx.push_back(i);

  const size_t take = std::min<size_t>(budget.k, idx.size());
  Rng rng(seed);
  for (size_t i = 0; i < take; ++i)
    std::swap(idx[i], idx[i + rng.below(idx.size() - i)]);

  SampleMask m(depth.height, depth.width, budget);
  m.hardened = true;
  for (size_t i = 0; i < take; ++i) m.values[idx[i]] = 1.0;
  return m;
}

namespace {

void append_samples(const DepthMap& sampled, std::vector<double>* sink) {
  if (!sink) return;
  for (size_t i = 0; i < sampled.values.size(); ++i)
    if (sampled.valid[i]) sink->push_back(sampled.values[i]);
}

TraceRow finish_frame(const std::string& sequence_id, int t, std::string branch,
                      double soft_count, const SampleMask& hard,
                      const SequenceFrame& fr, nn::CompletionTask& completion,
                      priors::PriorStack& stack, const E2EOptions& opts) {
  const DepthMap sampled = apply_mask(fr.depth, hard);
  append_samples(sampled, opts.sampled_values);
  const DepthMap recon = completion.complete(sampled, hard, fr.image);
  stack = stack.pushed(recon);

  TraceRow row;
  row.sequence_id = sequence_id;
  row.t = t;
  row.branch = std::move(branch);
  row.soft_count = soft_count;
  row.hard_count = hard.ones_count();
  if (fr.depth.valid_count() > 0) {
    row.rmse = rmse(recon, fr.depth);
    row.mae = mae(recon, fr.depth);
  } else {
    row.rmse = std::numeric_limits<double>::quiet_NaN();
    row.mae = std::numeric_limits<double>::quiet_NaN();
  }
  return row;
}

}  // namespace

std::vector<TraceRow> run_end_to_end(const DepthSequence& seq,
                                     nn::SamplerNet& sampler,
                                     nn::PredNetModel& prednet,
                                     nn::CompletionTask& completion,
                                     const E2EOptions& opts) {
  if (seq.length() < 1) throw DataError("run_end_to_end: empty sequence");
  if (opts.memory_size < 1)
    throw ConfigError("run_end_to_end: memory size must be >= 1");
  if (opts.memory_size < prednet.history())
    throw ConfigError("run_end_to_end: warm-up of " +
                      std::to_string(opts.memory_size) +
                      " frames cannot fill a predictor history of " +
                      std::to_string(prednet.history()));
  opts.temp.validate();

  priors::PriorStack stack(prednet.history());
  std::vector<TraceRow> trace;
  trace.reserve(seq.frames.size());
  for (int t = 0; t < static_cast<int>(seq.frames.size()); ++t) {
    const SequenceFrame& fr = seq.frames[t];
    if (t < opts.memory_size) {
      const SampleMask hard =
          random_valid_mask(fr.depth, opts.budget, Rng::split(opts.seed, 1, t));
      trace.push_back(finish_frame(seq.sequence_id, t, "random",
                                   static_cast<double>(hard.ones_count()), hard,
                                   fr, completion, stack, opts));
    } else {
      const nn::Tensor prior = priors::make_prior(
          priors::PriorMode::prednet, stack, &prednet, nullptr,
          completion.max_range());
      const ProbabilityMap pm = sampler.forward(prior);
      const SampleMask soft = mask::soft_argmax(pm, opts.temp);
      const SampleMask hard =
          mask::sparse_budget_select(fr.depth, soft, opts.budget);
      trace.push_back(finish_frame(seq.sequence_id, t, "adaptive",
                                   mask::mask_cardinality(soft), hard, fr,
                                   completion, stack, opts));
    }
  }
  return trace;
}

std::vector<TraceRow> run_stack_rollout(const DepthSequence& seq,
                                        nn::SamplerNet& sampler,
                                        nn::CompletionTask& completion,
                                        int history, const E2EOptions& opts) {
  if (seq.length() < 1) throw DataError("run_stack_rollout: empty sequence");
  if (history < 1) throw ConfigError("run_stack_rollout: history must be >= 1");
  if (opts.memory_size < history)
    throw ConfigError("run_stack_rollout: warm-up of " +
                      std::to_string(opts.memory_size) +
                      " frames cannot fill a history of " + std::to_string(history));
  opts.temp.validate();

  priors::PriorStack stack(history);
  std::vector<TraceRow> trace;
  trace.reserve(seq.frames.size());
  for (int t = 0; t < static_cast<int>(seq.frames.size()); ++t) {
    const SequenceFrame& fr = seq.frames[t];
    if (t < opts.memory_size) {
      const SampleMask hard =
          random_valid_mask(fr.depth, opts.budget, Rng::split(opts.seed, 1, t));
      trace.push_back(finish_frame(seq.sequence_id, t, "random",
                                   static_cast<double>(hard.ones_count()), hard,
                                   fr, completion, stack, opts));
    } else {
      const nn::Tensor prior =
          priors::make_prior(priors::PriorMode::implicit, stack, nullptr, nullptr,
                             completion.max_range());
      const ProbabilityMap pm = sampler.forward(prior);
      const SampleMask soft = mask::soft_argmax(pm, opts.temp);
      const SampleMask hard =
          mask::sparse_budget_select(fr.depth, soft, opts.budget);
      trace.push_back(finish_frame(seq.sequence_id, t, "adaptive",
                                   mask::mask_cardinality(soft), hard, fr,
                                   completion, stack, opts));
    }
  }
  return trace;
}

std::vector<TraceRow> run_all_random(const DepthSequence& seq,
                                     nn::CompletionTask& completion,
                                     const E2EOptions& opts) {
  if (seq.length() < 1) throw DataError("run_all_random: empty sequence");
  priors::PriorStack stack(1);
  std::vector<TraceRow> trace;
  trace.reserve(seq.frames.size());
  for (int t = 0; t < static_cast<int>(seq.frames.size()); ++t) {
    const SequenceFrame& fr = seq.frames[t];
    const SampleMask hard =
        random_valid_mask(fr.depth, opts.budget, Rng::split(opts.seed, 1, t));
    trace.push_back(finish_frame(seq.sequence_id, t, "random",
                                 static_cast<double>(hard.ones_count()), hard,
                                 fr, completion, stack, opts));
  }
  return trace;
}

}  // namespace dsamp::pipeline
