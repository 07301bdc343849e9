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

#include "dsamp/pipeline/train.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <memory>
#include <utility>

#include "dsamp/core/metrics.hpp"
#include "dsamp/mask/mask_ops.hpp"
#include "dsamp/nn/adam.hpp"
#include "dsamp/pipeline/losses.hpp"

namespace dsamp::pipeline {

namespace fs = std::filesystem;
using nn::Tensor;

size_t LoadedSplit::frame_count() const {
  size_t n = 0;
  for (const auto& s : sequences) n += s.frames.size();
  return n;
}

LoadedSplit load_split(const RunConfig& cfg, const std::string& split_name) {
  const std::string path = cfg.data_dir() + "/" + split_name + ".json";
  if (!fs::exists(path))
    throw ConfigError("split '" + split_name + "' has no manifest at '" + path +
                      "'; generate the dataset first");
  LoadedSplit out;
  out.manifest = io::load_manifest(path);
  out.sequences.reserve(out.manifest.sequences.size());
  for (const auto& entry : out.manifest.sequences)
    out.sequences.push_back(io::load_sequence(entry, cfg.data_dir()));
  return out;
}

namespace {

using FrameRef = std::pair<int, int>;  // (sequence index, frame index)

std::vector<FrameRef> shuffled_frames(const LoadedSplit& data, uint64_t seed) {
  std::vector<FrameRef> order;
  for (int s = 0; s < static_cast<int>(data.sequences.size()); ++s)
    for (int t = 0; t < static_cast<int>(data.sequences[s].frames.size()); ++t)
      order.emplace_back(s, t);
  Rng rng(seed);
  for (size_t i = order.size(); i > 1; --i)
    std::swap(order[i - 1], order[rng.below(i)]);
  return order;
}

void zero_grads(const std::vector<nn::NamedParam>& params) {
  for (const auto& p : params) p.grad->zero();
}

void ensure_finite(double loss, const std::string& stage, int epoch, int step) {
  if (!std::isfinite(loss))
    throw TrainingError(stage + " diverged (non-finite loss) at epoch " +
                        std::to_string(epoch) + ", step " + std::to_string(step));
}

/// pred and gt_norm are (1,H,W) / normalized maps. Returns the mean squared
/// error over gt-valid pixels and fills d(pred).
double mse_and_grad(const Tensor& pred, const DepthMap& gt_norm, Tensor& dpred) {
  dpred.resize({1, pred.h(), pred.w()});
  dpred.zero();
  double acc = 0.0;
  size_t nv = 0;
  for (size_t i = 0; i < gt_norm.values.size(); ++i) nv += gt_norm.valid[i];
  if (nv == 0) throw MetricError("frame has no valid ground truth");
  const double inv = 1.0 / static_cast<double>(nv);
  for (size_t i = 0; i < gt_norm.values.size(); ++i) {
    if (!gt_norm.valid[i]) continue;
    const double d = pred.v[i] - gt_norm.values[i];
    acc += d * d;
    dpred.v[i] = 2.0 * d * inv;
  }
  return acc * inv;
}

void masked_inputs(const DepthMap& gt_norm, const std::vector<double>& mask_values,
                   Tensor& masked, Tensor& mask_plane) {
  const int h = gt_norm.height, w = gt_norm.width;
  masked.resize({1, h, w});
  mask_plane.resize({1, h, w});
  for (size_t i = 0; i < gt_norm.values.size(); ++i) {
    masked.v[i] = gt_norm.values[i] * mask_values[i];
    mask_plane.v[i] = mask_values[i];
  }
}

DepthMap recon_from_prediction(const Tensor& pred, double max_range) {
  DepthMap out(pred.h(), pred.w());
  for (size_t i = 0; i < out.values.size(); ++i) {
    double v = pred.v[i];
    if (v < 0.0) v = 0.0;
    if (v > 1.0) v = 1.0;
    out.values[i] = v * max_range;
    out.valid[i] = 1;
  }
  return out;
}

bool stack_from_store(const priors::ReconstructionStore& store,
                      const std::string& sequence_id, int t, int history,
                      priors::PriorStack& stack) {
  if (t < history) return false;
  stack = priors::PriorStack(history);
  for (int back = history; back >= 1; --back) {
    const DepthMap* m = store.find(sequence_id, t - back);
    if (!m) return false;
    stack = stack.pushed(*m);
  }
  return true;
}

void finish_epoch(EpochStats& es) {
  if (es.steps > 0) {
    const double inv = 1.0 / es.steps;
    es.task *= inv;
    es.sample *= inv;
    es.extra *= inv;
    es.total *= inv;
    es.soft_card *= inv;
  }
}

}  // namespace

TrainResult pretrain_completion(nn::ReferenceCompletion& net, const LoadedSplit& data,
                                const SamplingBudget& budget, const StageParams& stage,
                                uint64_t seed) {
  stage.validate("pretrain_completion");
  if (data.frame_count() == 0) throw ConfigError("training dataset is empty");

  net.set_frozen(false);
  nn::Adam opt(net.params(), {stage.learning_rate});
  Rng mask_rng(Rng::split(seed, 1));
  Tensor masked, mask_plane, dpred, dmasked, dmask;

  TrainResult res;
  for (int epoch = 0; epoch < stage.epochs; ++epoch) {
    EpochStats es;
    int in_batch = 0;
    zero_grads(net.params());
    for (const auto& [s, t] : shuffled_frames(data, Rng::split(seed, 100 + epoch))) {
      const SequenceFrame& fr = data.sequences[s].frames[t];
      if (fr.depth.valid_count() == 0) {
        ++es.skipped;
        continue;
      }
      const SampleMask mask = baselines::random_mask(fr.depth.height, fr.depth.width,
                                                     budget, mask_rng.next());
      const DepthMap gt_norm = normalize_depth(fr.depth, net.max_range());
      masked_inputs(gt_norm, mask.values, masked, mask_plane);
      const Tensor pred = net.forward_normalized(masked, mask_plane, fr.image);
      const double loss = mse_and_grad(pred, gt_norm, dpred);
      ensure_finite(loss, "pretrain_completion", epoch, es.steps);
      net.backward_normalized(dpred, dmasked, dmask, true);

      es.task += loss;
      es.total += loss;
      ++es.steps;
      if (++in_batch == stage.batch_size) {
        opt.step(1.0 / in_batch);
        zero_grads(net.params());
        in_batch = 0;
      }
    }
    if (in_batch > 0) {
      opt.step(1.0 / in_batch);
      zero_grads(net.params());
    }
    finish_epoch(es);
    res.total_steps += es.steps;
    res.skipped_frames += es.skipped;
    res.epochs.push_back(es);
  }
  return res;
}

namespace {

/// Shared core of sampler training and joint fine-tuning. The chain is
/// logits -> soft mask -> masked depth -> completion -> masked MSE, with
/// the budget term and (implicit mode) the imitation term added on the
/// mask. All gradients are hand-propagated in reverse.
TrainResult sampler_stage(nn::SamplerNet& sampler, nn::CompletionTask& completion,
                          const LoadedSplit& data, priors::PriorMode mode,
                          const SamplerTrainIO& io, const SamplingBudget& budget,
                          const Temperature& temp, int history,
                          const StageParams& stage, uint64_t seed, bool joint,
                          const std::string& stage_name) {
  stage.validate(stage_name);
  temp.validate();
  if (data.frame_count() == 0) throw ConfigError("training dataset is empty");
  if (mode == priors::PriorMode::none)
    throw ConfigError(stage_name + " requires a prior mode; the fixed mask has "
                                   "its own training path");
  const int want_ch = priors::prior_channels(mode, history);
  if (sampler.net().config().in_channels != want_ch)
    throw ComponentError("sampler expects " +
                         std::to_string(sampler.net().config().in_channels) +
                         " input channels but prior mode '" + priors::to_string(mode) +
                         "' produces " + std::to_string(want_ch));
  if (mode == priors::PriorMode::prednet && io.prednet == nullptr)
    throw ConfigError(stage_name + ": prednet prior mode requires a predictor");
  if ((mode == priors::PriorMode::prednet || mode == priors::PriorMode::implicit) &&
      io.recon_in == nullptr)
    throw ConfigError(stage_name + ": stack priors require a reconstruction store");
  if (mode == priors::PriorMode::implicit && io.sampled_ref == nullptr)
    throw ConfigError(stage_name + ": implicit mode requires reference sampled maps");

  completion.set_frozen(!joint);
  sampler.net().set_frozen(false);
  const uint64_t completion_hash_before = completion.param_hash();

  nn::Adam sampler_opt(sampler.net().params(), {stage.learning_rate});
  std::unique_ptr<nn::Adam> completion_opt;
  if (joint) completion_opt = std::make_unique<nn::Adam>(completion.params(),
                                                         nn::AdamConfig{stage.learning_rate});

  const double max_range = completion.max_range();
  Tensor masked, mask_plane, dpred, dmasked, dmask;
  std::vector<double> dM, dlogits;

  TrainResult res;
  for (int epoch = 0; epoch < stage.epochs; ++epoch) {
    const bool final_epoch = (epoch == stage.epochs - 1);
    EpochStats es;
    int in_batch = 0;
    zero_grads(sampler.net().params());
    if (joint) zero_grads(completion.params());

    for (const auto& [s, t] : shuffled_frames(data, Rng::split(seed, 100 + epoch))) {
      const DepthSequence& seq = data.sequences[s];
      const SequenceFrame& fr = seq.frames[t];
      if (fr.depth.valid_count() == 0) {
        ++es.skipped;
        continue;
      }

      Tensor prior;
      priors::PriorStack stack(std::max(history, 1));
      if (mode == priors::PriorMode::lower_bound) {
        prior = priors::make_prior(mode, stack, nullptr, &fr.depth, max_range);
      } else {
        if (!stack_from_store(*io.recon_in, seq.sequence_id, t, history, stack)) {
          ++es.skipped;
          continue;
        }
        prior = priors::make_prior(mode, stack, io.prednet, nullptr, max_range);
      }
      const DepthMap* sm_ref = nullptr;
      if (mode == priors::PriorMode::implicit) {
        sm_ref = io.sampled_ref->find(seq.sequence_id, t);
        if (!sm_ref) {
          ++es.skipped;
          continue;
        }
      }

      const ProbabilityMap pm = sampler.forward(prior);
      const SampleMask soft = mask::soft_argmax(pm, temp);
      const DepthMap gt_norm = normalize_depth(fr.depth, max_range);
      masked_inputs(gt_norm, soft.values, masked, mask_plane);
      const Tensor pred = completion.forward_normalized(masked, mask_plane, fr.image);

      const double task = mse_and_grad(pred, gt_norm, dpred);
      const double sample = mask::sample_loss(soft, budget);
      double extra = 0.0;

      completion.backward_normalized(dpred, dmasked, dmask, joint);

      dM.assign(soft.values.size(), 0.0);
      const double dsample = stage.alpha * mask::sample_loss_grad(soft, budget);
      for (size_t i = 0; i < dM.size(); ++i)
        dM[i] = dmasked.v[i] * gt_norm.values[i] + dmask.v[i] + dsample;

      if (mode == priors::PriorMode::implicit && stage.sampled_maps_weight > 0.0) {
        // Imitation of the reference sampled map, measured over gt-valid
        // pixels with the reference treated as 0 off its support. The soft
        // mask's support is the whole valid grid, so this is the union form
        // of the sampled-maps loss.
        double nv = 0.0;
        for (size_t i = 0; i < gt_norm.values.size(); ++i) nv += gt_norm.valid[i];
        const double inv = 1.0 / nv;
        double acc = 0.0;
        for (size_t i = 0; i < gt_norm.values.size(); ++i) {
          if (!gt_norm.valid[i]) continue;
          const double ref =
              sm_ref->valid[i] ? sm_ref->values[i] / max_range : 0.0;
          const double diff = gt_norm.values[i] * soft.values[i] - ref;
          acc += std::abs(diff);
          const double sgn = diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
          dM[i] += stage.sampled_maps_weight * sgn * gt_norm.values[i] * inv;
        }
        extra = acc * inv;
      }

      const double step_total =
          total_loss(task, sample, {stage.alpha}) + stage.sampled_maps_weight * extra;
      ensure_finite(step_total, stage_name, epoch, es.steps);

      dlogits.assign(pm.logits.size(), 0.0);
      mask::soft_argmax_backward(soft, temp, dM, dlogits);
      sampler.backward(dlogits, true);

      if (final_epoch && io.recon_out)
        io.recon_out->put(seq.sequence_id, t, recon_from_prediction(pred, max_range));
      if (final_epoch && io.sampled_out) {
        const SampleMask hard = mask::sparse_budget_select(fr.depth, soft, budget);
        io.sampled_out->put(seq.sequence_id, t, apply_mask(fr.depth, hard));
      }

      es.task += task;
      es.sample += sample;
      es.extra += extra;
      es.total += step_total;
      es.soft_card += mask::mask_cardinality(soft);
      ++es.steps;
      if (++in_batch == stage.batch_size) {
        const double scale = 1.0 / in_batch;
        sampler_opt.step(scale);
        zero_grads(sampler.net().params());
        if (joint) {
          completion_opt->step(scale);
          zero_grads(completion.params());
        }
        in_batch = 0;
      }
    }
    if (in_batch > 0) {
      const double scale = 1.0 / in_batch;
      sampler_opt.step(scale);
      zero_grads(sampler.net().params());
      if (joint) {
        completion_opt->step(scale);
        zero_grads(completion.params());
      }
    }
    finish_epoch(es);
    res.total_steps += es.steps;
    res.skipped_frames += es.skipped;
    res.epochs.push_back(es);
  }

  if (res.total_steps == 0)
    throw DataError(stage_name + ": no frame had the required history");
  if (!joint && completion.param_hash() != completion_hash_before)
    throw TrainingError(stage_name + ": frozen completion parameters drifted");
  return res;
}

}  // namespace

TrainResult train_sampler(nn::SamplerNet& sampler, nn::CompletionTask& completion,
                          const LoadedSplit& data, priors::PriorMode mode,
                          const SamplerTrainIO& io, const SamplingBudget& budget,
                          const Temperature& temp, int history,
                          const StageParams& stage, uint64_t seed) {
  return sampler_stage(sampler, completion, data, mode, io, budget, temp, history,
                       stage, seed, false, "train_sampler");
}

TrainResult joint_finetune(nn::SamplerNet& sampler, nn::CompletionTask& completion,
                           const LoadedSplit& data, priors::PriorMode mode,
                           const SamplerTrainIO& io, const SamplingBudget& budget,
                           const Temperature& temp, int history,
                           const StageParams& stage, uint64_t seed) {
  return sampler_stage(sampler, completion, data, mode, io, budget, temp, history,
                       stage, seed, true, "joint_finetune");
}

TrainResult train_fixed_mask(baselines::FixedMaskParams& params,
                             nn::CompletionTask& completion, const LoadedSplit& data,
                             const SamplingBudget& budget, const Temperature& temp,
                             const StageParams& stage, uint64_t seed) {
  stage.validate("fixed_mask");
  temp.validate();
  if (data.frame_count() == 0) throw ConfigError("training dataset is empty");

  completion.set_frozen(true);
  const uint64_t completion_hash_before = completion.param_hash();
  const int h = params.logits.height, w = params.logits.width;

  Tensor logits, grad;
  logits.resize({2, h, w});
  logits.v = params.logits.logits;
  grad.resize({2, h, w});
  grad.zero();
  std::vector<nn::NamedParam> trainable{{"logits", &logits, &grad}};
  nn::Adam opt(trainable, {stage.learning_rate});

  const double max_range = completion.max_range();
  Tensor masked, mask_plane, dpred, dmasked, dmask;
  std::vector<double> dM;

  TrainResult res;
  for (int epoch = 0; epoch < stage.epochs; ++epoch) {
    EpochStats es;
    int in_batch = 0;
    grad.zero();
    for (const auto& [s, t] : shuffled_frames(data, Rng::split(seed, 100 + epoch))) {
      const SequenceFrame& fr = data.sequences[s].frames[t];
      if (fr.depth.valid_count() == 0) {
        ++es.skipped;
        continue;
      }
      if (fr.depth.height != h || fr.depth.width != w)
        throw ShapeError("fixed mask shape does not match the dataset frames");

      ProbabilityMap pm(h, w);
      pm.logits = logits.v;
      const SampleMask soft = mask::soft_argmax(pm, temp);
      const DepthMap gt_norm = normalize_depth(fr.depth, max_range);
      masked_inputs(gt_norm, soft.values, masked, mask_plane);
      const Tensor pred = completion.forward_normalized(masked, mask_plane, fr.image);

      const double task = mse_and_grad(pred, gt_norm, dpred);
      const double sample = mask::sample_loss(soft, budget);
      const double step_total = total_loss(task, sample, {stage.alpha});
      ensure_finite(step_total, "fixed_mask", epoch, es.steps);

      completion.backward_normalized(dpred, dmasked, dmask, false);
      dM.assign(soft.values.size(), 0.0);
      const double dsample = stage.alpha * mask::sample_loss_grad(soft, budget);
      for (size_t i = 0; i < dM.size(); ++i)
        dM[i] = dmasked.v[i] * gt_norm.values[i] + dmask.v[i] + dsample;
      mask::soft_argmax_backward(soft, temp, dM, grad.v);

      es.task += task;
      es.sample += sample;
      es.total += step_total;
      es.soft_card += mask::mask_cardinality(soft);
      ++es.steps;
      if (++in_batch == stage.batch_size) {
        opt.step(1.0 / in_batch);
        grad.zero();
        in_batch = 0;
      }
    }
    if (in_batch > 0) {
      opt.step(1.0 / in_batch);
      grad.zero();
    }
    finish_epoch(es);
    res.total_steps += es.steps;
    res.skipped_frames += es.skipped;
    res.epochs.push_back(es);
  }

  params.logits.logits = logits.v;
  if (completion.param_hash() != completion_hash_before)
    throw TrainingError("fixed_mask: frozen completion parameters drifted");
  return res;
}

TrainResult train_prednet(nn::PredNetModel& model,
                          const priors::ReconstructionStore& store,
                          const LoadedSplit& data, const StageParams& stage,
                          uint64_t seed) {
  stage.validate("prednet");
  if (data.frame_count() == 0) throw ConfigError("training dataset is empty");

  model.net().set_frozen(false);
  nn::Adam opt(model.net().params(), {stage.learning_rate});
  const int b = model.history();
  const double max_range = model.max_range();
  Tensor dout;

  TrainResult res;
  for (int epoch = 0; epoch < stage.epochs; ++epoch) {
    EpochStats es;
    int in_batch = 0;
    model.net().zero_grad();
    for (const auto& [s, t] : shuffled_frames(data, Rng::split(seed, 100 + epoch))) {
      const DepthSequence& seq = data.sequences[s];
      const SequenceFrame& fr = seq.frames[t];
      priors::PriorStack stack(b);
      if (fr.depth.valid_count() == 0 ||
          !stack_from_store(store, seq.sequence_id, t, b, stack)) {
        ++es.skipped;
        continue;
      }

      const Tensor input = model.stack_to_tensor(stack);
      const Tensor pred = model.net().forward(input);
      const DepthMap gt_norm = normalize_depth(fr.depth, max_range);

      double nv = 0.0;
      for (uint8_t v : gt_norm.valid) nv += v;
      const double inv = 1.0 / nv;
      double loss = 0.0;
      dout.resize({1, pred.h(), pred.w()});
      dout.zero();
      for (size_t i = 0; i < gt_norm.values.size(); ++i) {
        if (!gt_norm.valid[i]) continue;
        const double d = pred.v[i] - gt_norm.values[i];
        loss += std::abs(d);
        dout.v[i] = (d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0)) * inv;
      }
      loss *= inv;
      ensure_finite(loss, "prednet", epoch, es.steps);
      model.net().backward(dout, true);

      es.extra += loss;
      es.total += loss;
      ++es.steps;
      if (++in_batch == stage.batch_size) {
        opt.step(1.0 / in_batch);
        model.net().zero_grad();
        in_batch = 0;
      }
    }
    if (in_batch > 0) {
      opt.step(1.0 / in_batch);
      model.net().zero_grad();
    }
    finish_epoch(es);
    res.total_steps += es.steps;
    res.skipped_frames += es.skipped;
    res.epochs.push_back(es);
  }
  if (res.total_steps == 0)
    throw DataError("prednet: the store lacks " + std::to_string(b) +
                    " consecutive reconstructions before any frame");
  return res;
}

PseudoGtResult generate_pseudo_gt(const RunConfig& cfg, const LoadedSplit& data,
                                  const std::string& split_name, double fraction,
                                  const StageParams& stage, uint64_t seed,
                                  const std::string& out_base) {
  if (!(fraction > 0.0) || fraction > 1.0)
    throw ConfigError("pseudo-GT sampling fraction must be in (0, 1]");
  if (data.frame_count() == 0) throw ConfigError("training dataset is empty");

  const int h = cfg.scene.height, w = cfg.scene.width;
  int k = static_cast<int>(std::lround(fraction * h * w));
  if (k < 1) k = 1;
  if (k > h * w) k = h * w;
  const SamplingBudget dense_budget{k};

  nn::UNetConfig arch = cfg.completion_arch;
  nn::ReferenceCompletion net(arch, Rng::split(seed, 1), cfg.scene.max_range);
  PseudoGtResult out;
  out.train = pretrain_completion(net, data, dense_budget, stage, Rng::split(seed, 2));

  fs::create_directories(out_base);
  out.manifest.schema_version = 1;
  out.manifest.split = "pseudo_" + split_name;
  Rng mask_rng(Rng::split(seed, 3));
  double rmse_acc = 0.0, valid_acc = 0.0;
  size_t frames = 0;

  for (const auto& seq : data.sequences) {
    DepthSequence pseudo;
    pseudo.sequence_id = seq.sequence_id;
    for (const auto& fr : seq.frames) {
      const SampleMask mask =
          baselines::random_mask(h, w, dense_budget, mask_rng.next());
      const DepthMap sparse = apply_mask(fr.depth, mask);
      DepthMap dense = net.complete(sparse, mask, fr.image);
      valid_acc += dense.valid_fraction();
      if (fr.depth.valid_count() > 0) rmse_acc += rmse(dense, fr.depth);
      ++frames;
      pseudo.frames.push_back({fr.image, std::move(dense), fr.timestamp});
    }
    out.manifest.sequences.push_back(io::save_sequence(pseudo, out_base));
  }
  io::write_manifest(out.manifest, out_base + "/" + out.manifest.split + ".json");
  out.validity_fraction = valid_acc / static_cast<double>(frames);
  out.mean_rmse_vs_gt = rmse_acc / static_cast<double>(frames);
  return out;
}

}  // namespace dsamp::pipeline
