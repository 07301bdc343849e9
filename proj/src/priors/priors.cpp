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

#include "dsamp/priors/priors.hpp"

#include <cstring>

#include "dsamp/core/metrics.hpp"
#include "dsamp/nn/models.hpp"

namespace dsamp::priors {

PriorStack PriorStack::pushed(const DepthMap& recon) const {
  if (!maps_.empty() && !maps_.front().same_shape(recon))
    throw ShapeError("PriorStack: reconstruction shape differs from stack");
  PriorStack out(capacity_);
  out.maps_.reserve(capacity_);
  out.maps_.push_back(recon);
  for (int i = 0; i < size() && out.size() < capacity_; ++i)
    out.maps_.push_back(maps_[i]);
  return out;
}

PriorStack push_reconstruction(const PriorStack& stack, const DepthMap& recon) {
  return stack.pushed(recon);
}

PriorMode prior_mode_from_string(const std::string& s) {
  if (s == "none") return PriorMode::none;
  if (s == "lower_bound") return PriorMode::lower_bound;
  if (s == "prednet") return PriorMode::prednet;
  if (s == "implicit") return PriorMode::implicit;
  throw ConfigError("unknown prior mode: '" + s + "'");
}

std::string to_string(PriorMode mode) {
  switch (mode) {
    case PriorMode::none: return "none";
    case PriorMode::lower_bound: return "lower_bound";
    case PriorMode::prednet: return "prednet";
    case PriorMode::implicit: return "implicit";
  }
  throw ConfigError("invalid prior mode value");
}

int prior_channels(PriorMode mode, int stack_capacity) {
  switch (mode) {
    case PriorMode::lower_bound:
    case PriorMode::prednet: return 1;
    case PriorMode::implicit: return stack_capacity;
    case PriorMode::none: break;
  }
  throw ConfigError("prior mode 'none' has no sampler input");
}

namespace {

void copy_normalized_plane(const DepthMap& d, double max_range, double* dst) {
  const DepthMap n = normalize_depth(d, max_range);
  std::memcpy(dst, n.values.data(), n.values.size() * sizeof(double));
}

}  // namespace

nn::Tensor make_prior(PriorMode mode, const PriorStack& stack,
                      nn::PredNetModel* prednet, const DepthMap* gt,
                      double max_range) {
  switch (mode) {
    case PriorMode::none:
      throw ConfigError("make_prior: mode 'none' bypasses the sampler");
    case PriorMode::lower_bound: {
      if (gt == nullptr)
        throw ConfigError("make_prior: lower_bound mode requires ground truth");
      nn::Tensor t({1, gt->height, gt->width});
      copy_normalized_plane(*gt, max_range, t.data());
      return t;
    }
    case PriorMode::prednet: {
      if (prednet == nullptr)
        throw ConfigError("make_prior: prednet mode requires a model");
      if (!stack.full())
        throw HistoryError("make_prior: prednet prior needs " +
                           std::to_string(stack.capacity()) +
                           " reconstructions, have " +
                           std::to_string(stack.size()));
      const DepthMap pred = prednet->predict(stack);
      nn::Tensor t({1, pred.height, pred.width});
      copy_normalized_plane(pred, max_range, t.data());
      return t;
    }
    case PriorMode::implicit: {
      if (!stack.full())
        throw HistoryError("make_prior: implicit prior needs " +
                           std::to_string(stack.capacity()) +
                           " reconstructions, have " +
                           std::to_string(stack.size()));
      const int h = stack.at(0).height, w = stack.at(0).width;
      nn::Tensor t({stack.capacity(), h, w});
      for (int c = 0; c < stack.capacity(); ++c)
        copy_normalized_plane(stack.at(c), max_range, t.data() + c * t.plane());
      return t;
    }
  }
  throw ConfigError("invalid prior mode value");
}

void ReconstructionStore::put(const std::string& sequence_id, int t,
                              const DepthMap& recon) {
  const Key key{sequence_id, t};
  if (entries_.count(key) != 0)
    throw DataError("ReconstructionStore: duplicate entry for " + sequence_id +
                    " frame " + std::to_string(t));
  entries_.emplace(key, recon);
}

const DepthMap* ReconstructionStore::find(const std::string& sequence_id,
                                          int t) const {
  auto it = entries_.find({sequence_id, t});
  return it == entries_.end() ? nullptr : &it->second;
}

const DepthMap& ReconstructionStore::get(const std::string& sequence_id,
                                         int t) const {
  const DepthMap* d = find(sequence_id, t);
  if (d == nullptr)
    throw DataError("ReconstructionStore: no entry for " + sequence_id +
                    " frame " + std::to_string(t));
  return *d;
}

std::vector<ReconstructionStore::Key> ReconstructionStore::keys() const {
  std::vector<Key> out;
  out.reserve(entries_.size());
  for (const auto& [k, v] : entries_) out.push_back(k);
  return out;
}

}  // namespace dsamp::priors
