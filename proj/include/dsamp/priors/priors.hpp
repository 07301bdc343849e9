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

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dsamp/core/types.hpp"
#include "dsamp/nn/tensor.hpp"

namespace dsamp::nn {
class PredNetModel;
}

namespace dsamp::priors {

/// Bounded buffer of past reconstructions, newest first. Value semantics:
/// pushed() returns a new stack, the original is never mutated.
class PriorStack {
 public:
  explicit PriorStack(int capacity) : capacity_(capacity) {
    if (capacity < 1) throw ConfigError("PriorStack capacity must be >= 1");
  }

  int capacity() const { return capacity_; }
  int size() const { return static_cast<int>(maps_.size()); }
  bool full() const { return size() == capacity_; }

  /// i = 0 is the newest entry.
  const DepthMap& at(int i) const { return maps_.at(i); }
  const std::vector<DepthMap>& maps() const { return maps_; }

  /// New stack with recon as the newest entry; the oldest entry is evicted
  /// once the capacity is exceeded.
  PriorStack pushed(const DepthMap& recon) const;

 private:
  int capacity_;
  std::vector<DepthMap> maps_;  // newest first
};

PriorStack push_reconstruction(const PriorStack& stack, const DepthMap& recon);

enum class PriorMode { none, lower_bound, prednet, implicit };

PriorMode prior_mode_from_string(const std::string& s);
std::string to_string(PriorMode mode);

/// Sampler input channel count implied by a mode: 1 for the single-map
/// priors, the stack capacity for implicit.
int prior_channels(PriorMode mode, int stack_capacity);

/// Assemble the sampler-network input for a mode, normalized to [0,1] by
/// max_range. lower_bound requires gt; prednet requires a full stack and a
/// model; implicit requires a full stack. Under-filled stacks raise
/// HistoryError (the end-to-end loop falls back to random sampling before
/// enough history exists); mode none raises ConfigError since the fixed
/// mask bypasses the sampler entirely.
nn::Tensor make_prior(PriorMode mode, const PriorStack& stack,
                      nn::PredNetModel* prednet, const DepthMap* gt,
                      double max_range);

/// Reconstructions saved during sampler training, keyed by
/// (sequence_id, frame). Entries are write-once.
class ReconstructionStore {
 public:
  using Key = std::pair<std::string, int>;

  void put(const std::string& sequence_id, int t, const DepthMap& recon);
  const DepthMap* find(const std::string& sequence_id, int t) const;
  const DepthMap& get(const std::string& sequence_id, int t) const;
  std::vector<Key> keys() const;
  size_t size() const { return entries_.size(); }

 private:
  std::map<Key, DepthMap> entries_;
};

}  // namespace dsamp::priors
