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

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dsamp/nn/unet.hpp"

namespace dsamp::nn {

/// On-disk model snapshot: a JSON metadata header plus raw double tensors.
/// meta always carries "schema_version" and "component" (one of
/// "completion", "sampler", "prednet", "fixed_mask"); network checkpoints
/// additionally carry "arch". Round trips are bit exact.
struct Checkpoint {
  nlohmann::json meta;
  std::vector<std::pair<std::string, Tensor>> tensors;

  const Tensor* find(const std::string& name) const;
};

void save_checkpoint(const std::string& path, const Checkpoint& ck);

/// Throws FormatError on bad magic, unsupported schema, or truncation.
Checkpoint load_checkpoint(const std::string& path);

/// load_checkpoint plus a component tag check; a mismatch throws
/// ComponentError naming both the expected and the found tag.
Checkpoint load_checkpoint_as(const std::string& path,
                              const std::string& expect_component);

/// Snapshot a network's parameters under the given component tag. extra is
/// merged into meta.
Checkpoint snapshot_net(const std::string& component, UNet& net,
                        const nlohmann::json& extra = nlohmann::json::object());

/// Rebuild a network from a checkpoint produced by snapshot_net.
std::unique_ptr<UNet> restore_net(const Checkpoint& ck);

nlohmann::json unet_config_to_json(const UNetConfig& cfg);
UNetConfig unet_config_from_json(const nlohmann::json& j);

}  // namespace dsamp::nn
