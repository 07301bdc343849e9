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

#include "dsamp/pipeline/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "dsamp/core/error.hpp"
#include "dsamp/core/rng.hpp"

namespace dsamp::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

void StageParams::validate(const std::string& stage_name) const {
  if (epochs < 1) throw ConfigError(stage_name + ".epochs must be >= 1");
  if (batch_size < 1) throw ConfigError(stage_name + ".batch_size must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate))
    throw ConfigError(stage_name + ".learning_rate must be positive");
  if (!(alpha >= 0.0) || !std::isfinite(alpha))
    throw ConfigError(stage_name + ".alpha must be >= 0");
  if (!(sampled_maps_weight >= 0.0) || !std::isfinite(sampled_maps_weight))
    throw ConfigError(stage_name + ".sampled_maps_weight must be >= 0");
}

const SplitParams& RunConfig::split_named(const std::string& name) const {
  for (const auto& s : splits)
    if (s.name == name) return s;
  throw ConfigError("config references unknown split '" + name + "'");
}

void RunConfig::validate() const {
  if (schema_version != 1) throw ConfigError("unsupported config schema_version");
  if (out_dir.empty()) throw ConfigError("out_dir must not be empty");
  scene.validate();

  if (splits.empty()) throw ConfigError("data.splits must not be empty");
  std::set<std::string> names;
  for (const auto& s : splits) {
    if (s.name.empty()) throw ConfigError("split name must not be empty");
    if (!names.insert(s.name).second)
      throw ConfigError("duplicate split name '" + s.name + "'");
    if (s.num_sequences < 1 || s.frames_per_sequence < 1)
      throw ConfigError("split '" + s.name + "' needs >= 1 sequences and frames");
  }
  split_named(train_split);
  split_named(eval_split);
  split_named(e2e_split);

  if (budget.k < 1) throw ConfigError("budget.k must be >= 1");
  if (budget.k > scene.height * scene.width)
    throw ConfigError("budget.k exceeds the frame pixel count");
  if (!(temperature.beta > 0.0)) throw ConfigError("temperature.beta must be > 0");

  for (const auto* arch : {&completion_arch, &sampler_arch, &prednet_arch}) {
    arch->validate();
    const int div = 1 << arch->levels;
    if (scene.height % div != 0 || scene.width % div != 0)
      throw ConfigError("scene dimensions must be divisible by 2^levels");
  }
  if (prednet_history < 1) throw ConfigError("networks.prednet.history must be >= 1");
  if (implicit_history < 1) throw ConfigError("networks.implicit_history must be >= 1");

  stage_completion.validate("stages.pretrain_completion");
  stage_sampler.validate("stages.train_sampler");
  stage_joint.validate("stages.joint_finetune");
  stage_fixed.validate("stages.fixed_mask");
  stage_prednet.validate("stages.prednet");
  stage_pseudo.validate("stages.pseudo_gt");
  if (!(pseudo_fraction > 0.0) || pseudo_fraction > 1.0)
    throw ConfigError("pseudo_fraction must be in (0, 1]");
  if (completion_name.empty()) throw ConfigError("completion_name must not be empty");

  if (memory_size < 1) throw ConfigError("e2e.memory_size must be >= 1");
  if (memory_size != prednet_history) {
    if (!allow_memory_mismatch)
      throw ConfigError(
          "e2e.memory_size must equal networks.prednet.history unless "
          "e2e.allow_memory_mismatch is set");
    if (memory_size < prednet_history)
      throw ConfigError(
          "e2e.memory_size below networks.prednet.history would leave the "
          "prior stack underfilled at the branch switch");
  }
}

namespace {

void expect_keys(const json& j, const std::set<std::string>& allowed,
                 const std::string& context) {
  if (!j.is_object()) throw ConfigError(context + " must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key))
      throw ConfigError("unknown config key '" + context + "." + key + "'");
}

template <typename T>
T get_or(const json& j, const std::string& key, const T& fallback,
         const std::string& context) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config key '" + context + "." + key + "' has the wrong type");
  }
}

StageParams parse_stage(const json& j, const StageParams& defaults,
                        const std::string& context) {
  expect_keys(j, {"epochs", "batch_size", "learning_rate", "alpha",
                  "sampled_maps_weight", "seed", "prior_mode"},
              context);
  StageParams p = defaults;
  p.epochs = get_or(j, "epochs", p.epochs, context);
  p.batch_size = get_or(j, "batch_size", p.batch_size, context);
  p.learning_rate = get_or(j, "learning_rate", p.learning_rate, context);
  p.alpha = get_or(j, "alpha", p.alpha, context);
  p.sampled_maps_weight = get_or(j, "sampled_maps_weight", p.sampled_maps_weight, context);
  p.seed = get_or(j, "seed", p.seed, context);
  return p;
}

nn::UNetConfig parse_arch(const json& j, const nn::UNetConfig& defaults,
                          const std::string& context) {
  expect_keys(j, {"levels", "base_channels", "history"}, context);
  nn::UNetConfig a = defaults;
  a.levels = get_or(j, "levels", a.levels, context);
  a.base_channels = get_or(j, "base_channels", a.base_channels, context);
  return a;
}

}  // namespace

json load_config_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
}

RunConfig config_from_json(const json& j) {
  expect_keys(j,
              {"schema_version", "seed", "out_dir", "data", "budget", "temperature",
               "networks", "stages", "pseudo_fraction", "completion_name",
               "mix_completion_b", "e2e"},
              "config");
  RunConfig c;
  c.schema_version = get_or(j, "schema_version", c.schema_version, "config");
  c.seed = get_or(j, "seed", c.seed, "config");
  c.out_dir = get_or(j, "out_dir", c.out_dir, "config");

  if (j.contains("data")) {
    const json& d = j.at("data");
    expect_keys(d, {"scene", "splits", "train_split", "eval_split", "e2e_split"},
                "data");
    if (d.contains("scene")) {
      const json& s = d.at("scene");
      expect_keys(s,
                  {"height", "width", "num_boxes", "ego_speed", "object_speed_range",
                   "cam_height", "focal", "horizon_row", "max_range"},
                  "data.scene");
      c.scene.height = get_or(s, "height", c.scene.height, "data.scene");
      c.scene.width = get_or(s, "width", c.scene.width, "data.scene");
      c.scene.num_boxes = get_or(s, "num_boxes", c.scene.num_boxes, "data.scene");
      c.scene.ego_speed = get_or(s, "ego_speed", c.scene.ego_speed, "data.scene");
      c.scene.object_speed_range =
          get_or(s, "object_speed_range", c.scene.object_speed_range, "data.scene");
      c.scene.cam_height = get_or(s, "cam_height", c.scene.cam_height, "data.scene");
      c.scene.focal = get_or(s, "focal", c.scene.focal, "data.scene");
      c.scene.horizon_row = get_or(s, "horizon_row", c.scene.horizon_row, "data.scene");
      c.scene.max_range = get_or(s, "max_range", c.scene.max_range, "data.scene");
    }
    if (d.contains("splits")) {
      if (!d.at("splits").is_array()) throw ConfigError("data.splits must be an array");
      c.splits.clear();
      for (const json& e : d.at("splits")) {
        expect_keys(e, {"name", "num_sequences", "frames_per_sequence"}, "data.splits[]");
        SplitParams sp;
        sp.name = get_or(e, "name", std::string(), "data.splits[]");
        sp.num_sequences = get_or(e, "num_sequences", 1, "data.splits[]");
        sp.frames_per_sequence = get_or(e, "frames_per_sequence", 1, "data.splits[]");
        c.splits.push_back(sp);
      }
    }
    c.train_split = get_or(d, "train_split", c.train_split, "data");
    c.eval_split = get_or(d, "eval_split", c.eval_split, "data");
    c.e2e_split = get_or(d, "e2e_split", c.e2e_split, "data");
  }

  if (j.contains("budget")) {
    expect_keys(j.at("budget"), {"k"}, "budget");
    c.budget.k = get_or(j.at("budget"), "k", c.budget.k, "budget");
  }
  if (j.contains("temperature")) {
    expect_keys(j.at("temperature"), {"beta"}, "temperature");
    c.temperature.beta = get_or(j.at("temperature"), "beta", c.temperature.beta, "temperature");
  }

  if (j.contains("networks")) {
    const json& n = j.at("networks");
    expect_keys(n, {"completion", "sampler", "prednet", "implicit_history"}, "networks");
    if (n.contains("completion"))
      c.completion_arch = parse_arch(n.at("completion"), c.completion_arch, "networks.completion");
    if (n.contains("sampler"))
      c.sampler_arch = parse_arch(n.at("sampler"), c.sampler_arch, "networks.sampler");
    if (n.contains("prednet")) {
      c.prednet_arch = parse_arch(n.at("prednet"), c.prednet_arch, "networks.prednet");
      c.prednet_history = get_or(n.at("prednet"), "history", c.prednet_history, "networks.prednet");
    }
    c.implicit_history = get_or(n, "implicit_history", c.implicit_history, "networks");
  }

  if (j.contains("stages")) {
    const json& s = j.at("stages");
    expect_keys(s,
                {"pretrain_completion", "train_sampler", "joint_finetune", "fixed_mask",
                 "prednet", "pseudo_gt"},
                "stages");
    if (s.contains("pretrain_completion"))
      c.stage_completion = parse_stage(s.at("pretrain_completion"), c.stage_completion,
                                       "stages.pretrain_completion");
    if (s.contains("train_sampler")) {
      const json& t = s.at("train_sampler");
      c.stage_sampler = parse_stage(t, c.stage_sampler, "stages.train_sampler");
      if (t.contains("prior_mode"))
        c.sampler_prior = priors::prior_mode_from_string(
            get_or(t, "prior_mode", std::string(), "stages.train_sampler"));
    }
    if (s.contains("joint_finetune"))
      c.stage_joint = parse_stage(s.at("joint_finetune"), c.stage_joint, "stages.joint_finetune");
    if (s.contains("fixed_mask"))
      c.stage_fixed = parse_stage(s.at("fixed_mask"), c.stage_fixed, "stages.fixed_mask");
    if (s.contains("prednet"))
      c.stage_prednet = parse_stage(s.at("prednet"), c.stage_prednet, "stages.prednet");
    if (s.contains("pseudo_gt"))
      c.stage_pseudo = parse_stage(s.at("pseudo_gt"), c.stage_pseudo, "stages.pseudo_gt");
  }

  c.pseudo_fraction = get_or(j, "pseudo_fraction", c.pseudo_fraction, "config");
  c.completion_name = get_or(j, "completion_name", c.completion_name, "config");
  c.mix_completion_b = get_or(j, "mix_completion_b", c.mix_completion_b, "config");

  if (j.contains("e2e")) {
    const json& e = j.at("e2e");
    expect_keys(e, {"memory_size", "allow_memory_mismatch", "allow_fresh"}, "e2e");
    c.memory_size = get_or(e, "memory_size", c.memory_size, "e2e");
    c.allow_memory_mismatch =
        get_or(e, "allow_memory_mismatch", c.allow_memory_mismatch, "e2e");
    c.allow_fresh = get_or(e, "allow_fresh", c.allow_fresh, "e2e");
  }

  c.validate();
  return c;
}

json config_to_json(const RunConfig& c) {
  json stages;
  auto stage_json = [](const StageParams& p) {
    return json{{"epochs", p.epochs},
                {"batch_size", p.batch_size},
                {"learning_rate", p.learning_rate},
                {"alpha", p.alpha},
                {"sampled_maps_weight", p.sampled_maps_weight},
                {"seed", p.seed}};
  };
  stages["pretrain_completion"] = stage_json(c.stage_completion);
  stages["train_sampler"] = stage_json(c.stage_sampler);
  stages["train_sampler"]["prior_mode"] = priors::to_string(c.sampler_prior);
  stages["joint_finetune"] = stage_json(c.stage_joint);
  stages["fixed_mask"] = stage_json(c.stage_fixed);
  stages["prednet"] = stage_json(c.stage_prednet);
  stages["pseudo_gt"] = stage_json(c.stage_pseudo);

  json splits = json::array();
  for (const auto& s : c.splits)
    splits.push_back({{"name", s.name},
                      {"num_sequences", s.num_sequences},
                      {"frames_per_sequence", s.frames_per_sequence}});

  return json{
      {"schema_version", c.schema_version},
      {"seed", c.seed},
      {"out_dir", c.out_dir},
      {"data",
       {{"scene",
         {{"height", c.scene.height},
          {"width", c.scene.width},
          {"num_boxes", c.scene.num_boxes},
          {"ego_speed", c.scene.ego_speed},
          {"object_speed_range", c.scene.object_speed_range},
          {"cam_height", c.scene.cam_height},
          {"focal", c.scene.focal},
          {"horizon_row", c.scene.horizon_row},
          {"max_range", c.scene.max_range}}},
        {"splits", splits},
        {"train_split", c.train_split},
        {"eval_split", c.eval_split},
        {"e2e_split", c.e2e_split}}},
      {"budget", {{"k", c.budget.k}}},
      {"temperature", {{"beta", c.temperature.beta}}},
      {"networks",
       {{"completion",
         {{"levels", c.completion_arch.levels},
          {"base_channels", c.completion_arch.base_channels}}},
        {"sampler",
         {{"levels", c.sampler_arch.levels},
          {"base_channels", c.sampler_arch.base_channels}}},
        {"prednet",
         {{"levels", c.prednet_arch.levels},
          {"base_channels", c.prednet_arch.base_channels},
          {"history", c.prednet_history}}},
        {"implicit_history", c.implicit_history}}},
      {"stages", stages},
      {"pseudo_fraction", c.pseudo_fraction},
      {"completion_name", c.completion_name},
      {"mix_completion_b", c.mix_completion_b},
      {"e2e",
       {{"memory_size", c.memory_size},
        {"allow_memory_mismatch", c.allow_memory_mismatch},
        {"allow_fresh", c.allow_fresh}}}};
}

void apply_override(json& j, const std::string& assignment) {
  const size_t eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("override must look like dotted.path=value: '" + assignment + "'");
  const std::string path = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);

  json value;
  try {
    value = json::parse(raw);
  } catch (const json::parse_error&) {
    value = raw;  // plain string
  }

  json* node = &j;
  size_t start = 0;
  while (true) {
    const size_t dot = path.find('.', start);
    const std::string key = path.substr(start, dot - start);
    if (key.empty()) throw ConfigError("override path has an empty segment: '" + path + "'");
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    if (!node->contains(key)) (*node)[key] = json::object();
    node = &(*node)[key];
    if (!node->is_object())
      throw ConfigError("override path crosses a non-object at '" + key + "'");
    start = dot + 1;
  }
}

uint64_t config_hash(const json& resolved) {
  const std::string s = resolved.dump();
  return nn::fnv1a(s.data(), s.size());
}

void write_resolved_config(const RunConfig& cfg, const json& resolved,
                           const std::string& command) {
  fs::create_directories(cfg.resolved_dir());
  char hex[19];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(config_hash(resolved)));
  const json out{{"command", command},
                 {"seed", cfg.seed},
                 {"config_hash", std::string(hex)},
                 {"config", resolved}};
  const std::string path = cfg.resolved_dir() + "/" + command + ".json";
  std::ofstream f(path);
  if (!f) throw DataError("cannot write resolved config '" + path + "'");
  f << out.dump(2) << "\n";
}

uint64_t stage_seed(const RunConfig& cfg, const StageParams& stage, uint64_t tag) {
  if (stage.seed != 0) return stage.seed;
  return Rng::split(cfg.seed, tag);
}

}  // namespace dsamp::pipeline
