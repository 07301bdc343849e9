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

#include "dsamp/cli/app.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dsamp/baselines/baselines.hpp"
#include "dsamp/nn/checkpoint.hpp"
#include "dsamp/pipeline/config.hpp"
#include "dsamp/pipeline/end_to_end.hpp"
#include "dsamp/pipeline/eval.hpp"
#include "dsamp/pipeline/report.hpp"
#include "dsamp/pipeline/train.hpp"

namespace dsamp::cli {

namespace fs = std::filesystem;
using nlohmann::json;
using pipeline::RunConfig;

namespace {

struct Flags {
  std::string config_path;
  std::vector<std::string> sets;
  std::string out;
  uint64_t seed = 0;
  bool out_given = false;
  bool seed_given = false;
  bool allow_fresh = false;
  bool joint = false;
};

RunConfig resolve_config(const Flags& f, json& resolved) {
  resolved = f.config_path.empty() ? pipeline::config_to_json(RunConfig{})
                                   : pipeline::load_config_json(f.config_path);
  for (const std::string& s : f.sets) pipeline::apply_override(resolved, s);
  if (f.out_given) resolved["out_dir"] = f.out;
  if (f.seed_given) resolved["seed"] = f.seed;
  if (f.allow_fresh) resolved["e2e"]["allow_fresh"] = true;
  return pipeline::config_from_json(resolved);
}

// ---- checkpoint plumbing --------------------------------------------------

void require_ckpt(const RunConfig& cfg, const std::string& name,
                  const std::string& needed_by) {
  const std::string path = cfg.ckpt_path(name);
  if (!fs::exists(path))
    throw ConfigError(needed_by + " needs the '" + name + "' checkpoint at '" +
                      path + "'; run the upstream stage first");
}

void save_ckpt(const RunConfig& cfg, const std::string& name,
               const nn::Checkpoint& ck) {
  const std::string path = cfg.ckpt_path(name);
  fs::create_directories(fs::path(path).parent_path());
  nn::save_checkpoint(path, ck);
  std::cout << "wrote " << path << "\n";
}

std::unique_ptr<nn::ReferenceCompletion> load_completion(const RunConfig& cfg,
                                                         const std::string& name) {
  const nn::Checkpoint ck = nn::load_checkpoint_as(cfg.ckpt_path(name), "completion");
  const double mr = ck.meta.value("max_range", cfg.scene.max_range);
  return std::make_unique<nn::ReferenceCompletion>(nn::restore_net(ck), mr);
}

std::unique_ptr<nn::SamplerNet> load_sampler(const RunConfig& cfg,
                                             const std::string& name) {
  const nn::Checkpoint ck = nn::load_checkpoint_as(cfg.ckpt_path(name), "sampler");
  return std::make_unique<nn::SamplerNet>(nn::restore_net(ck));
}

std::unique_ptr<nn::PredNetModel> load_prednet(const RunConfig& cfg) {
  const nn::Checkpoint ck = nn::load_checkpoint_as(cfg.ckpt_path("prednet"), "prednet");
  const double mr = ck.meta.value("max_range", cfg.scene.max_range);
  return std::make_unique<nn::PredNetModel>(nn::restore_net(ck), mr);
}

baselines::FixedMaskParams load_fixed(const RunConfig& cfg) {
  const nn::Checkpoint ck =
      nn::load_checkpoint_as(cfg.ckpt_path("fixed_mask"), "fixed_mask");
  const int h = ck.meta.at("height").get<int>();
  const int w = ck.meta.at("width").get<int>();
  const nn::Tensor* logits = ck.find("logits");
  if (!logits || logits->v.size() != static_cast<size_t>(2) * h * w)
    throw FormatError("fixed_mask checkpoint has no usable logits tensor");
  baselines::FixedMaskParams p;
  p.logits = ProbabilityMap(h, w);
  p.logits.logits = logits->v;
  return p;
}

void save_fixed(const RunConfig& cfg, const baselines::FixedMaskParams& p) {
  nn::Checkpoint ck;
  ck.meta = json{{"component", "fixed_mask"},
                 {"height", p.logits.height},
                 {"width", p.logits.width}};
  nn::Tensor t({2, p.logits.height, p.logits.width});
  t.v = p.logits.logits;
  ck.tensors.emplace_back("logits", std::move(t));
  save_ckpt(cfg, "fixed_mask", ck);
}

priors::ReconstructionStore require_store(const RunConfig& cfg,
                                          const std::string& name,
                                          const std::string& needed_by) {
  const std::string dir = cfg.store_dir(name);
  if (!fs::exists(fs::path(dir) / "store.json"))
    throw ConfigError(needed_by + " needs the '" + name + "' store at '" + dir +
                      "'; run the lower_bound sampler stage first");
  return io::load_store(dir);
}

// ---- shared output --------------------------------------------------------

void write_epoch_csv(const RunConfig& cfg, const std::string& label,
                     const pipeline::TrainResult& r) {
  const std::string path = cfg.trace_path("train_" + label);
  fs::create_directories(fs::path(path).parent_path());
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << std::setprecision(12);
  out << "epoch,task,sample,extra,total,soft_card,steps,skipped\n";
  for (size_t e = 0; e < r.epochs.size(); ++e) {
    const pipeline::EpochStats& s = r.epochs[e];
    out << e << ',' << s.task << ',' << s.sample << ',' << s.extra << ','
        << s.total << ',' << s.soft_card << ',' << s.steps << ',' << s.skipped
        << "\n";
  }
}

void print_train_result(const std::string& label, const pipeline::TrainResult& r) {
  const pipeline::EpochStats& s = r.last();
  std::cout << label << ": " << r.epochs.size() << " epoch(s), "
            << r.total_steps << " steps, " << r.skipped_frames
            << " skipped frames; final total=" << s.total << " task=" << s.task;
  if (s.soft_card > 0.0) std::cout << " soft_card=" << s.soft_card;
  std::cout << "\n";
}

void print_summary(const pipeline::MethodSummary& s) {
  std::cout << std::left << std::setw(14) << s.method << " frames="
            << std::setw(5) << s.frames << " rmse=" << std::fixed
            << std::setprecision(4) << s.mean_rmse << " mae=" << s.mean_mae
            << " soft=" << std::setprecision(1) << s.mean_soft
            << " hard=" << s.mean_hard << "\n";
  std::cout.unsetf(std::ios::fixed);
  std::cout << std::setprecision(6);
}

// ---- commands -------------------------------------------------------------

int cmd_gen_data(const RunConfig& cfg) {
  const uint64_t seed = Rng::split(cfg.seed, pipeline::kSeedGenData);
  for (size_t i = 0; i < cfg.splits.size(); ++i) {
    const pipeline::SplitParams& sp = cfg.splits[i];
    io::SplitSpec spec;
    spec.name = sp.name;
    spec.num_sequences = sp.num_sequences;
    spec.frames_per_sequence = sp.frames_per_sequence;
    io::generate_split(cfg.scene, spec, Rng::split(seed, i), cfg.data_dir());
    std::cout << "split " << sp.name << ": " << sp.num_sequences
              << " sequences x " << sp.frames_per_sequence << " frames\n";
  }
  return 0;
}

int cmd_train_completion(const RunConfig& cfg) {
  const pipeline::LoadedSplit data = pipeline::load_split(cfg, cfg.train_split);
  const uint64_t sseed =
      pipeline::stage_seed(cfg, cfg.stage_completion, pipeline::kSeedCompletion);
  nn::ReferenceCompletion net(cfg.completion_arch, Rng::split(sseed, 50),
                              cfg.scene.max_range);
  const pipeline::TrainResult r = pipeline::pretrain_completion(
      net, data, cfg.budget, cfg.stage_completion, sseed);
  save_ckpt(cfg, cfg.completion_name,
            nn::snapshot_net("completion", net.net(),
                             json{{"max_range", net.max_range()}}));
  write_epoch_csv(cfg, cfg.completion_name, r);
  print_train_result("completion '" + cfg.completion_name + "'", r);
  return 0;
}

int cmd_train_sampler(const RunConfig& cfg, bool joint) {
  const priors::PriorMode mode = cfg.sampler_prior;
  if (mode == priors::PriorMode::none)
    throw ConfigError(
        "stages.train_sampler.prior_mode must be lower_bound, prednet or "
        "implicit; the fixed mask has its own command");
  const std::string mode_name = priors::to_string(mode);
  const pipeline::StageParams& stage = joint ? cfg.stage_joint : cfg.stage_sampler;
  const uint64_t sseed = pipeline::stage_seed(
      cfg, stage, joint ? pipeline::kSeedJoint : pipeline::kSeedSampler);
  const int history = mode == priors::PriorMode::implicit ? cfg.implicit_history
                                                          : cfg.prednet_history;
  const pipeline::LoadedSplit data = pipeline::load_split(cfg, cfg.train_split);

  std::unique_ptr<nn::ReferenceCompletion> completion;
  if (fs::exists(cfg.ckpt_path(cfg.completion_name))) {
    completion = load_completion(cfg, cfg.completion_name);
  } else if (cfg.allow_fresh) {
    std::cerr << "warning: no completion checkpoint, starting from fresh weights\n";
    completion = std::make_unique<nn::ReferenceCompletion>(
        cfg.completion_arch, Rng::split(sseed, 50), cfg.scene.max_range);
  } else {
    require_ckpt(cfg, cfg.completion_name, "train-sampler");
  }

  std::unique_ptr<nn::SamplerNet> sampler;
  const std::string stage2_name = "sampler_" + mode_name;
  if (joint && fs::exists(cfg.ckpt_path(stage2_name))) {
    sampler = load_sampler(cfg, stage2_name);
  } else if (joint && !cfg.allow_fresh) {
    require_ckpt(cfg, stage2_name, "train-sampler --joint");
  } else {
    nn::UNetConfig arch = cfg.sampler_arch;
    arch.in_channels = priors::prior_channels(mode, history);
    sampler = std::make_unique<nn::SamplerNet>(arch, Rng::split(sseed, 51));
  }

  pipeline::SamplerTrainIO sio;
  priors::ReconstructionStore recon_out, sampled_out, recon_in, sampled_ref;
  std::unique_ptr<nn::PredNetModel> prednet;
  if (mode != priors::PriorMode::lower_bound) {
    recon_in = require_store(cfg, "recon_lower_bound", "train-sampler (" + mode_name + ")");
    sio.recon_in = &recon_in;
  }
  if (mode == priors::PriorMode::prednet) {
    require_ckpt(cfg, "prednet", "train-sampler (prednet prior)");
    prednet = load_prednet(cfg);
    prednet->net().set_frozen(true);
    sio.prednet = prednet.get();
    if (prednet->history() != history)
      throw ComponentError("prednet checkpoint has history " +
                           std::to_string(prednet->history()) +
                           " but the config asks for " + std::to_string(history));
  }
  if (mode == priors::PriorMode::implicit) {
    sampled_ref =
        require_store(cfg, "sampled_lower_bound", "train-sampler (implicit)");
    sio.sampled_ref = &sampled_ref;
  }
  sio.recon_out = &recon_out;
  sio.sampled_out = &sampled_out;

  const pipeline::TrainResult r =
      joint ? pipeline::joint_finetune(*sampler, *completion, data, mode, sio,
                                       cfg.budget, cfg.temperature, history,
                                       stage, sseed)
            : pipeline::train_sampler(*sampler, *completion, data, mode, sio,
                                      cfg.budget, cfg.temperature, history,
                                      stage, sseed);

  const std::string out_name = stage2_name + (joint ? "_joint" : "");
  save_ckpt(cfg, out_name,
            nn::snapshot_net("sampler", sampler->net(),
                             json{{"prior_mode", mode_name}, {"history", history}}));
  if (joint)
    save_ckpt(cfg, cfg.completion_name + "_joint",
              nn::snapshot_net("completion", completion->net(),
                               json{{"max_range", completion->max_range()}}));
  io::save_store(recon_out, cfg.store_dir("recon_" + mode_name + (joint ? "_joint" : "")));
  io::save_store(sampled_out, cfg.store_dir("sampled_" + mode_name + (joint ? "_joint" : "")));
  write_epoch_csv(cfg, out_name, r);
  print_train_result("sampler '" + out_name + "'", r);
  return 0;
}

int cmd_train_fixed(const RunConfig& cfg) {
  const pipeline::LoadedSplit data = pipeline::load_split(cfg, cfg.train_split);
  const uint64_t sseed =
      pipeline::stage_seed(cfg, cfg.stage_fixed, pipeline::kSeedFixed);
  std::unique_ptr<nn::ReferenceCompletion> completion;
  if (fs::exists(cfg.ckpt_path(cfg.completion_name))) {
    completion = load_completion(cfg, cfg.completion_name);
  } else if (cfg.allow_fresh) {
    std::cerr << "warning: no completion checkpoint, starting from fresh weights\n";
    completion = std::make_unique<nn::ReferenceCompletion>(
        cfg.completion_arch, Rng::split(sseed, 50), cfg.scene.max_range);
  } else {
    require_ckpt(cfg, cfg.completion_name, "train-fixed");
  }

  baselines::FixedMaskParams params(cfg.scene.height, cfg.scene.width,
                                    Rng::split(sseed, 52));
  const pipeline::TrainResult r = pipeline::train_fixed_mask(
      params, *completion, data, cfg.budget, cfg.temperature, cfg.stage_fixed,
      sseed);
  save_fixed(cfg, params);
  write_epoch_csv(cfg, "fixed_mask", r);
  print_train_result("fixed mask", r);
  return 0;
}

int cmd_train_prednet(const RunConfig& cfg) {
  const pipeline::LoadedSplit data = pipeline::load_split(cfg, cfg.train_split);
  const uint64_t sseed =
      pipeline::stage_seed(cfg, cfg.stage_prednet, pipeline::kSeedPredNet);
  const priors::ReconstructionStore store =
      require_store(cfg, "recon_lower_bound", "train-prednet");
  nn::UNetConfig arch = cfg.prednet_arch;
  arch.in_channels = cfg.prednet_history;
  nn::PredNetModel model(arch, Rng::split(sseed, 53), cfg.scene.max_range);
  const pipeline::TrainResult r =
      pipeline::train_prednet(model, store, data, cfg.stage_prednet, sseed);
  save_ckpt(cfg, "prednet",
            nn::snapshot_net("prednet", model.net(),
                             json{{"max_range", model.max_range()},
                                  {"history", model.history()}}));
  write_epoch_csv(cfg, "prednet", r);
  print_train_result("prednet", r);
  return 0;
}

int cmd_gen_pseudo_gt(const RunConfig& cfg) {
  const pipeline::LoadedSplit data = pipeline::load_split(cfg, cfg.train_split);
  const uint64_t sseed =
      pipeline::stage_seed(cfg, cfg.stage_pseudo, pipeline::kSeedPseudo);
  const pipeline::PseudoGtResult res = pipeline::generate_pseudo_gt(
      cfg, data, cfg.train_split, cfg.pseudo_fraction, cfg.stage_pseudo, sseed,
      cfg.out_dir + "/pseudo");
  write_epoch_csv(cfg, "pseudo_gt", res.train);
  std::cout << "pseudo ground truth for split '" << cfg.train_split
            << "': validity=" << res.validity_fraction
            << " rmse_vs_gt=" << res.mean_rmse_vs_gt << "\n";
  std::cout << "wrote " << cfg.out_dir << "/pseudo/" << res.manifest.split
            << ".json\n";
  return 0;
}

int cmd_run_e2e(const RunConfig& cfg) {
  const pipeline::LoadedSplit data = pipeline::load_split(cfg, cfg.e2e_split);
  require_ckpt(cfg, cfg.completion_name, "run-e2e");
  require_ckpt(cfg, "sampler_prednet", "run-e2e");
  require_ckpt(cfg, "prednet", "run-e2e");
  const auto completion = load_completion(cfg, cfg.completion_name);
  const auto sampler = load_sampler(cfg, "sampler_prednet");
  const auto prednet = load_prednet(cfg);

  const uint64_t seed = Rng::split(cfg.seed, pipeline::kSeedE2E);
  std::vector<pipeline::TraceRow> adaptive, random;
  for (int s = 0; s < static_cast<int>(data.sequences.size()); ++s) {
    pipeline::E2EOptions opts;
    opts.memory_size = cfg.memory_size;
    opts.budget = cfg.budget;
    opts.temp = cfg.temperature;
    opts.seed = Rng::split(seed, 2, s);
    const auto a = pipeline::run_end_to_end(data.sequences[s], *sampler,
                                            *prednet, *completion, opts);
    adaptive.insert(adaptive.end(), a.begin(), a.end());
    const auto b = pipeline::run_all_random(data.sequences[s], *completion, opts);
    random.insert(random.end(), b.begin(), b.end());
  }
  pipeline::write_trace_csv(adaptive, cfg.trace_path("e2e_adaptive"));
  pipeline::write_trace_csv(random, cfg.trace_path("e2e_random"));

  int max_t = 0;
  for (const auto& r : adaptive) max_t = std::max(max_t, r.t);
  const int steady = max_t >= 10 ? 10 : cfg.memory_size;
  std::cout << "rollout over '" << cfg.e2e_split << "', steady state t >= "
            << steady << ":\n";
  print_summary(pipeline::summarize("adaptive", adaptive, steady));
  print_summary(pipeline::summarize("random", random, steady));
  return 0;
}

int cmd_eval(const RunConfig& cfg) {
  const pipeline::LoadedSplit data = pipeline::load_split(cfg, cfg.eval_split);
  require_ckpt(cfg, cfg.completion_name, "eval");
  const auto completion = load_completion(cfg, cfg.completion_name);

  pipeline::EvalArtifacts art;
  art.completion = completion.get();
  art.memory_size = cfg.memory_size;
  art.implicit_history = cfg.implicit_history;

  std::unique_ptr<nn::SamplerNet> s_lower, s_pred, s_impl;
  std::unique_ptr<nn::PredNetModel> prednet;
  baselines::FixedMaskParams fixed;
  if (fs::exists(cfg.ckpt_path("sampler_lower_bound"))) {
    s_lower = load_sampler(cfg, "sampler_lower_bound");
    art.sampler_lower_bound = s_lower.get();
  }
  if (fs::exists(cfg.ckpt_path("sampler_prednet")) &&
      fs::exists(cfg.ckpt_path("prednet"))) {
    s_pred = load_sampler(cfg, "sampler_prednet");
    prednet = load_prednet(cfg);
    art.sampler_prednet = s_pred.get();
    art.prednet = prednet.get();
  }
  if (fs::exists(cfg.ckpt_path("sampler_implicit"))) {
    s_impl = load_sampler(cfg, "sampler_implicit");
    art.sampler_implicit = s_impl.get();
  }
  if (fs::exists(cfg.ckpt_path("fixed_mask"))) {
    fixed = load_fixed(cfg);
    art.fixed = &fixed;
  }

  std::cout << "eval over '" << cfg.eval_split << "', frames t >= "
            << cfg.memory_size << ":\n";
  for (const std::string& m : pipeline::method_order()) {
    const bool available =
        m == "agnostic" || (m == "fixed" && art.fixed) ||
        (m == "lower_bound" && art.sampler_lower_bound) ||
        (m == "prednet" && art.sampler_prednet) ||
        (m == "implicit" && art.sampler_implicit);
    if (!available) {
      std::cerr << "note: skipping method '" << m << "' (no checkpoint)\n";
      continue;
    }
    std::vector<double> samples;
    const auto rows = pipeline::evaluate_method(m, data, art, cfg.budget,
                                                cfg.temperature, cfg.seed,
                                                &samples);
    pipeline::write_trace_csv(rows, cfg.trace_path("eval_" + m));
    if (!samples.empty())
      pipeline::write_histogram_csv(samples, cfg.scene.max_range, 20,
                                    cfg.trace_path("hist_" + m));
    print_summary(pipeline::summarize(m, rows, cfg.memory_size));
  }
  return 0;
}

int cmd_mix_match(const RunConfig& cfg) {
  const pipeline::LoadedSplit data = pipeline::load_split(cfg, cfg.eval_split);
  require_ckpt(cfg, cfg.completion_name, "mix-match");
  require_ckpt(cfg, cfg.mix_completion_b, "mix-match");
  require_ckpt(cfg, "sampler_prednet", "mix-match");
  require_ckpt(cfg, "prednet", "mix-match");
  const auto comp_a = load_completion(cfg, cfg.completion_name);
  const auto comp_b = load_completion(cfg, cfg.mix_completion_b);
  const auto sampler = load_sampler(cfg, "sampler_prednet");
  const auto prednet = load_prednet(cfg);

  const uint64_t hash_a = comp_a->param_hash();
  const uint64_t hash_b = comp_b->param_hash();
  const uint64_t hash_s = sampler->net().param_hash();
  const uint64_t hash_p = prednet->net().param_hash();

  pipeline::EvalArtifacts art;
  art.sampler_prednet = sampler.get();
  art.prednet = prednet.get();
  art.memory_size = cfg.memory_size;
  art.implicit_history = cfg.implicit_history;

  art.completion = comp_a.get();
  const auto matched = pipeline::evaluate_method(
      "prednet", data, art, cfg.budget, cfg.temperature, cfg.seed, nullptr);
  art.completion = comp_b.get();
  const auto mixed = pipeline::evaluate_method(
      "prednet", data, art, cfg.budget, cfg.temperature, cfg.seed, nullptr);

  if (comp_a->param_hash() != hash_a || comp_b->param_hash() != hash_b ||
      sampler->net().param_hash() != hash_s ||
      prednet->net().param_hash() != hash_p)
    throw TrainingError("mix-match must not update any parameters");

  pipeline::write_trace_csv(matched, cfg.trace_path("mix_matched"));
  pipeline::write_trace_csv(mixed, cfg.trace_path("mix_mixed"));

  const auto sm = pipeline::summarize("matched", matched, cfg.memory_size);
  const auto sx = pipeline::summarize("mixed", mixed, cfg.memory_size);
  std::cout << "mix and match over '" << cfg.eval_split << "' (sampler from '"
            << cfg.completion_name << "', frames t >= " << cfg.memory_size
            << "):\n";
  print_summary(sm);
  print_summary(sx);
  if (sm.mean_rmse > 0.0)
    std::cout << "mixed/matched rmse ratio: "
              << (sx.mean_rmse / sm.mean_rmse) << "\n";
  return 0;
}

int cmd_report(const RunConfig& cfg) {
  const pipeline::ReportResult res = pipeline::write_report(cfg);
  if (!res.comparison.empty()) {
    std::cout << "method comparison (eval split, frames t >= "
              << cfg.memory_size << "):\n";
    for (const auto& s : res.comparison) print_summary(s);
  }
  if (!res.rollout.empty()) {
    std::cout << "rollout steady state:\n";
    for (const auto& s : res.rollout) print_summary(s);
  }
  for (const std::string& f : res.files) std::cout << "wrote " << f << "\n";
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"prior-based adaptive depth sampling pipeline", "dsamp"};
  app.require_subcommand(1);
  Flags f;
  app.add_option("--config", f.config_path, "config file (JSON)");
  app.add_option("--set", f.sets, "override a config key: dotted.path=value")
      ->take_all();
  CLI::Option* out_opt = app.add_option("--out", f.out, "output directory");
  CLI::Option* seed_opt = app.add_option("--seed", f.seed, "run seed");
  app.add_flag("--allow-fresh", f.allow_fresh,
               "let a stage start without its upstream checkpoint");

  const std::vector<std::pair<std::string, std::string>> commands{
      {"gen-data", "generate the synthetic dataset splits"},
      {"train-completion", "stage 1: pretrain the completion net on random masks"},
      {"train-sampler", "stage 2: train the sampler against the frozen completion"},
      {"train-fixed", "train the dataset-wide fixed sampling mask"},
      {"train-prednet", "train the depth predictor on stored reconstructions"},
      {"gen-pseudo-gt", "distill a dense pseudo ground-truth dataset"},
      {"run-e2e", "run the adaptive sampling loop over the rollout split"},
      {"eval", "evaluate every available sampling method on the eval split"},
      {"mix-match", "pair the trained sampler with a different completion net"},
      {"report", "render tables and plots from the trace files"}};
  for (const auto& [name, desc] : commands)
    app.add_subcommand(name, desc)->fallthrough();
  app.get_subcommand("train-sampler")
      ->add_flag("--joint", f.joint, "stage 3: fine-tune sampler and completion together");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "ERROR usage: " << e.what() << std::endl;
    return 2;
  }
  f.out_given = out_opt->count() > 0;
  f.seed_given = seed_opt->count() > 0;

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    json resolved;
    const RunConfig cfg = resolve_config(f, resolved);
    std::string snapshot_name = command;
    if (command == "train-sampler") {
      snapshot_name += "_" + priors::to_string(cfg.sampler_prior);
      if (f.joint) snapshot_name += "_joint";
    }
    pipeline::write_resolved_config(cfg, resolved, snapshot_name);

    if (command == "gen-data") return cmd_gen_data(cfg);
    if (command == "train-completion") return cmd_train_completion(cfg);
    if (command == "train-sampler") return cmd_train_sampler(cfg, f.joint);
    if (command == "train-fixed") return cmd_train_fixed(cfg);
    if (command == "train-prednet") return cmd_train_prednet(cfg);
    if (command == "gen-pseudo-gt") return cmd_gen_pseudo_gt(cfg);
    if (command == "run-e2e") return cmd_run_e2e(cfg);
    if (command == "eval") return cmd_eval(cfg);
    if (command == "mix-match") return cmd_mix_match(cfg);
    if (command == "report") return cmd_report(cfg);
    std::cerr << "ERROR usage: unknown command '" << command << "'" << std::endl;
    return 2;
  } catch (const Error& e) {
    std::cerr << "ERROR " << e.category() << ": " << e.what() << std::endl;
    return std::string(e.category()) == "config" ? 3 : 4;
  } catch (const std::exception& e) {
    std::cerr << "ERROR runtime: " << e.what() << std::endl;
    return 4;
  }
}

}  // namespace dsamp::cli
