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

#include "dsamp/pipeline/eval.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "dsamp/core/metrics.hpp"
#include "dsamp/mask/mask_ops.hpp"
#include "dsamp/pipeline/config.hpp"
#include "dsamp/priors/priors.hpp"

namespace dsamp::pipeline {

namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    const size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

void write_trace_csv(const std::vector<TraceRow>& rows, const std::string& path) {
  fs::create_directories(fs::path(path).parent_path());
  std::ofstream out(path);
  if (!out) throw DataError("cannot write trace file '" + path + "'");
  out << kTraceHeader << "\n";
  for (const TraceRow& r : rows) {
    out << r.sequence_id << ',' << r.t << ',' << r.branch << ','
        << fmt(r.soft_count) << ',' << r.hard_count << ',' << fmt(r.rmse) << ','
        << fmt(r.mae) << "\n";
  }
  if (!out) throw DataError("short write on trace file '" + path + "'");
}

std::vector<TraceRow> read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read trace file '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader)
    throw DataError("trace file '" + path + "' has an unexpected header");
  std::vector<TraceRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 7)
      throw DataError("trace file '" + path + "' has a malformed row: " + line);
    TraceRow r;
    r.sequence_id = f[0];
    r.t = std::atoi(f[1].c_str());
    r.branch = f[2];
    r.soft_count = std::strtod(f[3].c_str(), nullptr);
    r.hard_count = std::atoi(f[4].c_str());
    r.rmse = std::strtod(f[5].c_str(), nullptr);
    r.mae = std::strtod(f[6].c_str(), nullptr);
    rows.push_back(std::move(r));
  }
  return rows;
}

MethodSummary summarize(const std::string& method,
                        const std::vector<TraceRow>& rows, int min_t) {
  MethodSummary s;
  s.method = method;
  for (const TraceRow& r : rows) {
    if (r.t < min_t || !std::isfinite(r.rmse)) continue;
    s.mean_rmse += r.rmse;
    s.mean_mae += r.mae;
    s.mean_soft += r.soft_count;
    s.mean_hard += r.hard_count;
    ++s.frames;
  }
  if (s.frames > 0) {
    const double inv = 1.0 / s.frames;
    s.mean_rmse *= inv;
    s.mean_mae *= inv;
    s.mean_soft *= inv;
    s.mean_hard *= inv;
  }
  return s;
}

const std::vector<std::string>& method_order() {
  static const std::vector<std::string> order{"agnostic", "fixed", "implicit",
                                              "prednet", "lower_bound"};
  return order;
}

int method_index(const std::string& method) {
  const auto& order = method_order();
  for (int i = 0; i < static_cast<int>(order.size()); ++i)
    if (order[i] == method) return i;
  throw ConfigError("unknown evaluation method '" + method + "'");
}

uint64_t method_seed(uint64_t run_seed, const std::string& method) {
  return Rng::split(run_seed, kSeedEval * 16 + method_index(method));
}

namespace {

/// Direct per-frame evaluation: the mask depends only on the current
/// frame (or on nothing at all), no rollout state.
std::vector<TraceRow> evaluate_direct(const std::string& method,
                                      const LoadedSplit& data,
                                      const EvalArtifacts& art,
                                      const SamplingBudget& budget,
                                      const Temperature& temp, uint64_t mseed,
                                      std::vector<double>* sampled_values) {
  std::vector<TraceRow> rows;
  for (int s = 0; s < static_cast<int>(data.sequences.size()); ++s) {
    const DepthSequence& seq = data.sequences[s];
    const uint64_t seq_seed = Rng::split(mseed, 2, s);
    for (int t = 0; t < static_cast<int>(seq.frames.size()); ++t) {
      const SequenceFrame& fr = seq.frames[t];
      SampleMask hard;
      double soft_count = 0.0;
      std::string branch;
      if (method == "agnostic") {
        hard = random_valid_mask(fr.depth, budget, Rng::split(seq_seed, 1, t));
        soft_count = static_cast<double>(hard.ones_count());
        branch = "random";
      } else if (method == "fixed") {
        const SampleMask soft = baselines::fixed_mask_forward(*art.fixed, temp);
        hard = mask::sparse_budget_select(fr.depth, soft, budget);
        soft_count = mask::mask_cardinality(soft);
        branch = "fixed";
      } else {  // lower_bound
        priors::PriorStack none(1);
        const nn::Tensor prior =
            priors::make_prior(priors::PriorMode::lower_bound, none, nullptr,
                               &fr.depth, art.completion->max_range());
        const ProbabilityMap pm = art.sampler_lower_bound->forward(prior);
        const SampleMask soft = mask::soft_argmax(pm, temp);
        hard = mask::sparse_budget_select(fr.depth, soft, budget);
        soft_count = mask::mask_cardinality(soft);
        branch = "adaptive";
      }

      const DepthMap sampled = apply_mask(fr.depth, hard);
      if (sampled_values)
        for (size_t i = 0; i < sampled.values.size(); ++i)
          if (sampled.valid[i]) sampled_values->push_back(sampled.values[i]);
      const DepthMap recon =
          art.completion->complete(sampled, hard, fr.image);

      TraceRow row;
      row.sequence_id = seq.sequence_id;
      row.t = t;
      row.branch = branch;
      row.soft_count = soft_count;
      row.hard_count = static_cast<int>(hard.ones_count());
      if (fr.depth.valid_count() > 0) {
        row.rmse = rmse(recon, fr.depth);
        row.mae = mae(recon, fr.depth);
      } else {
        row.rmse = std::numeric_limits<double>::quiet_NaN();
        row.mae = std::numeric_limits<double>::quiet_NaN();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace

std::vector<TraceRow> evaluate_method(const std::string& method,
                                      const LoadedSplit& data,
                                      const EvalArtifacts& art,
                                      const SamplingBudget& budget,
                                      const Temperature& temp, uint64_t seed,
                                      std::vector<double>* sampled_values) {
  method_index(method);  // validates the name
  if (art.completion == nullptr)
    throw ConfigError("evaluation requires a completion task");
  const auto need = [&](const void* p, const std::string& what) {
    if (p == nullptr)
      throw ConfigError("method '" + method + "' requires " + what);
  };

  const uint64_t mseed = method_seed(seed, method);
  if (method == "fixed") need(art.fixed, "a fixed mask checkpoint");
  if (method == "lower_bound")
    need(art.sampler_lower_bound, "a lower-bound sampler checkpoint");
  if (method == "agnostic" || method == "fixed" || method == "lower_bound")
    return evaluate_direct(method, data, art, budget, temp, mseed,
                           sampled_values);

  std::vector<TraceRow> rows;
  for (int s = 0; s < static_cast<int>(data.sequences.size()); ++s) {
    E2EOptions opts;
    opts.budget = budget;
    opts.temp = temp;
    opts.seed = Rng::split(mseed, 2, s);
    opts.sampled_values = sampled_values;
    std::vector<TraceRow> part;
    if (method == "prednet") {
      need(art.sampler_prednet, "a predictor-prior sampler checkpoint");
      need(art.prednet, "a predictor checkpoint");
      opts.memory_size = art.memory_size;
      part = run_end_to_end(data.sequences[s], *art.sampler_prednet,
                            *art.prednet, *art.completion, opts);
    } else {  // implicit
      need(art.sampler_implicit, "an implicit-prior sampler checkpoint");
      opts.memory_size = art.implicit_history;
      part = run_stack_rollout(data.sequences[s], *art.sampler_implicit,
                               *art.completion, art.implicit_history, opts);
    }
    rows.insert(rows.end(), part.begin(), part.end());
  }
  return rows;
}

void write_histogram_csv(const std::vector<double>& samples, double max_range,
                         int bins, const std::string& path) {
  if (bins < 1) throw ConfigError("histogram needs >= 1 bin");
  std::vector<double> edges(bins + 1);
  for (int i = 0; i <= bins; ++i)
    edges[i] = max_range * static_cast<double>(i) / bins;
  const std::vector<double> fractions = depth_histogram(samples, edges);

  fs::create_directories(fs::path(path).parent_path());
  std::ofstream out(path);
  if (!out) throw DataError("cannot write histogram file '" + path + "'");
  out << "bin_lo,bin_hi,fraction\n";
  for (int i = 0; i < bins; ++i)
    out << fmt(edges[i]) << ',' << fmt(edges[i + 1]) << ',' << fmt(fractions[i])
        << "\n";
}

}  // namespace dsamp::pipeline
