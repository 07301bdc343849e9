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

#include "dsamp/pipeline/config.hpp"
#include "dsamp/pipeline/eval.hpp"

namespace dsamp::pipeline {

struct ReportResult {
  // Eval-split comparison in canonical method order (methods present).
  std::vector<MethodSummary> comparison;
  // Rollout steady-state summaries ("adaptive"/"random"), when traces exist.
  std::vector<MethodSummary> rollout;
  std::vector<std::string> files;  // artifacts written under <out>/report
};

/// Renders everything under <out>/report from the trace files alone:
/// a comparison table (CSV + text), per-frame rollout curves (CSV + PNG)
/// and sampled-depth histograms (CSV + PNG). A run directory without any
/// trace is a DataError.
ReportResult write_report(const RunConfig& cfg);

}  // namespace dsamp::pipeline
