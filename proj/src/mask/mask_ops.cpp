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

#include "dsamp/mask/mask_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dsamp::mask {

namespace {

/// Pixel indices ordered by descending soft value, row-major on ties.
std::vector<size_t> descending_order(const std::vector<double>& values) {
  std::vector<size_t> order(values.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&values](size_t a, size_t b) {
    return values[a] > values[b];
  });
  return order;
}

}  // namespace

SampleMask soft_argmax(const ProbabilityMap& p, const Temperature& temp) {
  temp.validate();
  SampleMask m(p.height, p.width, SamplingBudget{});
  const size_t n = m.pixel_count();
  const double* l0 = p.logits.data();
  const double* l1 = p.logits.data() + n;
  for (size_t i = 0; i < n; ++i) {
    if (!std::isfinite(l0[i]) || !std::isfinite(l1[i]))
      throw NumericError("soft_argmax: non-finite logit");
    // logistic(beta * (l1 - l0)) == exp(b*l1) / (exp(b*l0) + exp(b*l1))
    const double z = temp.beta * (l1[i] - l0[i]);
    m.values[i] = (z >= 0.0) ? 1.0 / (1.0 + std::exp(-z))
                             : std::exp(z) / (1.0 + std::exp(z));
  }
  m.hardened = false;
  return m;
}

void soft_argmax_backward(const SampleMask& soft, const Temperature& temp,
                          const std::vector<double>& dmask,
                          std::vector<double>& dlogits) {
  const size_t n = soft.pixel_count();
  if (dmask.size() != n || dlogits.size() != 2 * n)
    throw ShapeError("soft_argmax_backward: gradient size mismatch");
  double* d0 = dlogits.data();
  double* d1 = dlogits.data() + n;
  for (size_t i = 0; i < n; ++i) {
    const double g = dmask[i] * temp.beta * soft.values[i] * (1.0 - soft.values[i]);
    d1[i] += g;
    d0[i] -= g;
  }
}

double mask_cardinality(const SampleMask& m) {
  return std::accumulate(m.values.begin(), m.values.end(), 0.0);
}

double sample_loss(const SampleMask& m, const SamplingBudget& budget) {
  if (budget.k < 1) throw ConfigError("sample_loss: budget k must be >= 1");
  return std::abs(mask_cardinality(m) - budget.k) / budget.k;
}

double sample_loss_grad(const SampleMask& m, const SamplingBudget& budget) {
  if (budget.k < 1) throw ConfigError("sample_loss: budget k must be >= 1");
  const double d = mask_cardinality(m) - budget.k;
  if (d > 0.0) return 1.0 / budget.k;
  if (d < 0.0) return -1.0 / budget.k;
  return 0.0;
}

SampleMask harden_topk(const SampleMask& m, const SamplingBudget& budget) {
  SampleMask out(m.height, m.width, budget);
  out.hardened = true;
  const long long want = std::min<long long>(budget.k, m.pixel_count());
  if (want <= 0) return out;
  const auto order = descending_order(m.values);
  for (long long i = 0; i < want; ++i) out.values[order[i]] = 1.0;
  return out;
}

SampleMask sparse_budget_select(const DepthMap& sparse_gt, const SampleMask& m,
                                const SamplingBudget& budget) {
  if (sparse_gt.height != m.height || sparse_gt.width != m.width)
    throw ShapeError("sparse_budget_select: GT and mask shapes differ");
  SampleMask out(m.height, m.width, budget);
  out.hardened = true;
  long long want = std::min<long long>(budget.k, m.pixel_count());
  if (want <= 0) return out;
  const auto order = descending_order(m.values);
  for (size_t i : order) {
    if (!sparse_gt.valid[i]) continue;
    out.values[i] = 1.0;
    if (--want == 0) break;
  }
  return out;
}

}  // namespace dsamp::mask
