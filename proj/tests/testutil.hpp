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

#include <cmath>
#include <functional>

#include "dsamp/core/rng.hpp"
#include "dsamp/nn/tensor.hpp"

namespace testutil {

inline void fill_uniform(dsamp::nn::Tensor& t, dsamp::Rng& rng,
                         double lo = -1.0, double hi = 1.0) {
  for (double& v : t.v) v = rng.uniform(lo, hi);
}

/// Central difference of f() with respect to the location xi.
inline double central_diff(const std::function<double()>& f, double& xi,
                           double h = 1e-6) {
  const double x0 = xi;
  xi = x0 + h;
  const double fp = f();
  xi = x0 - h;
  const double fm = f();
  xi = x0;
  return (fp - fm) / (2.0 * h);
}

inline bool close_rel(double a, double b, double rtol, double atol = 1e-9) {
  return std::abs(a - b) <= atol + rtol * std::max(std::abs(a), std::abs(b));
}

}  // namespace testutil
