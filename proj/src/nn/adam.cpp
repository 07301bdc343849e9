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

#include "dsamp/nn/adam.hpp"

#include <cmath>
#include <utility>

#include "dsamp/nn/kernels.hpp"

namespace dsamp::nn {

Adam::Adam(std::vector<NamedParam> params, AdamConfig cfg)
    : params_(std::move(params)), cfg_(cfg) {
  if (cfg_.lr <= 0.0) throw ConfigError("Adam: lr must be > 0");
  m_.resize(params_.size());
  v_.resize(params_.size());
  for (size_t i = 0; i < params_.size(); ++i) {
    m_[i].v.assign(params_[i].value->numel(), 0.0);
    v_[i].v.assign(params_[i].value->numel(), 0.0);
  }
}

void Adam::step(double grad_scale) {
  ++t_;
  const double b1t = std::pow(cfg_.beta1, t_);
  const double b2t = std::pow(cfg_.beta2, t_);
  for (size_t i = 0; i < params_.size(); ++i) {
    kernels::adam_step(params_[i].value->data(), params_[i].grad->data(),
                       m_[i].v.data(), v_[i].v.data(), params_[i].value->numel(),
                       cfg_.lr, cfg_.beta1, cfg_.beta2, cfg_.eps, b1t, b2t,
                       grad_scale);
  }
}

}  // namespace dsamp::nn
