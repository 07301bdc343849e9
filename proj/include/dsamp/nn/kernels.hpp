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

#include <cstddef>

namespace dsamp::nn::kernels {

// OpenMP-parallel kernels. All loops are organized so that every output
// element is produced by exactly one thread with a fixed accumulation
// order, which keeps results bit-identical for any thread count.
//
// Layouts: activations x/y are (C,H,W) planar row-major; conv weights are
// (Co,Ci,K,K); dy has the output shape of the matching forward call.
// The *_backward_params kernels accumulate into dw/db.

void conv3x3_forward(const double* x, const double* w, const double* bias,
                     double* y, int ci, int co, int h, int wd);
void conv3x3_backward_input(const double* dy, const double* w, double* dx,
                            int ci, int co, int h, int wd);
void conv3x3_backward_params(const double* dy, const double* x, double* dw,
                             double* db, int ci, int co, int h, int wd);

void conv1x1_forward(const double* x, const double* w, const double* bias,
                     double* y, int ci, int co, int h, int wd);
void conv1x1_backward_input(const double* dy, const double* w, double* dx,
                            int ci, int co, int h, int wd);
void conv1x1_backward_params(const double* dy, const double* x, double* dw,
                             double* db, int ci, int co, int h, int wd);

void relu_forward(const double* x, double* y, size_t n);
void relu_backward(const double* x, const double* dy, double* dx, size_t n);

// 2x2 max pooling, stride 2. h and w refer to the input and must be even.
// idx records the winning input offset per output element.
void maxpool2x2_forward(const double* x, double* y, int* idx, int c, int h, int w);
void maxpool2x2_backward(const double* dy, const int* idx, double* dx,
                         int c, int h, int w);

// Nearest-neighbor 2x upsampling. h and w refer to the input.
void upsample2x_forward(const double* x, double* y, int c, int h, int w);
void upsample2x_backward(const double* dy, double* dx, int c, int h, int w);

// Fused Adam update. b1t/b2t are beta1^t / beta2^t for bias correction;
// grad_scale is applied to g on the fly (gradient accumulation averaging).
void adam_step(double* w, const double* g, double* m, double* v, size_t n,
               double lr, double b1, double b2, double eps, double b1t,
               double b2t, double grad_scale);

namespace serial {

// Naive reference implementations of the kernels above. Textbook loop
// nests, no pragmas; kept as the oracle the parallel kernels are tested
// and benchmarked against.

void conv3x3_forward(const double* x, const double* w, const double* bias,
                     double* y, int ci, int co, int h, int wd);
void conv3x3_backward_input(const double* dy, const double* w, double* dx,
                            int ci, int co, int h, int wd);
void conv3x3_backward_params(const double* dy, const double* x, double* dw,
                             double* db, int ci, int co, int h, int wd);
void conv1x1_forward(const double* x, const double* w, const double* bias,
                     double* y, int ci, int co, int h, int wd);
void conv1x1_backward_input(const double* dy, const double* w, double* dx,
                            int ci, int co, int h, int wd);
void conv1x1_backward_params(const double* dy, const double* x, double* dw,
                             double* db, int ci, int co, int h, int wd);
void relu_forward(const double* x, double* y, size_t n);
void relu_backward(const double* x, const double* dy, double* dx, size_t n);
void maxpool2x2_forward(const double* x, double* y, int* idx, int c, int h, int w);
void maxpool2x2_backward(const double* dy, const int* idx, double* dx,
                         int c, int h, int w);
void upsample2x_forward(const double* x, double* y, int c, int h, int w);
void upsample2x_backward(const double* dy, double* dx, int c, int h, int w);
void adam_step(double* w, const double* g, double* m, double* v, size_t n,
               double lr, double b1, double b2, double eps, double b1t,
               double b2t, double grad_scale);

}  // namespace serial

}  // namespace dsamp::nn::kernels
