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

// Compares the OpenMP kernels against the serial reference implementation.
// The serial kernels are the testing oracle; this tool reports how much the
// parallel versions buy on the current machine and sanity-checks agreement.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include <omp.h>

#include "dsamp/core/rng.hpp"
#include "dsamp/nn/kernels.hpp"
#include "dsamp/nn/tensor.hpp"
#include "dsamp/nn/unet.hpp"

using namespace dsamp;
using namespace dsamp::nn;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_per_call(const std::function<void()>& fn, int min_reps) {
  fn();  // warm up
  const auto t0 = Clock::now();
  int reps = 0;
  double elapsed = 0.0;
  do {
    fn();
    ++reps;
    elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
  } while (reps < min_reps || elapsed < 0.2);
  return elapsed / reps;
}

void fill(std::vector<double>& t, Rng& rng) {
  for (auto& v : t) v = rng.uniform(-1.0, 1.0);
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

void print_row(const char* name, double serial_s, double omp_s, double diff) {
  std::printf("%-28s %10.3f ms %10.3f ms %8.2fx   max|d|=%.3g\n", name,
              serial_s * 1e3, omp_s * 1e3, serial_s / omp_s, diff);
}

}  // namespace

int main(int argc, char** argv) {
  int h = 64, w = 128, ci = 16, co = 16;
  if (argc >= 3) {
    h = std::atoi(argv[1]);
    w = std::atoi(argv[2]);
  }
  if (argc >= 5) {
    ci = std::atoi(argv[3]);
    co = std::atoi(argv[4]);
  }

  std::printf("bench_kernels  %dx%d  ci=%d co=%d  omp threads=%d\n\n", h, w, ci, co,
              omp_get_max_threads());
  std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "omp", "speedup");

  Rng rng(20260823);
  const size_t nin = static_cast<size_t>(ci) * h * w;
  const size_t nout = static_cast<size_t>(co) * h * w;
  std::vector<double> x(nin), wgt(static_cast<size_t>(co) * ci * 9), bias(co),
      y_ref(nout), y_omp(nout), dy(nout);
  fill(x, rng);
  fill(wgt, rng);
  fill(bias, rng);
  fill(dy, rng);

  {
    const double s = seconds_per_call(
        [&] {
          kernels::serial::conv3x3_forward(x.data(), wgt.data(), bias.data(),
                                           y_ref.data(), ci, co, h, w);
        },
        3);
    const double p = seconds_per_call(
        [&] {
          kernels::conv3x3_forward(x.data(), wgt.data(), bias.data(), y_omp.data(),
                                   ci, co, h, w);
        },
        3);
    print_row("conv3x3 forward", s, p, max_abs_diff(y_ref, y_omp));
  }
  {
    std::vector<double> dx_ref(nin), dx_omp(nin);
    const double s = seconds_per_call(
        [&] {
          kernels::serial::conv3x3_backward_input(dy.data(), wgt.data(),
                                                  dx_ref.data(), ci, co, h, w);
        },
        3);
    const double p = seconds_per_call(
        [&] {
          kernels::conv3x3_backward_input(dy.data(), wgt.data(), dx_omp.data(), ci,
                                          co, h, w);
        },
        3);
    print_row("conv3x3 backward_input", s, p, max_abs_diff(dx_ref, dx_omp));
  }
  {
    std::vector<double> dw_ref(wgt.size()), db_ref(co), dw_omp(wgt.size()),
        db_omp(co);
    const double s = seconds_per_call(
        [&] {
          std::fill(dw_ref.begin(), dw_ref.end(), 0.0);
          std::fill(db_ref.begin(), db_ref.end(), 0.0);
          kernels::serial::conv3x3_backward_params(dy.data(), x.data(),
                                                   dw_ref.data(), db_ref.data(),
                                                   ci, co, h, w);
        },
        3);
    const double p = seconds_per_call(
        [&] {
          std::fill(dw_omp.begin(), dw_omp.end(), 0.0);
          std::fill(db_omp.begin(), db_omp.end(), 0.0);
          kernels::conv3x3_backward_params(dy.data(), x.data(), dw_omp.data(),
                                           db_omp.data(), ci, co, h, w);
        },
        3);
    print_row("conv3x3 backward_params", s, p,
              std::max(max_abs_diff(dw_ref, dw_omp), max_abs_diff(db_ref, db_omp)));
  }
  {
    std::vector<double> w1(static_cast<size_t>(co) * ci), y1_ref(nout), y1_omp(nout);
    fill(w1, rng);
    const double s = seconds_per_call(
        [&] {
          kernels::serial::conv1x1_forward(x.data(), w1.data(), bias.data(),
                                           y1_ref.data(), ci, co, h, w);
        },
        5);
    const double p = seconds_per_call(
        [&] {
          kernels::conv1x1_forward(x.data(), w1.data(), bias.data(), y1_omp.data(),
                                   ci, co, h, w);
        },
        5);
    print_row("conv1x1 forward", s, p, max_abs_diff(y1_ref, y1_omp));
  }

  // Whole-network timing at the shapes the training recipe uses.
  {
    UNetConfig cfg;
    cfg.in_channels = 4;
    cfg.out_channels = 1;
    cfg.base_channels = 8;
    cfg.levels = 4;
    UNet net(cfg, 7);
    Tensor in, out, dout, din;
    in.resize({4, h, w});
    fill(in.v, rng);
    const double fwd = seconds_per_call([&] { out = net.forward(in); }, 2);
    dout = out;
    const double bwd = seconds_per_call(
        [&] {
          net.zero_grad();
          din = net.backward(dout, true);
        },
        2);
    std::printf("\nunet base=%d levels=%d @ %dx%d: forward %.3f ms, backward %.3f ms\n",
                cfg.base_channels, cfg.levels, h, w, fwd * 1e3, bwd * 1e3);
    std::printf("one train step (fwd+bwd) ~= %.3f ms -> %.0f steps/s\n",
                (fwd + bwd) * 1e3, 1.0 / (fwd + bwd));
  }
  return 0;
}
