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

#include "dsamp/nn/kernels.hpp"

#include <cmath>

namespace dsamp::nn::kernels {

// Forward 3x3 convolution, zero padding 1. The inner loop is a row-wise
// 3-tap stencil over x so it vectorizes; each output channel is owned by
// one thread.
void conv3x3_forward(const double* x, const double* w, const double* bias,
                     double* y, int ci, int co, int h, int wd) {
  const size_t plane = static_cast<size_t>(h) * wd;
#pragma omp parallel for schedule(static)
  for (int oc = 0; oc < co; ++oc) {
    double* yo = y + oc * plane;
    for (size_t i = 0; i < plane; ++i) yo[i] = bias[oc];
    for (int ic = 0; ic < ci; ++ic) {
      const double* xi = x + ic * plane;
      const double* wk = w + (static_cast<size_t>(oc) * ci + ic) * 9;
      for (int ky = 0; ky < 3; ++ky) {
        const int sy = ky - 1;
        const double w0 = wk[ky * 3 + 0];
        const double w1 = wk[ky * 3 + 1];
        const double w2 = wk[ky * 3 + 2];
        const int y0 = sy < 0 ? 1 : 0;
        const int y1 = sy > 0 ? h - 1 : h;
        for (int yy = y0; yy < y1; ++yy) {
          const double* xr = xi + static_cast<size_t>(yy + sy) * wd;
          double* yr = yo + static_cast<size_t>(yy) * wd;
          yr[0] += w1 * xr[0] + w2 * xr[1];
          for (int xx = 1; xx < wd - 1; ++xx)
            yr[xx] += w0 * xr[xx - 1] + w1 * xr[xx] + w2 * xr[xx + 1];
          yr[wd - 1] += w0 * xr[wd - 2] + w1 * xr[wd - 1];
        }
      }
    }
  }
}

// dx = correlation of dy with the spatially flipped kernel; same stencil
// structure as the forward pass with input channels as the parallel axis.
void conv3x3_backward_input(const double* dy, const double* w, double* dx,
                            int ci, int co, int h, int wd) {
  const size_t plane = static_cast<size_t>(h) * wd;
#pragma omp parallel for schedule(static)
  for (int ic = 0; ic < ci; ++ic) {
    double* dxi = dx + ic * plane;
    for (size_t i = 0; i < plane; ++i) dxi[i] = 0.0;
    for (int oc = 0; oc < co; ++oc) {
      const double* dyo = dy + oc * plane;
      const double* wk = w + (static_cast<size_t>(oc) * ci + ic) * 9;
      for (int ky = 0; ky < 3; ++ky) {
        // dx[y][x] += w[ky][kx] * dy[y-(ky-1)][x-(kx-1)]
        const int sy = ky - 1;
        const double w0 = wk[ky * 3 + 0];
        const double w1 = wk[ky * 3 + 1];
        const double w2 = wk[ky * 3 + 2];
        const int y0 = sy > 0 ? sy : 0;
        const int y1 = sy < 0 ? h + sy : h;
        for (int yy = y0; yy < y1; ++yy) {
          const double* dr = dyo + static_cast<size_t>(yy - sy) * wd;
          double* xr = dxi + static_cast<size_t>(yy) * wd;
          xr[0] += w1 * dr[0] + w0 * dr[1];
          for (int xx = 1; xx < wd - 1; ++xx)
            xr[xx] += w2 * dr[xx - 1] + w1 * dr[xx] + w0 * dr[xx + 1];
          xr[wd - 1] += w2 * dr[wd - 2] + w1 * dr[wd - 1];
        }
      }
    }
  }
}

namespace {

// Accumulates one kernel row: a[0..2] += dy[xx] * xr[xx-1 / xx / xx+1].
inline void wgrad_row(const double* dr, const double* xr, int wd, double* a) {
  a[1] += dr[0] * xr[0];
  if (wd > 1) a[2] += dr[0] * xr[1];
  for (int xx = 1; xx < wd - 1; ++xx) {
    const double g = dr[xx];
    a[0] += g * xr[xx - 1];
    a[1] += g * xr[xx];
    a[2] += g * xr[xx + 1];
  }
  if (wd > 1) {
    const double g = dr[wd - 1];
    a[0] += g * xr[wd - 2];
    a[1] += g * xr[wd - 1];
  }
}

}  // namespace

void conv3x3_backward_params(const double* dy, const double* x, double* dw,
                             double* db, int ci, int co, int h, int wd) {
  const size_t plane = static_cast<size_t>(h) * wd;
#pragma omp parallel for schedule(static)
  for (int oc = 0; oc < co; ++oc) {
    const double* dyo = dy + oc * plane;
    double bacc = 0.0;
    for (size_t i = 0; i < plane; ++i) bacc += dyo[i];
    db[oc] += bacc;
    for (int ic = 0; ic < ci; ++ic) {
      const double* xi = x + ic * plane;
      double acc[9] = {};
      for (int yy = 0; yy < h; ++yy) {
        const double* dr = dyo + static_cast<size_t>(yy) * wd;
        const double* xm = xi + static_cast<size_t>(yy) * wd;
        if (yy > 0) wgrad_row(dr, xm - wd, wd, acc + 0);
        wgrad_row(dr, xm, wd, acc + 3);
        if (yy < h - 1) wgrad_row(dr, xm + wd, wd, acc + 6);
      }
      double* wk = dw + (static_cast<size_t>(oc) * ci + ic) * 9;
      for (int t = 0; t < 9; ++t) wk[t] += acc[t];
    }
  }
}

void conv1x1_forward(const double* x, const double* w, const double* bias,
                     double* y, int ci, int co, int h, int wd) {
  const size_t plane = static_cast<size_t>(h) * wd;
#pragma omp parallel for schedule(static)
  for (int oc = 0; oc < co; ++oc) {
    double* yo = y + oc * plane;
    for (size_t i = 0; i < plane; ++i) yo[i] = bias[oc];
    for (int ic = 0; ic < ci; ++ic) {
      const double wv = w[static_cast<size_t>(oc) * ci + ic];
      const double* xi = x + ic * plane;
      for (size_t i = 0; i < plane; ++i) yo[i] += wv * xi[i];
    }
  }
}

void conv1x1_backward_input(const double* dy, const double* w, double* dx,
                            int ci, int co, int h, int wd) {
  const size_t plane = static_cast<size_t>(h) * wd;
#pragma omp parallel for schedule(static)
  for (int ic = 0; ic < ci; ++ic) {
    double* dxi = dx + ic * plane;
    for (size_t i = 0; i < plane; ++i) dxi[i] = 0.0;
    for (int oc = 0; oc < co; ++oc) {
      const double wv = w[static_cast<size_t>(oc) * ci + ic];
      const double* dyo = dy + oc * plane;
      for (size_t i = 0; i < plane; ++i) dxi[i] += wv * dyo[i];
    }
  }
}

void conv1x1_backward_params(const double* dy, const double* x, double* dw,
                             double* db, int ci, int co, int h, int wd) {
  const size_t plane = static_cast<size_t>(h) * wd;
#pragma omp parallel for schedule(static)
  for (int oc = 0; oc < co; ++oc) {
    const double* dyo = dy + oc * plane;
    double bacc = 0.0;
    for (size_t i = 0; i < plane; ++i) bacc += dyo[i];
    db[oc] += bacc;
    for (int ic = 0; ic < ci; ++ic) {
      const double* xi = x + ic * plane;
      double acc = 0.0;
      for (size_t i = 0; i < plane; ++i) acc += dyo[i] * xi[i];
      dw[static_cast<size_t>(oc) * ci + ic] += acc;
    }
  }
}

void relu_forward(const double* x, double* y, size_t n) {
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(n); ++i)
    y[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void relu_backward(const double* x, const double* dy, double* dx, size_t n) {
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(n); ++i)
    dx[i] = x[i] > 0.0 ? dy[i] : 0.0;
}

void maxpool2x2_forward(const double* x, double* y, int* idx, int c, int h, int w) {
  const int oh = h / 2, ow = w / 2;
  const size_t iplane = static_cast<size_t>(h) * w;
  const size_t oplane = static_cast<size_t>(oh) * ow;
#pragma omp parallel for schedule(static)
  for (int ic = 0; ic < c; ++ic) {
    const double* xi = x + ic * iplane;
    double* yo = y + ic * oplane;
    int* io = idx + ic * oplane;
    for (int yy = 0; yy < oh; ++yy) {
      for (int xx = 0; xx < ow; ++xx) {
        const int base = (2 * yy) * w + 2 * xx;
        int best = base;
        double bv = xi[base];
        const int cand[3] = {base + 1, base + w, base + w + 1};
        for (int cd : cand) {
          if (xi[cd] > bv) {
            bv = xi[cd];
            best = cd;
          }
        }
        yo[yy * ow + xx] = bv;
        io[yy * ow + xx] = best;
      }
    }
  }
}

void maxpool2x2_backward(const double* dy, const int* idx, double* dx,
                         int c, int h, int w) {
  const int oh = h / 2, ow = w / 2;
  const size_t iplane = static_cast<size_t>(h) * w;
  const size_t oplane = static_cast<size_t>(oh) * ow;
#pragma omp parallel for schedule(static)
  for (int ic = 0; ic < c; ++ic) {
    double* dxi = dx + ic * iplane;
    for (size_t i = 0; i < iplane; ++i) dxi[i] = 0.0;
    const double* dyo = dy + ic * oplane;
    const int* io = idx + ic * oplane;
    for (size_t i = 0; i < oplane; ++i) dxi[io[i]] += dyo[i];
  }
}

void upsample2x_forward(const double* x, double* y, int c, int h, int w) {
  const size_t iplane = static_cast<size_t>(h) * w;
  const size_t oplane = iplane * 4;
  const int ow = 2 * w;
#pragma omp parallel for schedule(static)
  for (int ic = 0; ic < c; ++ic) {
    const double* xi = x + ic * iplane;
    double* yo = y + ic * oplane;
    for (int yy = 0; yy < h; ++yy) {
      const double* xr = xi + static_cast<size_t>(yy) * w;
      double* y0 = yo + static_cast<size_t>(2 * yy) * ow;
      double* y1 = y0 + ow;
      for (int xx = 0; xx < w; ++xx) {
        const double v = xr[xx];
        y0[2 * xx] = v;
        y0[2 * xx + 1] = v;
        y1[2 * xx] = v;
        y1[2 * xx + 1] = v;
      }
    }
  }
}

void upsample2x_backward(const double* dy, double* dx, int c, int h, int w) {
  const size_t iplane = static_cast<size_t>(h) * w;
  const size_t oplane = iplane * 4;
  const int ow = 2 * w;
#pragma omp parallel for schedule(static)
  for (int ic = 0; ic < c; ++ic) {
    double* dxi = dx + ic * iplane;
    const double* dyo = dy + ic * oplane;
    for (int yy = 0; yy < h; ++yy) {
      const double* d0 = dyo + static_cast<size_t>(2 * yy) * ow;
      const double* d1 = d0 + ow;
      double* xr = dxi + static_cast<size_t>(yy) * w;
      for (int xx = 0; xx < w; ++xx)
        xr[xx] = d0[2 * xx] + d0[2 * xx + 1] + d1[2 * xx] + d1[2 * xx + 1];
    }
  }
}

void adam_step(double* w, const double* g, double* m, double* v, size_t n,
               double lr, double b1, double b2, double eps, double b1t,
               double b2t, double grad_scale) {
  const double mc = 1.0 / (1.0 - b1t);
  const double vc = 1.0 / (1.0 - b2t);
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(n); ++i) {
    const double gi = g[i] * grad_scale;
    m[i] = b1 * m[i] + (1.0 - b1) * gi;
    v[i] = b2 * v[i] + (1.0 - b2) * gi * gi;
    w[i] -= lr * (m[i] * mc) / (std::sqrt(v[i] * vc) + eps);
  }
}

}  // namespace dsamp::nn::kernels
