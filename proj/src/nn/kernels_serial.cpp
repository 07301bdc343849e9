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

// Serial reference kernels. Written as the most literal loop nests possible
// and kept independent of the parallel implementations so the two can be
// checked against each other.

#include <cmath>

#include "dsamp/nn/kernels.hpp"

namespace dsamp::nn::kernels::serial {

namespace {
inline bool inside(int v, int lim) { return v >= 0 && v < lim; }
}  // namespace

void conv3x3_forward(const double* x, const double* w, const double* bias,
                     double* y, int ci, int co, int h, int wd) {
  const size_t plane = static_cast<size_t>(h) * wd;
  for (int oc = 0; oc < co; ++oc) {
    for (int yy = 0; yy < h; ++yy) {
      for (int xx = 0; xx < wd; ++xx) {
        double acc = bias[oc];
        for (int ic = 0; ic < ci; ++ic) {
          for (int ky = 0; ky < 3; ++ky) {
            for (int kx = 0; kx < 3; ++kx) {
              const int sy = yy + ky - 1;
              const int sx = xx + kx - 1;
              if (!inside(sy, h) || !inside(sx, wd)) continue;
              acc += w[((static_cast<size_t>(oc) * ci + ic) * 3 + ky) * 3 + kx] *
                     x[ic * plane + static_cast<size_t>(sy) * wd + sx];
            }
          }
        }
        y[oc * plane + static_cast<size_t>(yy) * wd + xx] = acc;
      }
    }
  }
}

void conv3x3_backward_input(const double* dy, const double* w, double* dx,
                            int ci, int co, int h, int wd) {
  const size_t plane = static_cast<size_t>(h) * wd;
  for (size_t i = 0; i < plane * ci; ++i) dx[i] = 0.0;
  for (int oc = 0; oc < co; ++oc) {
    for (int yy = 0; yy < h; ++yy) {
      for (int xx = 0; xx < wd; ++xx) {
        const double g = dy[oc * plane + static_cast<size_t>(yy) * wd + xx];
        for (int ic = 0; ic < ci; ++ic) {
          for (int ky = 0; ky < 3; ++ky) {
            for (int kx = 0; kx < 3; ++kx) {
              const int sy = yy + ky - 1;
              const int sx = xx + kx - 1;
              if (!inside(sy, h) || !inside(sx, wd)) continue;
              dx[ic * plane + static_cast<size_t>(sy) * wd + sx] +=
                  g * w[((static_cast<size_t>(oc) * ci + ic) * 3 + ky) * 3 + kx];
            }
          }
        }
      }
    }
  }
}

void conv3x3_backward_params(const double* dy, const double* x, double* dw,
                             double* db, int ci, int co, int h, int wd) {
  const size_t plane = static_cast<size_t>(h) * wd;
  for (int oc = 0; oc < co; ++oc) {
    for (int yy = 0; yy < h; ++yy) {
      for (int xx = 0; xx < wd; ++xx) {
        const double g = dy[oc * plane + static_cast<size_t>(yy) * wd + xx];
        db[oc] += g;
        for (int ic = 0; ic < ci; ++ic) {
          for (int ky = 0; ky < 3; ++ky) {
            for (int kx = 0; kx < 3; ++kx) {
              const int sy = yy + ky - 1;
              const int sx = xx + kx - 1;
              if (!inside(sy, h) || !inside(sx, wd)) continue;
              dw[((static_cast<size_t>(oc) * ci + ic) * 3 + ky) * 3 + kx] +=
                  g * x[ic * plane + static_cast<size_t>(sy) * wd + sx];
            }
          }
        }
      }
    }
  }
}

void conv1x1_forward(const double* x, const double* w, const double* bias,
                     double* y, int ci, int co, int h, int wd) {
  const size_t plane = static_cast<size_t>(h) * wd;
  for (int oc = 0; oc < co; ++oc) {
    for (size_t i = 0; i < plane; ++i) {
      double acc = bias[oc];
      for (int ic = 0; ic < ci; ++ic)
        acc += w[static_cast<size_t>(oc) * ci + ic] * x[ic * plane + i];
      y[oc * plane + i] = acc;
    }
  }
}

void conv1x1_backward_input(const double* dy, const double* w, double* dx,
                            int ci, int co, int h, int wd) {
  const size_t plane = static_cast<size_t>(h) * wd;
  for (int ic = 0; ic < ci; ++ic) {
    for (size_t i = 0; i < plane; ++i) {
      double acc = 0.0;
      for (int oc = 0; oc < co; ++oc)
        acc += w[static_cast<size_t>(oc) * ci + ic] * dy[oc * plane + i];
      dx[ic * plane + i] = acc;
    }
  }
}

void conv1x1_backward_params(const double* dy, const double* x, double* dw,
                             double* db, int ci, int co, int h, int wd) {
  const size_t plane = static_cast<size_t>(h) * wd;
  for (int oc = 0; oc < co; ++oc) {
    for (size_t i = 0; i < plane; ++i) db[oc] += dy[oc * plane + i];
    for (int ic = 0; ic < ci; ++ic) {
      double acc = 0.0;
      for (size_t i = 0; i < plane; ++i)
        acc += dy[oc * plane + i] * x[ic * plane + i];
      dw[static_cast<size_t>(oc) * ci + ic] += acc;
    }
  }
}

void relu_forward(const double* x, double* y, size_t n) {
  for (size_t i = 0; i < n; ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void relu_backward(const double* x, const double* dy, double* dx, size_t n) {
  for (size_t i = 0; i < n; ++i) dx[i] = x[i] > 0.0 ? dy[i] : 0.0;
}

void maxpool2x2_forward(const double* x, double* y, int* idx, int c, int h, int w) {
  const int oh = h / 2, ow = w / 2;
  const size_t iplane = static_cast<size_t>(h) * w;
  const size_t oplane = static_cast<size_t>(oh) * ow;
  for (int ic = 0; ic < c; ++ic) {
    for (int yy = 0; yy < oh; ++yy) {
      for (int xx = 0; xx < ow; ++xx) {
        int best = -1;
        double bv = 0.0;
        for (int dy0 = 0; dy0 < 2; ++dy0) {
          for (int dx0 = 0; dx0 < 2; ++dx0) {
            const int off = (2 * yy + dy0) * w + 2 * xx + dx0;
            if (best < 0 || x[ic * iplane + off] > bv) {
              bv = x[ic * iplane + off];
              best = off;
            }
          }
        }
        y[ic * oplane + static_cast<size_t>(yy) * ow + xx] = bv;
        idx[ic * oplane + static_cast<size_t>(yy) * ow + xx] = best;
      }
    }
  }
}

void maxpool2x2_backward(const double* dy, const int* idx, double* dx,
                         int c, int h, int w) {
  const size_t iplane = static_cast<size_t>(h) * w;
  const size_t oplane = iplane / 4;
  for (size_t i = 0; i < iplane * c; ++i) dx[i] = 0.0;
  for (int ic = 0; ic < c; ++ic)
    for (size_t i = 0; i < oplane; ++i)
      dx[ic * iplane + idx[ic * oplane + i]] += dy[ic * oplane + i];
}

void upsample2x_forward(const double* x, double* y, int c, int h, int w) {
  const size_t iplane = static_cast<size_t>(h) * w;
  const int ow = 2 * w;
  for (int ic = 0; ic < c; ++ic)
    for (int yy = 0; yy < 2 * h; ++yy)
      for (int xx = 0; xx < ow; ++xx)
        y[ic * iplane * 4 + static_cast<size_t>(yy) * ow + xx] =
            x[ic * iplane + static_cast<size_t>(yy / 2) * w + xx / 2];
}

void upsample2x_backward(const double* dy, double* dx, int c, int h, int w) {
  const size_t iplane = static_cast<size_t>(h) * w;
  const int ow = 2 * w;
  for (size_t i = 0; i < iplane * c; ++i) dx[i] = 0.0;
  for (int ic = 0; ic < c; ++ic)
    for (int yy = 0; yy < 2 * h; ++yy)
      for (int xx = 0; xx < ow; ++xx)
        dx[ic * iplane + static_cast<size_t>(yy / 2) * w + xx / 2] +=
            dy[ic * iplane * 4 + static_cast<size_t>(yy) * ow + xx];
}

void adam_step(double* w, const double* g, double* m, double* v, size_t n,
               double lr, double b1, double b2, double eps, double b1t,
               double b2t, double grad_scale) {
  for (size_t i = 0; i < n; ++i) {
    const double gi = g[i] * grad_scale;
    m[i] = b1 * m[i] + (1.0 - b1) * gi;
    v[i] = b2 * v[i] + (1.0 - b2) * gi * gi;
    const double mhat = m[i] / (1.0 - b1t);
    const double vhat = v[i] / (1.0 - b2t);
    w[i] -= lr * mhat / (std::sqrt(vhat) + eps);
  }
}

}  // namespace dsamp::nn::kernels::serial
