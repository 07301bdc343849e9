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

#include "dsamp/pipeline/report.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>

#include "dsamp/io/png_io.hpp"

namespace dsamp::pipeline {

namespace fs = std::filesystem;

namespace {

// ---- tiny raster plotting -------------------------------------------------

struct Rgb {
  double r, g, b;
};

constexpr std::array<Rgb, 5> kPalette{{{0.75, 0.15, 0.15},
                                       {0.15, 0.30, 0.75},
                                       {0.10, 0.55, 0.25},
                                       {0.80, 0.55, 0.10},
                                       {0.50, 0.20, 0.65}}};

/// 3x5 pixel glyphs, one byte per row, bit 2 = left column.
std::array<uint8_t, 5> glyph(char c) {
  switch (c) {
    case '0': return {7, 5, 5, 5, 7};
    case '1': return {2, 6, 2, 2, 7};
    case '2': return {7, 1, 7, 4, 7};
    case '3': return {7, 1, 7, 1, 7};
    case '4': return {5, 5, 7, 1, 1};
    case '5': return {7, 4, 7, 1, 7};
    case '6': return {7, 4, 7, 5, 7};
    case '7': return {7, 1, 1, 2, 2};
    case '8': return {7, 5, 7, 5, 7};
    case '9': return {7, 5, 7, 1, 7};
    case '.': return {0, 0, 0, 0, 2};
    case ',': return {0, 0, 0, 2, 4};
    case '-': return {0, 0, 7, 0, 0};
    case '+': return {0, 2, 7, 2, 0};
    case '=': return {0, 7, 0, 7, 0};
    case '%': return {5, 1, 2, 4, 5};
    case '_': return {0, 0, 0, 0, 7};
    case 'a': return {2, 5, 7, 5, 5};
    case 'b': return {6, 5, 6, 5, 6};
    case 'c': return {3, 4, 4, 4, 3};
    case 'd': return {6, 5, 5, 5, 6};
    case 'e': return {7, 4, 6, 4, 7};
    case 'f': return {7, 4, 6, 4, 4};
    case 'g': return {3, 4, 5, 5, 3};
    case 'h': return {5, 5, 7, 5, 5};
    case 'i': return {7, 2, 2, 2, 7};
    case 'j': return {1, 1, 1, 5, 2};
    case 'k': return {5, 6, 4, 6, 5};
    case 'l': return {4, 4, 4, 4, 7};
    case 'm': return {5, 7, 7, 5, 5};
    case 'n': return {6, 5, 5, 5, 5};
    case 'o': return {2, 5, 5, 5, 2};
    case 'p': return {6, 5, 6, 4, 4};
    case 'q': return {2, 5, 5, 6, 3};
    case 'r': return {6, 5, 6, 6, 5};
    case 's': return {3, 4, 2, 1, 6};
    case 't': return {7, 2, 2, 2, 2};
    case 'u': return {5, 5, 5, 5, 7};
    case 'v': return {5, 5, 5, 5, 2};
    case 'w': return {5, 5, 7, 7, 5};
    case 'x': return {5, 5, 2, 5, 5};
    case 'y': return {5, 5, 2, 2, 2};
    case 'z': return {7, 1, 2, 4, 7};
    default: return {0, 0, 0, 0, 0};
  }
}

struct Canvas {
  Image img;

  Canvas(int h, int w) : img(h, w) {
    std::fill(img.rgb.begin(), img.rgb.end(), uint8_t{255});
  }

  void px(int y, int x, const Rgb& c) {
    if (y < 0 || y >= img.height || x < 0 || x >= img.width) return;
    img.set_rgb(y, x, c.r, c.g, c.b);
  }

  void line(int y0, int x0, int y1, int x1, const Rgb& c) {
    const int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
    const int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    while (true) {
      px(y0, x0, c);
      if (x0 == x1 && y0 == y1) break;
      const int e2 = 2 * err;
      if (e2 >= dy) { err += dy; x0 += sx; }
      if (e2 <= dx) { err += dx; y0 += sy; }
    }
  }

  void marker(int y, int x, const Rgb& c) {
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) px(y + dy, x + dx, c);
  }

  void text(int y, int x, const std::string& s, const Rgb& c) {
    for (char ch : s) {
      const auto g = glyph(static_cast<char>(std::tolower(ch)));
      for (int r = 0; r < 5; ++r)
        for (int b = 0; b < 3; ++b)
          if (g[r] & (4 >> b)) px(y + r, x + b, c);
      x += 4;
    }
  }
};

std::string short_num(double v) {
  std::ostringstream os;
  os << std::setprecision(3) << v;
  return os.str();
}

struct Series {
  std::string name;
  std::vector<double> x, y;
};

void render_line_plot(const std::string& path, const std::vector<Series>& series,
                      const std::string& x_label, const std::string& y_label) {
  const int W = 640, H = 400;
  const int left = 56, right = 16, top = 14, bottom = 30;
  Canvas cv(H, W);
  const Rgb axis{0.25, 0.25, 0.25};

  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  bool any = false;
  for (const Series& s : series)
    for (size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if (!any) {
        xmin = xmax = s.x[i];
        ymin = ymax = s.y[i];
        any = true;
      } else {
        xmin = std::min(xmin, s.x[i]);
        xmax = std::max(xmax, s.x[i]);
        ymin = std::min(ymin, s.y[i]);
        ymax = std::max(ymax, s.y[i]);
      }
    }
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;
  ymin = std::min(ymin, 0.0);  // anchor value axes at zero when possible
  const auto sx = [&](double v) {
    return left + static_cast<int>(std::lround((v - xmin) / (xmax - xmin) *
                                               (W - left - right - 1)));
  };
  const auto sy = [&](double v) {
    return H - bottom - 1 -
           static_cast<int>(std::lround((v - ymin) / (ymax - ymin) *
                                        (H - top - bottom - 1)));
  };

  cv.line(top, left, H - bottom - 1, left, axis);
  cv.line(H - bottom - 1, left, H - bottom - 1, W - right - 1, axis);
  for (int i = 0; i <= 4; ++i) {
    const double yv = ymin + (ymax - ymin) * i / 4.0;
    const double xv = xmin + (xmax - xmin) * i / 4.0;
    cv.line(sy(yv), left - 3, sy(yv), left, axis);
    cv.text(sy(yv) - 2, 4, short_num(yv), axis);
    cv.line(H - bottom - 1, sx(xv), H - bottom + 2, sx(xv), axis);
    cv.text(H - bottom + 5, sx(xv) - 4, short_num(xv), axis);
  }
  cv.text(H - 10, left, x_label, axis);
  cv.text(4, 4, y_label, axis);

  for (size_t si = 0; si < series.size(); ++si) {
    const Rgb c = kPalette[si % kPalette.size()];
    const Series& s = series[si];
    bool have_prev = false;
    int py = 0, pxx = 0;
    for (size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
        have_prev = false;
        continue;
      }
      const int yy = sy(s.y[i]), xx = sx(s.x[i]);
      if (have_prev) cv.line(py, pxx, yy, xx, c);
      cv.marker(yy, xx, c);
      py = yy;
      pxx = xx;
      have_prev = true;
    }
    const int ly = top + 4 + static_cast<int>(si) * 9;
    const int lx = W - right - 110;
    for (int dx = 0; dx < 8; ++dx) cv.px(ly + 2, lx + dx, c);
    cv.text(ly, lx + 12, s.name, axis);
  }

  fs::create_directories(fs::path(path).parent_path());
  io::write_bytes(path, io::encode_rgb8(cv.img));
}

// ---- report assembly ------------------------------------------------------

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

std::string cell(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << v;
  return os.str();
}

struct HistFile {
  std::string method;
  std::vector<double> lo, hi, fraction;
};

HistFile read_histogram_csv(const std::string& method, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read histogram file '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != "bin_lo,bin_hi,fraction")
    throw DataError("histogram file '" + path + "' has an unexpected header");
  HistFile h;
  h.method = method;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream is(line);
    std::string a, b, c;
    std::getline(is, a, ',');
    std::getline(is, b, ',');
    std::getline(is, c, ',');
    h.lo.push_back(std::strtod(a.c_str(), nullptr));
    h.hi.push_back(std::strtod(b.c_str(), nullptr));
    h.fraction.push_back(std::strtod(c.c_str(), nullptr));
  }
  return h;
}

void table_lines(std::ostringstream& os, const std::vector<MethodSummary>& rows) {
  os << std::left << std::setw(14) << "method" << std::right << std::setw(8)
     << "frames" << std::setw(10) << "rmse" << std::setw(10) << "mae"
     << std::setw(10) << "soft" << std::setw(10) << "hard" << "\n";
  for (const MethodSummary& m : rows) {
    os << std::left << std::setw(14) << m.method << std::right << std::setw(8)
       << m.frames << std::setw(10) << cell(m.mean_rmse) << std::setw(10)
       << cell(m.mean_mae) << std::setw(10) << cell(m.mean_soft) << std::setw(10)
       << cell(m.mean_hard) << "\n";
  }
}

void write_summary_csv(const std::string& path,
                       const std::vector<MethodSummary>& rows) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << "method,frames,mean_rmse,mean_mae,mean_soft,mean_hard\n";
  for (const MethodSummary& m : rows)
    out << m.method << ',' << m.frames << ',' << fmt(m.mean_rmse) << ','
        << fmt(m.mean_mae) << ',' << fmt(m.mean_soft) << ',' << fmt(m.mean_hard)
        << "\n";
}

/// Mean finite rmse per frame index.
std::map<int, double> per_frame_mean(const std::vector<TraceRow>& rows) {
  std::map<int, std::pair<double, int>> acc;
  for (const TraceRow& r : rows) {
    if (!std::isfinite(r.rmse)) continue;
    auto& a = acc[r.t];
    a.first += r.rmse;
    a.second += 1;
  }
  std::map<int, double> out;
  for (const auto& [t, a] : acc) out[t] = a.first / a.second;
  return out;
}

}  // namespace

ReportResult write_report(const RunConfig& cfg) {
  const std::string traces = cfg.out_dir + "/traces";
  const std::string rdir = cfg.report_dir();
  if (!fs::exists(traces))
    throw DataError("run directory '" + cfg.out_dir + "' has no traces");
  fs::create_directories(rdir);

  ReportResult res;
  std::ostringstream txt;
  txt << "run report\n==========\n\n";

  // Training stage curves, one CSV per stage, copied verbatim.
  std::vector<std::string> stage_files;
  for (const auto& e : fs::directory_iterator(traces)) {
    const std::string name = e.path().filename().string();
    if (name.rfind("train_", 0) == 0 && e.path().extension() == ".csv")
      stage_files.push_back(e.path().string());
  }
  std::sort(stage_files.begin(), stage_files.end());
  if (!stage_files.empty()) {
    txt << "training stages\n---------------\n";
    for (const std::string& f : stage_files) {
      txt << fs::path(f).filename().string() << "\n";
      std::ifstream in(f);
      std::string line;
      while (std::getline(in, line)) txt << "  " << line << "\n";
      txt << "\n";
    }
  }

  // Eval comparison over the steady part of each sequence.
  std::map<std::string, std::vector<TraceRow>> eval_rows;
  for (const std::string& m : method_order()) {
    const std::string p = cfg.trace_path("eval_" + m);
    if (!fs::exists(p)) continue;
    eval_rows[m] = read_trace_csv(p);
    res.comparison.push_back(summarize(m, eval_rows[m], cfg.memory_size));
  }
  if (!res.comparison.empty()) {
    txt << "method comparison (eval split, frames t >= "
        << cfg.memory_size << ")\n";
    txt << "--------------------------------------------\n";
    table_lines(txt, res.comparison);
    txt << "\n";
    write_summary_csv(rdir + "/comparison.csv", res.comparison);
    res.files.push_back(rdir + "/comparison.csv");
  }

  // Rollout curves and steady-state summary.
  std::vector<Series> curves;
  std::map<std::string, std::vector<TraceRow>> e2e_rows;
  for (const std::string m : {"adaptive", "random"}) {
    const std::string p = cfg.trace_path("e2e_" + std::string(m));
    if (!fs::exists(p)) continue;
    e2e_rows[m] = read_trace_csv(p);
  }
  if (!e2e_rows.empty()) {
    int max_t = 0;
    for (const auto& [m, rows] : e2e_rows)
      for (const TraceRow& r : rows) max_t = std::max(max_t, r.t);
    const int steady = max_t >= 10 ? 10 : cfg.memory_size;
    for (const auto& [m, rows] : e2e_rows)
      res.rollout.push_back(summarize(m, rows, steady));
    std::sort(res.rollout.begin(), res.rollout.end(),
              [](const MethodSummary& a, const MethodSummary& b) {
                return a.method < b.method;
              });
    txt << "rollout steady state (frames t >= " << steady << ")\n";
    txt << "------------------------------------\n";
    table_lines(txt, res.rollout);
    txt << "\n";
    write_summary_csv(rdir + "/e2e_comparison.csv", res.rollout);
    res.files.push_back(rdir + "/e2e_comparison.csv");

    std::ofstream pf(rdir + "/per_frame.csv");
    if (!pf) throw DataError("cannot write '" + rdir + "/per_frame.csv'");
    pf << "t";
    std::vector<std::map<int, double>> means;
    for (const auto& [m, rows] : e2e_rows) {
      pf << ',' << m;
      means.push_back(per_frame_mean(rows));
      curves.push_back({m, {}, {}});
    }
    pf << "\n";
    for (int t = 0; t <= max_t; ++t) {
      pf << t;
      for (size_t i = 0; i < means.size(); ++i) {
        const auto it = means[i].find(t);
        const double v =
            it == means[i].end() ? std::numeric_limits<double>::quiet_NaN()
                                 : it->second;
        pf << ',' << fmt(v);
        curves[i].x.push_back(t);
        curves[i].y.push_back(v);
      }
      pf << "\n";
    }
    res.files.push_back(rdir + "/per_frame.csv");
    render_line_plot(rdir + "/per_frame.png", curves, "t", "rmse");
    res.files.push_back(rdir + "/per_frame.png");
  }

  // Sampled-depth histograms from the eval runs.
  std::vector<HistFile> hists;
  for (const std::string& m : method_order()) {
    const std::string p = cfg.trace_path("hist_" + m);
    if (fs::exists(p)) hists.push_back(read_histogram_csv(m, p));
  }
  if (!hists.empty()) {
    for (const HistFile& h : hists)
      if (h.lo != hists[0].lo || h.hi != hists[0].hi)
        throw DataError("histogram files disagree on bin edges");
    std::ofstream hf(rdir + "/sampled_histogram.csv");
    if (!hf) throw DataError("cannot write '" + rdir + "/sampled_histogram.csv'");
    hf << "bin_lo,bin_hi";
    for (const HistFile& h : hists) hf << ',' << h.method;
    hf << "\n";
    for (size_t i = 0; i < hists[0].lo.size(); ++i) {
      hf << fmt(hists[0].lo[i]) << ',' << fmt(hists[0].hi[i]);
      for (const HistFile& h : hists) hf << ',' << fmt(h.fraction[i]);
      hf << "\n";
    }
    res.files.push_back(rdir + "/sampled_histogram.csv");

    std::vector<Series> steps;
    for (const HistFile& h : hists) {
      Series s;
      s.name = h.method;
      for (size_t i = 0; i < h.lo.size(); ++i) {
        s.x.push_back(h.lo[i]);
        s.y.push_back(h.fraction[i]);
        s.x.push_back(h.hi[i]);
        s.y.push_back(h.fraction[i]);
      }
      steps.push_back(std::move(s));
    }
    render_line_plot(rdir + "/sampled_histogram.png", steps, "depth", "fraction");
    res.files.push_back(rdir + "/sampled_histogram.png");
  }

  if (res.comparison.empty() && res.rollout.empty())
    throw DataError("run directory '" + cfg.out_dir +
                    "' has no evaluation or rollout traces");

  std::ofstream rt(rdir + "/report.txt");
  if (!rt) throw DataError("cannot write '" + rdir + "/report.txt'");
  rt << txt.str();
  res.files.push_back(rdir + "/report.txt");
  return res;
}

}  // namespace dsamp::pipeline
