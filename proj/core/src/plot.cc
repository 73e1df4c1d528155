// Copyright 2026 The MATRL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <map>
#include <stdexcept>

#include "matrl/csv.hpp"
#include "matrl/experiments.hpp"

namespace matrl {
namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMargin = 48.0;

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

std::string Fixed(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 3);
  return std::string(buf, ptr);
}

std::string Escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string Color(const std::string& label, size_t index) {
  static const std::map<std::string, std::string> kByMethod = {
      {"iga", "#d62728"},
      {"extragradient", "#ff7f0e"},
      {"lookahead", "#1f77b4"},
      {"matrl", "#2ca02c"}};
  static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                   "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  if (auto it = kByMethod.find(label); it != kByMethod.end()) return it->second;
  return kPalette[index % (sizeof(kPalette) / sizeof(kPalette[0]))];
}

std::vector<Series> LoadSeries(const std::vector<std::filesystem::path>& inputs,
                               PlotKind kind) {
  std::vector<Series> out;
  for (const auto& path : inputs) {
    const CsvTable t = ReadCsv(path);
    if (kind == PlotKind::kTrajectory2d) {
      const int cx = t.Column("theta_0"), cy = t.Column("theta_1");
      if (cx < 0 || cy < 0) {
        throw CsvError(1, path.string() + ": trajectory needs theta_0 and theta_1 columns");
      }
      Series s{path.stem().string(), {}};
      for (int r = 0; r < static_cast<int>(t.rows.size()); ++r) {
        s.points.emplace_back(t.Number(r, cx), t.Number(r, cy));
      }
      out.push_back(std::move(s));
    } else {
      const int ci = t.Column("iteration");
      if (ci < 0) throw CsvError(1, path.string() + ": learning curve needs an iteration column");
      for (int c = 0; c < static_cast<int>(t.header.size()); ++c) {
        if (t.header[c].rfind("eta_", 0) != 0) continue;
        Series s{t.header[c], {}};
        if (inputs.size() > 1) s.label = path.stem().string() + ":" + s.label;
        for (int r = 0; r < static_cast<int>(t.rows.size()); ++r) {
          s.points.emplace_back(t.Number(r, ci), t.Number(r, c));
        }
        out.push_back(std::move(s));
      }
    }
  }
  return out;
}

}  // namespace

PlotKind ParsePlotKind(std::string_view name) {
  if (name == "trajectory_2d") return PlotKind::kTrajectory2d;
  if (name == "learning_curve") return PlotKind::kLearningCurve;
  throw std::invalid_argument("unknown plot kind: " + std::string(name));
}

std::string RenderPlot(const std::vector<std::filesystem::path>& inputs,
                       PlotKind kind) {
  const std::vector<Series> series = LoadSeries(inputs, kind);
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
  double y0 = x0, y1 = -x0;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      x0 = std::min(x0, x); x1 = std::max(x1, x);
      y0 = std::min(y0, y); y1 = std::max(y1, y);
    }
  }
  if (!(x0 <= x1)) { x0 = 0.0; x1 = 1.0; y0 = 0.0; y1 = 1.0; }
  if (x1 - x0 == 0.0) { x0 -= 0.5; x1 += 0.5; }
  if (y1 - y0 == 0.0) { y0 -= 0.5; y1 += 0.5; }
  const double pw = kWidth - 2 * kMargin, ph = kHeight - 2 * kMargin;
  auto sx = [&](double x) { return kMargin + (x - x0) / (x1 - x0) * pw; };
  auto sy = [&](double y) { return kHeight - kMargin - (y - y0) / (y1 - y0) * ph; };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + Fixed(kWidth) +
         "\" height=\"" + Fixed(kHeight) + "\" viewBox=\"0 0 " + Fixed(kWidth) +
         " " + Fixed(kHeight) + "\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<line x1=\"" + Fixed(kMargin) + "\" y1=\"" + Fixed(kHeight - kMargin) +
         "\" x2=\"" + Fixed(kWidth - kMargin) + "\" y2=\"" + Fixed(kHeight - kMargin) +
         "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + Fixed(kMargin) + "\" y1=\"" + Fixed(kMargin) + "\" x2=\"" +
         Fixed(kMargin) + "\" y2=\"" + Fixed(kHeight - kMargin) + "\" stroke=\"black\"/>\n";
  const std::string xlabel = kind == PlotKind::kTrajectory2d ? "theta_0" : "iteration";
  const std::string ylabel = kind == PlotKind::kTrajectory2d ? "theta_1" : "eta";
  svg += "<text x=\"" + Fixed(kWidth / 2) + "\" y=\"" + Fixed(kHeight - 12) +
         "\" font-size=\"12\" text-anchor=\"middle\">" + xlabel + " [" + Fixed(x0) +
         ", " + Fixed(x1) + "]</text>\n";
  svg += "<text x=\"14\" y=\"" + Fixed(kHeight / 2) +
         "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 " +
         Fixed(kHeight / 2) + ")\">" + ylabel + " [" + Fixed(y0) + ", " + Fixed(y1) +
         "]</text>\n";
  for (size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const std::string color = Color(s.label, i);
    svg += "<polyline fill=\"none\" stroke=\"" + color +
           "\" stroke-width=\"1.5\" data-label=\"" + Escape(s.label) + "\" points=\"";
    for (size_t k = 0; k < s.points.size(); ++k) {
      if (k) svg += " ";
      svg += Fixed(sx(s.points[k].first)) + "," + Fixed(sy(s.points[k].second));
    }
    svg += "\"/>\n";
    const double ly = kMargin + 16.0 * i;
    svg += "<rect x=\"" + Fixed(kWidth - kMargin - 110) + "\" y=\"" + Fixed(ly - 8) +
           "\" width=\"10\" height=\"10\" fill=\"" + color + "\"/>\n";
    svg += "<text x=\"" + Fixed(kWidth - kMargin - 95) + "\" y=\"" + Fixed(ly + 1) +
           "\" font-size=\"11\">" + Escape(s.label) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

void EmitPlot(const std::vector<std::filesystem::path>& inputs, PlotKind kind,
              const std::filesystem::path& output) {
  const std::string svg = RenderPlot(inputs, kind);
  std::ofstream out(output, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + output.string());
  out << svg;
}

}  // namespace matrl
