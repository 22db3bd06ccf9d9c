// Copyright 2026 The Tailscope Authors
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


#include "tailscope/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tailscope/format.hpp"

namespace tailscope::cli {
namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 24.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 56.0;
constexpr int kTicks = 5;

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

std::string Num(double v) { return format_number(v, 6); }

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void include(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!(lo <= hi)) {
      lo = 0.0;
      hi = 1.0;
    }
    if (hi == lo) {
      const double pad = lo == 0.0 ? 1.0 : 0.05 * std::abs(lo);
      lo -= pad;
      hi += pad;
    }
    const double pad = 0.04 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
};

}  // namespace

std::string xml_escape(const std::string& text) {
  std::string out;
  for (char c : text) {
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

PointSet2D thin(const PointSet2D& points, std::size_t limit) {
  if (limit == 0 || points.size() <= limit) return points;
  const std::size_t step = (points.size() + limit - 1) / limit;
  PointSet2D out;
  for (std::size_t i = 0; i < points.size(); i += step) out.push_back(points[i]);
  return out;
}

SvgPlot::SvgPlot(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

void SvgPlot::add_series(std::string name, PointSet2D points, Style style) {
  series_.push_back({std::move(name), std::move(points), style});
}

void SvgPlot::add_annotation(std::string text) { annotations_.push_back(std::move(text)); }

std::string SvgPlot::render() const {
  Range xr;
  Range yr;
  for (const auto& s : series_) {
    for (const auto& p : s.points) {
      if (std::isfinite(p.x) && std::isfinite(p.y)) {
        xr.include(p.x);
        yr.include(p.y);
      }
    }
  }
  xr.finish();
  yr.finish();
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto sy = [&](double y) { return kTop + (yr.hi - y) / (yr.hi - yr.lo) * ph; };

  std::string o;
  o += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + Num(kWidth) + "\" height=\"" +
       Num(kHeight) + "\" viewBox=\"0 0 " + Num(kWidth) + " " + Num(kHeight) + "\">\n";
  o += "<rect x=\"0\" y=\"0\" width=\"" + Num(kWidth) + "\" height=\"" + Num(kHeight) +
       "\" fill=\"white\"/>\n";
  o += "<text x=\"" + Num(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" +
       xml_escape(title_) + "</text>\n";

  o += "<g class=\"axes\" stroke=\"black\" font-size=\"11\">\n";
  o += "<rect x=\"" + Num(kLeft) + "\" y=\"" + Num(kTop) + "\" width=\"" + Num(pw) +
       "\" height=\"" + Num(ph) + "\" fill=\"none\"/>\n";
  for (int i = 0; i <= kTicks; ++i) {
    const double fx = xr.lo + (xr.hi - xr.lo) * i / kTicks;
    const double fy = yr.lo + (yr.hi - yr.lo) * i / kTicks;
    const double px = sx(fx);
    const double py = sy(fy);
    o += "<line x1=\"" + Num(px) + "\" y1=\"" + Num(kTop + ph) + "\" x2=\"" + Num(px) +
         "\" y2=\"" + Num(kTop + ph + 5) + "\"/>\n";
    o += "<text x=\"" + Num(px) + "\" y=\"" + Num(kTop + ph + 18) +
         "\" text-anchor=\"middle\" stroke=\"none\">" + format_number(fx, 4) + "</text>\n";
    o += "<line x1=\"" + Num(kLeft - 5) + "\" y1=\"" + Num(py) + "\" x2=\"" + Num(kLeft) +
         "\" y2=\"" + Num(py) + "\"/>\n";
    o += "<text x=\"" + Num(kLeft - 8) + "\" y=\"" + Num(py + 4) +
         "\" text-anchor=\"end\" stroke=\"none\">" + format_number(fy, 4) + "</text>\n";
  }
  o += "<text x=\"" + Num(kLeft + pw / 2) + "\" y=\"" + Num(kHeight - 12) +
       "\" text-anchor=\"middle\" stroke=\"none\" font-size=\"13\">" + xml_escape(x_label_) +
       "</text>\n";
  o += "<text x=\"16\" y=\"" + Num(kTop + ph / 2) + "\" text-anchor=\"middle\" stroke=\"none\" "
       "font-size=\"13\" transform=\"rotate(-90 16 " + Num(kTop + ph / 2) + ")\">" +
       xml_escape(y_label_) + "</text>\n";
  o += "</g>\n";

  for (std::size_t i = 0; i < series_.size(); ++i) {
    const auto& s = series_[i];
    const char* color = kColors[i % std::size(kColors)];
    const bool line = s.style == Style::kLine;
    o += "<g class=\"series " + std::string(line ? "line" : "scatter") + "\" data-name=\"" +
         xml_escape(s.name) + "\" " + (line ? "fill=\"none\" stroke=\"" : "fill=\"") + color +
         "\">\n";
    if (line) {
      std::string pts;
      for (const auto& p : s.points) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) continue;
        pts += (pts.empty() ? "" : " ") + Num(sx(p.x)) + "," + Num(sy(p.y));
      }
      o += "<polyline stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
    } else {
      for (const auto& p : s.points) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) continue;
        o += "<circle cx=\"" + Num(sx(p.x)) + "\" cy=\"" + Num(sy(p.y)) + "\" r=\"1.6\"/>\n";
      }
    }
    o += "</g>\n";
  }

  o += "<g class=\"legend\" font-size=\"12\">\n";
  double ly = kTop + 16;
  for (std::size_t i = 0; i < series_.size(); ++i) {
    o += "<text x=\"" + Num(kLeft + 10) + "\" y=\"" + Num(ly) + "\" fill=\"" +
         kColors[i % std::size(kColors)] + "\">" + xml_escape(series_[i].name) + "</text>\n";
    ly += 15;
  }
  for (const auto& a : annotations_) {
    o += "<text class=\"annotation\" x=\"" + Num(kLeft + 10) + "\" y=\"" + Num(ly) + "\">" +
         xml_escape(a) + "</text>\n";
    ly += 15;
  }
  o += "</g>\n</svg>\n";
  return o;
}

}  // namespace tailscope::cli
