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


#pragma once

#include <string>
#include <vector>

#include "tailscope/empirics.hpp"

namespace tailscope::cli {

/// Minimal deterministic SVG scatter/line chart. Each series becomes one
/// <g> element; numbers in labels use 4 significant digits.
class SvgPlot {
 public:
  enum class Style { kScatter, kLine };

  SvgPlot(std::string title, std::string x_label, std::string y_label);

  void add_series(std::string name, PointSet2D points, Style style);
  void add_annotation(std::string text);

  std::string render() const;

 private:
  struct Series {
    std::string name;
    PointSet2D points;
    Style style;
  };

  std::string title_;
  std::string x_label_;
  std::string y_label_;
  std::vector<Series> series_;
  std::vector<std::string> annotations_;
};

std::string xml_escape(const std::string& text);

/// Keeps at most `limit` points, taking every ceil(n/limit)-th one.
PointSet2D thin(const PointSet2D& points, std::size_t limit);

}  // namespace tailscope::cli
