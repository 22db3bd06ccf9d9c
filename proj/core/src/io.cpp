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


#include "tailscope/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "tailscope/error.hpp"
#include "tailscope/format.hpp"

namespace tailscope::io {
namespace {

std::vector<std::string> Split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove(item.begin(), item.end(), '\r'), item.end());
    item.erase(std::remove(item.begin(), item.end(), '"'), item.end());
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? "" : item.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::kIo, "cannot write '" + path.string() + "'");
  out << content;
  out.flush();
  if (!out) throw Error(Errc::kIo, "write to '" + path.string() + "' failed");
}

std::string points_csv(const PointSet2D& points) {
  std::string out = "x,y\n";
  for (const auto& p : points) out += format_number(p.x) + "," + format_number(p.y) + "\n";
  return out;
}

std::string trace_csv(const EstimatorTrace& trace) {
  std::string out = "m,estimate\n";
  for (const auto& e : trace.entries) {
    out += std::to_string(e.m) + "," + format_number(e.estimate) + "\n";
  }
  return out;
}

std::string fit_csv(const FitResult& fit) {
  return "slope,intercept,xi_hat,rss,n_points\n" + format_number(fit.slope) + "," +
         format_number(fit.intercept) + "," + (fit.xi_hat ? format_number(*fit.xi_hat) : "") +
         "," + format_number(fit.rss) + "," + std::to_string(fit.n_points) + "\n";
}

std::string values_csv(std::span<const double> values, const std::string& header) {
  std::string out = header + "\n";
  for (double v : values) out += format_number(v) + "\n";
  return out;
}

std::string series_csv(const TimeSeries& ts) {
  std::string out = "date,value\n";
  for (std::size_t i = 0; i < ts.size(); ++i) {
    out += ts.timestamps[i].iso() + "," + format_number(ts.values[i]) + "\n";
  }
  return out;
}

std::string profile_csv(const SeasonalProfile& profile) {
  std::string out = "month,day,std,count,pooled\n";
  for (const auto& [key, sd] : profile.day_std) {
    const bool pooled =
        std::find(profile.pooled.begin(), profile.pooled.end(), key) != profile.pooled.end();
    out += std::to_string(key.first) + "," + std::to_string(key.second) + "," +
           format_number(sd) + "," + std::to_string(profile.day_count.at(key)) + "," +
           (pooled ? "1" : "0") + "\n";
  }
  return out;
}

std::string ar_csv(const ARModel& model) {
  std::string out = "term,value\n";
  out += "order," + std::to_string(model.order) + "\n";
  out += "mean," + format_number(model.mean) + "\n";
  out += "noise_variance," + format_number(model.noise_variance) + "\n";
  for (std::size_t i = 0; i < model.phi.size(); ++i) {
    out += "phi" + std::to_string(i + 1) + "," + format_number(model.phi[i]) + "\n";
  }
  return out;
}

std::string convergence_csv(const ConvergenceReport& report) {
  std::string out = "rep,n,k,distance\n";
  for (std::size_t r = 0; r < report.distances.size(); ++r) {
    for (std::size_t j = 0; j < report.n_grid.size(); ++j) {
      out += std::to_string(r) + "," + std::to_string(report.n_grid[j]) + "," +
             std::to_string(report.k_values[j]) + "," + format_number(report.distances[r][j]) +
             "\n";
    }
  }
  return out;
}

std::string convergence_manifest(const ConvergenceReport& report,
                                 const std::map<std::string, std::string>& extra) {
  std::string grid;
  for (std::size_t n : report.n_grid) grid += (grid.empty() ? "" : ",") + std::to_string(n);
  std::string out;
  out += "model = " + report.model + "\n";
  out += "case = " + report.tail_case + "\n";
  out += "limit = " + report.limit + "\n";
  out += "n_grid = " + grid + "\n";
  out += "k_rule = " + report.k_rule + "\n";
  out += "reps = " + std::to_string(report.reps) + "\n";
  out += "window = " + report.window.describe() + "\n";
  out += "seed = " + std::to_string(report.seed.seed) + "\n";
  out += "stream = " + std::to_string(report.seed.stream) + "\n";
  for (const auto& [k, v] : extra) out += k + " = " + v + "\n";
  return out;
}

std::vector<double> parse_values(std::istream& in, const std::string& column,
                                 const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t col = 0;
  bool have_layout = false;
  std::vector<double> out;
  std::vector<std::size_t> bad;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = Split(line);
    if (!have_layout) {
      have_layout = true;
      double probe = 0.0;
      if (parse_number(fields[0], probe) && column.empty()) {
        col = 0;  // headerless
      } else {
        std::string want = column;
        if (want.empty()) {
          if (std::find(fields.begin(), fields.end(), "value") != fields.end()) {
            want = "value";
          } else if (fields.size() == 1) {
            want = fields[0];
          } else {
            throw Error(Errc::kParse, source + ": several columns and none named 'value'; "
                                               "choose one explicitly");
          }
        }
        const auto it = std::find(fields.begin(), fields.end(), want);
        if (it == fields.end()) {
          throw Error(Errc::kParse, source + ": column '" + want + "' not found");
        }
        col = static_cast<std::size_t>(it - fields.begin());
        continue;
      }
    }
    double v = 0.0;
    if (col >= fields.size() || !parse_number(fields[col], v) || !std::isfinite(v)) {
      bad.push_back(line_no);
      continue;
    }
    out.push_back(v);
  }
  if (!bad.empty()) {
    std::string lines;
    for (std::size_t i = 0; i < bad.size() && i < 20; ++i) {
      lines += (i ? ", " : "") + std::to_string(bad[i]);
    }
    throw Error(Errc::kParse, source + ": non-numeric value at line(s) " + lines);
  }
  if (out.empty()) throw Error(Errc::kParse, source + ": no numeric values");
  return out;
}

std::vector<double> read_values(const std::filesystem::path& path, const std::string& column) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kIo, "cannot open '" + path.string() + "'");
  return parse_values(in, column, path.string());
}

}  // namespace tailscope::io
