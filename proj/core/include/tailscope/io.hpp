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

#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "tailscope/empirics.hpp"
#include "tailscope/estimators.hpp"
#include "tailscope/pipeline.hpp"
#include "tailscope/randset.hpp"

/// CSV renderings (17 significant digits) and file helpers.
namespace tailscope::io {

/// Writes `content` to `path`, creating parent directories. Errc::kIo on
/// failure.
void write_text(const std::filesystem::path& path, const std::string& content);

std::string points_csv(const PointSet2D& points);
std::string trace_csv(const EstimatorTrace& trace);
std::string fit_csv(const FitResult& fit);
std::string values_csv(std::span<const double> values, const std::string& header = "value");
std::string series_csv(const TimeSeries& ts);
std::string profile_csv(const SeasonalProfile& profile);
std::string ar_csv(const ARModel& model);
/// rep,n,k,distance rows.
std::string convergence_csv(const ConvergenceReport& report);
/// key = value lines describing the report plus `extra` entries.
std::string convergence_manifest(const ConvergenceReport& report,
                                 const std::map<std::string, std::string>& extra = {});

/// One numeric column from a CSV: the named column, else "value", else the
/// only column. A header row is optional.
std::vector<double> read_values(const std::filesystem::path& path, const std::string& column = "");
std::vector<double> parse_values(std::istream& in, const std::string& column = "",
                                 const std::string& source = "<stream>");

}  // namespace tailscope::io
