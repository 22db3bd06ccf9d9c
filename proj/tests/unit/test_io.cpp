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


#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "support.hpp"
#include "tailscope/format.hpp"
#include "tailscope/io.hpp"

using namespace tailscope;
using tailscope::testing::CodeOf;

namespace {

std::filesystem::path Scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "tailscope_io_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string Slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("numbers round-trip at 17 significant digits") {
  CounterRng rng({21, 0});
  for (int i = 0; i < 2000; ++i) {
    const double v = std::ldexp(rng.uniform(-1, 1), static_cast<int>(rng.uniform(-300, 300)));
    double back = 0.0;
    REQUIRE(parse_number(format_number(v), back));
    CHECK(back == v);
    REQUIRE(parse_number(format_shortest(v), back));
    CHECK(back == v);
  }
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_number(0.5) == "0.5");
  double v = 0.0;
  CHECK(parse_number(" +2.5\r", v));
  CHECK(v == 2.5);
  CHECK_FALSE(parse_number("2.5x", v));
  CHECK_FALSE(parse_number("", v));
}

TEST_CASE("CSV writers") {
  CHECK(io::points_csv({{1.0, 0.25}, {2.0, -3.0}}) == "x,y\n1,0.25\n2,-3\n");
  CHECK(io::values_csv(std::vector<double>{0.1}, "v") == "v\n0.10000000000000001\n");

  EstimatorTrace t{EstimatorKind::kHill, {{3, 0.5}, {4, 0.75}}, {}};
  CHECK(io::trace_csv(t) == "m,estimate\n3,0.5\n4,0.75\n");

  FitResult fit{2.0, -1.0, 2.0 / 3.0, 0.5, 10};
  CHECK(io::fit_csv(fit) ==
        "slope,intercept,xi_hat,rss,n_points\n2,-1,0.66666666666666663,0.5,10\n");
  fit.xi_hat.reset();
  CHECK(io::fit_csv(fit) == "slope,intercept,xi_hat,rss,n_points\n2,-1,,0.5,10\n");

  TimeSeries ts;
  ts.timestamps = {{1999, 12, 31}, {2000, 1, 1}};
  ts.values = {1.5, -2.0};
  CHECK(io::series_csv(ts) == "date,value\n1999-12-31,1.5\n2000-01-01,-2\n");

  const ARModel ar{2, {0.5, -0.25}, 1.0, 0.0};
  CHECK(io::ar_csv(ar) ==
        "term,value\norder,2\nmean,0\nnoise_variance,1\nphi1,0.5\nphi2,-0.25\n");

  SeasonalProfile profile;
  profile.day_std[{1, 2}] = 2.0;
  profile.day_count[{1, 2}] = 1;
  profile.pooled.push_back({1, 2});
  CHECK(io::profile_csv(profile) == "month,day,std,count,pooled\n1,2,2,1,1\n");
}

TEST_CASE("convergence CSV is long format, one row per replication and n") {
  const ConvergenceReport report{
      .model = "pareto:2",
      .tail_case = "heavy",
      .limit = "line",
      .n_grid = {100, 1000},
      .k_values = {10, 63},
      .distances = {{0.5, 0.25}, {std::numeric_limits<double>::infinity(), 0.125}},
      .k_rule = "pow:0.6",
      .window = Window(1, 3, 0, 4),
      .seed = {7, 2},
      .reps = 2,
  };
  CHECK(io::convergence_csv(report) ==
        "rep,n,k,distance\n0,100,10,0.5\n0,1000,63,0.25\n1,100,10,inf\n1,1000,63,0.125\n");
  const std::string manifest = io::convergence_manifest(report, {{"extra", "x"}});
  CHECK(manifest.find("n_grid = 100,1000\n") != std::string::npos);
  CHECK(manifest.find("seed = 7\nstream = 2\n") != std::string::npos);
  CHECK(manifest.find("extra = x\n") != std::string::npos);
}

TEST_CASE("parse_values layouts") {
  auto parse = [](const std::string& text, const std::string& column = "") {
    std::istringstream in(text);
    return io::parse_values(in, column);
  };
  CHECK(parse("1\n2.5\n\n-3\n") == std::vector<double>{1, 2.5, -3});
  CHECK(parse("x\n1\n2\n") == std::vector<double>{1, 2});
  CHECK(parse("a,value\n9,1\n9,2\n") == std::vector<double>{1, 2});
  CHECK(parse("a,b\n9,1\n8,2\n", "a") == std::vector<double>{9, 8});
  CHECK(parse("\"a\",\"b\"\r\n9,\"1\"\r\n", "b") == std::vector<double>{1});

  CHECK(CodeOf([&] { parse("a,b\n1,2\n"); }) == Errc::kParse);
  CHECK(CodeOf([&] { parse("a\n1\n", "b"); }) == Errc::kParse);
  CHECK(CodeOf([&] { parse("value\n"); }) == Errc::kParse);
  try {
    parse("value\n1\nx\n3\nnan\n");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::kParse);
    CHECK(std::string(e.what()).find("line(s) 3, 5") != std::string::npos);
  }
}

TEST_CASE("write_text and read_values") {
  const auto nested = Scratch("deep/er/values.csv");
  std::filesystem::remove_all(nested.parent_path());
  io::write_text(nested, io::values_csv(std::vector<double>{0.1, 1e300, -2e-300}));
  CHECK(Slurp(nested) == io::values_csv(std::vector<double>{0.1, 1e300, -2e-300}));
  CHECK(io::read_values(nested) == std::vector<double>{0.1, 1e300, -2e-300});

  CHECK(CodeOf([] { io::read_values("/nonexistent/values.csv"); }) == Errc::kIo);
  // A regular file where a directory is needed.
  CHECK(CodeOf([&] { io::write_text(nested / "child.csv", "x"); }) == Errc::kIo);
}
