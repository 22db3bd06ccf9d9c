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


#include "tailscope/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "tailscope/dist.hpp"
#include "tailscope/empirics.hpp"
#include "tailscope/estimators.hpp"
#include "tailscope/format.hpp"
#include "tailscope/io.hpp"
#include "tailscope/pipeline.hpp"
#include "tailscope/randset.hpp"
#include "tailscope/svg.hpp"

#ifndef TAILSCOPE_VERSION
#define TAILSCOPE_VERSION "0.0.0"
#endif

namespace tailscope::cli {
namespace fs = std::filesystem;
namespace {

constexpr std::size_t kSvgPointLimit = 5000;

struct Common {
  std::string model;
  std::string input;
  std::string column;
  std::uint64_t seed = 0;
  std::string out_dir = "tailscope-out";
  std::string format = "csv,svg";
  std::string config;
};

// Output directory, selected formats and the run manifest.
class Run {
 public:
  Run(std::string command, const Common& common, const std::vector<std::string>& args)
      : command_(std::move(command)), dir_(common.out_dir) {
    std::stringstream ss(common.format);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item == "csv") {
        csv_ = true;
      } else if (item == "svg") {
        svg_ = true;
      } else {
        throw Error(Errc::kConfiguration, "unknown output format '" + item + "'");
      }
    }
    std::string joined;
    for (const auto& a : args) joined += (joined.empty() ? "" : " ") + a;
    config("args", joined);
    config("seed", std::to_string(common.seed));
    config("out", common.out_dir);
    config("format", common.format);
    if (!common.config.empty()) config("config", common.config);
  }

  void config(const std::string& key, const std::string& value) {
    config_.emplace_back(key, value);
  }
  void result(const std::string& key, const std::string& value) {
    results_.emplace_back(key, value);
  }

  void csv(const std::string& name, const std::string& content) {
    if (csv_) write(name, content);
  }
  // Written whatever the format selection: the primary product of a command.
  void data(const std::string& name, const std::string& content) { write(name, content); }
  void svg(const std::string& name, const SvgPlot& plot) {
    if (svg_) write(name, plot.render());
  }

  void finish() {
    std::string m = "tool = tailscope " + version() + "\ncommand = " + command_ + "\n";
    m += "\n[config]\n";
    for (const auto& [k, v] : config_) m += k + " = " + v + "\n";
    m += "\n[results]\n";
    for (const auto& [k, v] : results_) m += k + " = " + v + "\n";
    m += "\n[outputs]\n";
    for (const auto& f : files_) m += f + "\n";
    io::write_text(dir_ / "manifest.txt", m);
  }

 private:
  void write(const std::string& name, const std::string& content) {
    io::write_text(dir_ / name, content);
    files_.push_back(name);
  }

  std::string command_;
  fs::path dir_;
  bool csv_ = false;
  bool svg_ = false;
  std::vector<std::pair<std::string, std::string>> config_;
  std::vector<std::pair<std::string, std::string>> results_;
  std::vector<std::string> files_;
};

std::string Num(double v) { return format_number(v); }
std::string Short(double v) { return format_number(v, 4); }

void AddCommon(CLI::App* app, Common& c, bool data_input) {
  app->add_option("--model", c.model, "Model spec kind:params, e.g. pareto:2");
  if (data_input) {
    app->add_option("--input", c.input, "CSV file with one numeric column");
    app->add_option("--column", c.column, "Column to read from --input");
  }
  app->add_option("--seed", c.seed, "Random seed (fallback: TAILSCOPE_SEED)");
  app->add_option("--out", c.out_dir, "Output directory");
  app->add_option("--format", c.format, "Output formats: csv,svg");
  app->add_option("--config", c.config, "key=value file; flags take precedence");
}

std::pair<std::size_t, std::size_t> ParseTrim(const std::string& text) {
  const auto colon = text.find(':');
  double a = 0.0;
  double b = 0.0;
  if (colon == std::string::npos || !parse_number(text.substr(0, colon), a) ||
      !parse_number(text.substr(colon + 1), b) || a != std::floor(a) || b != std::floor(b) ||
      a < 0 || b < 0) {
    throw Error(Errc::kConfiguration, "trim must be i_min:i_max, got '" + text + "'");
  }
  return {static_cast<std::size_t>(a), static_cast<std::size_t>(b)};
}

std::vector<std::size_t> ParseSizes(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v = 0.0;
    if (!parse_number(item, v) || v != std::floor(v) || v < 2) {
      throw Error(Errc::kConfiguration, "bad sample size '" + item + "'");
    }
    out.push_back(static_cast<std::size_t>(v));
  }
  if (out.empty()) throw Error(Errc::kConfiguration, "empty sample-size list");
  return out;
}

std::vector<double> LoadData(const Common& c, std::size_t n, Run& run) {
  if (!c.input.empty() && !c.model.empty()) {
    throw Error(Errc::kConfiguration, "give either --input or --model, not both");
  }
  if (!c.input.empty()) {
    run.config("input", c.input);
    if (!c.column.empty()) run.config("column", c.column);
    return io::read_values(c.input, c.column);
  }
  if (c.model.empty()) throw Error(Errc::kConfiguration, "either --input or --model is required");
  const auto model = dist::parse_model(c.model);
  run.config("model", model.describe());
  run.config("n", std::to_string(n));
  return dist::sample(model, n, RandomSeed{c.seed, 0});
}

PointSet2D FitLine(const FitResult& fit, double x0, double x1) {
  return {{x0, fit.intercept + fit.slope * x0}, {x1, fit.intercept + fit.slope * x1}};
}

std::pair<double, double> XRange(const PointSet2D& pts) {
  double lo = pts.front().x;
  double hi = lo;
  for (const auto& p : pts) {
    lo = std::min(lo, p.x);
    hi = std::max(hi, p.x);
  }
  return {lo, hi};
}

SvgPlot TracePlot(const EstimatorTrace& tr, const std::string& title, const std::string& y_label,
                  bool reciprocal) {
  PointSet2D pts;
  for (const auto& e : tr.entries) {
    pts.push_back({static_cast<double>(e.m), reciprocal ? e.estimate : e.estimate});
  }
  SvgPlot plot(title, "m (number of upper order statistics)", y_label);
  plot.add_series(to_string(tr.kind), thin(pts, kSvgPointLimit), SvgPlot::Style::kLine);
  return plot;
}

std::string GapsCsv(const std::vector<EstimatorTrace>& traces) {
  std::string out = "estimator,m,reason\n";
  for (const auto& t : traces) {
    for (const auto& g : t.gaps) out += to_string(t.kind) + "," + std::to_string(g.m) + "," + g.reason + "\n";
  }
  return out;
}

// ---- simulate --------------------------------------------------------------

struct SimulateOptions {
  Common common;
  std::size_t n = 50000;
};

void Simulate(const SimulateOptions& o, Run& run, std::ostream& out) {
  if (o.common.model.empty()) throw Error(Errc::kConfiguration, "simulate needs --model");
  const RandomSeed seed{o.common.seed, 0};
  if (o.common.model.rfind("composite", 0) == 0) {
    const auto colon = o.common.model.find(':');
    const auto spec =
        CompositeSpec::parse(colon == std::string::npos ? "4" : o.common.model.substr(colon + 1));
    run.config("model", spec.describe());
    const TimeSeries ts = synthesize_composite(spec, seed);
    run.data("series.csv", io::series_csv(ts));
    run.result("rows", std::to_string(ts.size()));
    out << "wrote " << ts.size() << " daily observations to series.csv\n";
    return;
  }
  const auto model = dist::parse_model(o.common.model);
  run.config("model", model.describe());
  run.config("n", std::to_string(o.n));
  if (o.n == 0) throw Error(Errc::kConfiguration, "--n must be at least 1");
  const auto values = dist::sample(model, o.n, seed);
  run.data("sample.csv", io::values_csv(values));
  run.result("rows", std::to_string(values.size()));
  out << "wrote " << values.size() << " draws of " << model.describe() << " to sample.csv\n";
}

// ---- meplot ----------------------------------------------------------------

struct MeplotOptions {
  Common common;
  std::size_t n = 50000;
  std::string trim;
};

void Meplot(const MeplotOptions& o, Run& run, std::ostream& out) {
  const OrderedSample s(LoadData(o.common, o.n, run));
  const std::size_t n = s.n();
  auto [i_min, i_max] = o.trim.empty() ? std::pair{default_trim_min(n), n} : ParseTrim(o.trim);
  run.config("trim", std::to_string(i_min) + ":" + std::to_string(i_max));

  const PointSet2D full = me_plot(s, 2, n);
  const PointSet2D trimmed = me_plot(s, i_min, i_max);
  run.csv("meplot_full.csv", io::points_csv(full));
  run.csv("meplot.csv", io::points_csv(trimmed));

  SvgPlot full_plot("ME plot, all order statistics", "threshold u", "mean excess");
  full_plot.add_series("me_plot", thin(full, kSvgPointLimit), SvgPlot::Style::kScatter);
  run.svg("meplot_full.svg", full_plot);

  SvgPlot plot("ME plot, order statistics " + std::to_string(i_min) + "-" + std::to_string(i_max),
               "threshold u", "mean excess");
  plot.add_series("me_plot", thin(trimmed, kSvgPointLimit), SvgPlot::Style::kScatter);
  try {
    const FitResult fit = ls_fit(trimmed, PlotKind::kMEPlot);
    const auto [x0, x1] = XRange(trimmed);
    plot.add_series("ls_fit", FitLine(fit, x0, x1), SvgPlot::Style::kLine);
    plot.add_annotation("slope = " + Short(fit.slope));
    if (fit.xi_hat) plot.add_annotation("xi_hat = " + Short(*fit.xi_hat));
    run.csv("fit.csv", io::fit_csv(fit));
    run.result("slope", Num(fit.slope));
    run.result("xi_hat", fit.xi_hat ? Num(*fit.xi_hat) : "undefined");
    out << "slope = " << Num(fit.slope) << "\nxi_hat = "
        << (fit.xi_hat ? Num(*fit.xi_hat) : "undefined (slope <= -1)") << "\n"
        << "points = " << fit.n_points << "\n";
  } catch (const Error& e) {
    if (e.code() != Errc::kSingularDesign) throw;
    plot.add_annotation("no LS fit: " + e.detail());
    run.result("fit", "none (" + e.detail() + ")");
    out << "no LS fit: singular design (" << e.detail() << ")\n";
  }
  run.svg("meplot.svg", plot);
}

// ---- estimate --------------------------------------------------------------

struct EstimateOptions {
  Common common;
  std::size_t n = 50000;
  std::string k = "pow:0.7";
  std::size_t m_max = 0;
  std::size_t stride = 1;
};

void Estimate(const EstimateOptions& o, Run& run, std::ostream& out, std::ostream& err) {
  const OrderedSample s(LoadData(o.common, o.n, run));
  const std::size_t n = s.n();
  const KRule rule = KRule::parse(o.k);
  const std::size_t m = std::min(rule(n), n - 1);
  run.config("k", rule.describe());
  run.config("m_max", std::to_string(o.m_max));
  run.config("stride", std::to_string(o.stride));

  const TraceOptions topts{1, o.m_max, o.stride};
  std::vector<EstimatorTrace> traces;
  for (auto kind : {EstimatorKind::kHill, EstimatorKind::kPickands, EstimatorKind::kMoment}) {
    traces.push_back(trace(s, kind, topts));
    const auto& t = traces.back();
    const std::string name = to_string(kind);
    run.csv(name + ".csv", io::trace_csv(t));
    const bool hill_kind = kind == EstimatorKind::kHill;
    run.svg(name + ".svg", TracePlot(t, name + " plot", hill_kind ? "alpha_hat" : "xi_hat", false));
    if (!t.gaps.empty()) {
      err << "note: " << name << ": " << t.gaps.size() << " degenerate m skipped (first m = "
          << t.gaps.front().m << ": " << t.gaps.front().reason << ")\n";
    }
    run.result(name + "_entries", std::to_string(t.entries.size()));
    run.result(name + "_gaps", std::to_string(t.gaps.size()));
  }
  run.csv("gaps.csv", GapsCsv(traces));

  std::string summary = "estimator,m,estimate,xi_hat\n";
  auto row = [&](const std::string& name, std::size_t mm, double est, double xi) {
    summary += name + "," + std::to_string(mm) + "," + Num(est) + "," + Num(xi) + "\n";
    out << name << " (m = " << mm << "): xi_hat = " << Num(xi) << "\n";
  };
  auto attempt = [&](const std::string& name, auto fn) {
    try {
      fn();
    } catch (const Error& e) {
      if (e.error_class() == ErrorClass::kIo) throw;
      err << "note: " << name << " skipped: " << e.what() << "\n";
      summary += name + ",,,\n";
    }
  };
  attempt("hill", [&] {
    const double a = hill(s, m);
    row("hill", m, a, 1.0 / a);
  });
  attempt("pickands", [&] {
    const std::size_t mp = std::min(m, n / 4);
    const double x = pickands(s, mp);
    row("pickands", mp, x, x);
  });
  attempt("moment", [&] {
    const double x = moment(s, m);
    row("moment", m, x, x);
  });
  attempt("qq_pos", [&] {
    const PointSet2D qq = qq_points_pos(s, m);
    const FitResult fit = ls_fit(qq, PlotKind::kQQPos);
    row("qq_pos", m, fit.slope, *fit.xi_hat);
    run.csv("qq_pos.csv", io::points_csv(qq));
    SvgPlot plot("QQ plot (xi > 0), m = " + std::to_string(m), "-log(i/m)", "log(X_(i)/X_(m))");
    plot.add_series("qq", thin(qq, kSvgPointLimit), SvgPlot::Style::kScatter);
    const auto [x0, x1] = XRange(qq);
    plot.add_series("ls_fit", FitLine(fit, x0, x1), SvgPlot::Style::kLine);
    plot.add_annotation("xi_hat = " + Short(*fit.xi_hat));
    run.svg("qq_pos.svg", plot);
  });
  attempt("qq_neg", [&] {
    const std::size_t mp = std::min(m, n / 4);
    const double pre = pickands(s, mp);
    if (!(pre < 0.0)) return;  // only meaningful for a negative pre-estimate
    const PointSet2D qq = qq_points_neg(s, mp, pre);
    const FitResult fit = ls_fit(qq, PlotKind::kRaw);
    summary += "qq_neg_pre," + std::to_string(mp) + "," + Num(pre) + "," + Num(pre) + "\n";
    run.csv("qq_neg.csv", io::points_csv(qq));
    SvgPlot plot("QQ plot (xi < 0), xi_pre = " + Short(pre), "X_(i)", "GPD quantile");
    plot.add_series("qq", thin(qq, kSvgPointLimit), SvgPlot::Style::kScatter);
    const auto [x0, x1] = XRange(qq);
    plot.add_series("ls_fit", FitLine(fit, x0, x1), SvgPlot::Style::kLine);
    plot.add_annotation("correlation = " + Short(correlation(qq)));
    run.svg("qq_neg.svg", plot);
  });
  run.data("summary.csv", summary);
}

// ---- converge --------------------------------------------------------------

struct ConvergeOptions {
  Common common;
  std::string tail_case = "positive";
  std::string n_grid = "10000,100000";
  std::string k = "pow:0.7";
  std::size_t reps = 50;
  std::string window;
  std::size_t resolution = 4000;
  unsigned threads = 0;
  double assume_xi = 0.5;
  double level = 1.0 / std::numbers::ln2;
};

void ConvergeHeavy(const ConvergeOptions& o, const dist::DistributionModel& model, Run& run,
                   std::ostream& out) {
  const auto grid = ParseSizes(o.n_grid);
  const KRule rule = KRule::parse(o.k);
  const RandomSeed seed{o.common.seed, 0};
  const auto res = intercept_experiment(model, grid.front(), rule, o.reps, seed, o.threads);
  const double xi = *model.extreme_value_index();

  std::string csv = "rep,slope,intercept,reference\n";
  for (std::size_t r = 0; r < o.reps; ++r) {
    csv += std::to_string(r) + "," + Num(res.slopes[r]) + "," + Num(res.intercepts[r]) + "," +
           Num(res.reference[r]) + "\n";
  }
  run.data("intercepts.csv", csv);
  const double med = median(res.slopes);
  const bool slope_ok = std::abs(med - 1.0 / xi) <= 0.05;
  const bool ks_ok = !res.ks || *res.ks < 0.25;
  run.result("median_slope", Num(med));
  run.result("target_slope", Num(1.0 / xi));
  run.result("ks", res.ks ? Num(*res.ks) : "not computed (reps < 2)");
  run.result("filtered_points", std::to_string(res.filtered));
  run.result("pass_rule", "|median slope - 1/xi| <= 0.05 and KS < 0.25");

  PointSet2D pts;
  for (std::size_t r = 0; r < o.reps; ++r) pts.push_back({res.slopes[r], res.intercepts[r]});
  SvgPlot plot("log-log fits of the heavy-tail normalization", "slope", "intercept");
  plot.add_series("replications", pts, SvgPlot::Style::kScatter);
  plot.add_annotation("median slope = " + Short(med) + " (target " + Short(1.0 / xi) + ")");
  if (res.ks) plot.add_annotation("KS vs log S = " + Short(*res.ks));
  run.svg("intercepts.svg", plot);

  out << "median slope = " << Num(med) << " (target " << Num(1.0 / xi) << ")\n";
  if (res.ks) out << "KS(intercepts, log S) = " << Num(*res.ks) << "\n";
  const std::string verdict = slope_ok && ks_ok ? "PASS" : "FAIL";
  run.result("verdict", verdict);
  out << verdict << "\n";
}

void Converge(const ConvergeOptions& o, Run& run, std::ostream& out) {
  if (o.common.model.empty()) throw Error(Errc::kConfiguration, "converge needs --model");
  const auto model = dist::parse_model(o.common.model);
  run.config("model", model.describe());
  run.config("case", o.tail_case);
  run.config("n", o.n_grid);
  run.config("k", o.k);
  run.config("reps", std::to_string(o.reps));
  run.config("resolution", std::to_string(o.resolution));
  if (o.tail_case == "heavy") {
    ConvergeHeavy(o, model, run, out);
    return;
  }

  ConvergenceConfig cfg;
  cfg.tail_case = parse_case(o.tail_case);
  cfg.n_grid = ParseSizes(o.n_grid);
  cfg.k_rule = KRule::parse(o.k);
  cfg.reps = o.reps;
  cfg.seed = RandomSeed{o.common.seed, 0};
  cfg.resolution = o.resolution;
  cfg.threads = o.threads;
  cfg.zero_level = o.level;
  if (!o.window.empty()) cfg.window = Window::parse(o.window);
  if (cfg.tail_case == TailCase::kZero) run.config("level", Num(o.level));

  const auto xi = model.extreme_value_index();
  const bool witness = cfg.tail_case == TailCase::kPositive && xi && *xi >= 1.0;
  if (witness) {
    cfg.reference = PositiveLine{o.assume_xi};
    run.config("assume_xi", Num(o.assume_xi));
    out << "note: " << model.describe() << " has xi = " << Num(*xi)
        << " >= 1; comparing against the line for xi = " << Num(o.assume_xi) << "\n";
  }

  const ConvergenceReport report = run_convergence(model, cfg);
  const ImprovementSummary sum = summarize(report);
  run.data("convergence.csv", io::convergence_csv(report));
  io::write_text(fs::path(o.common.out_dir) / "experiment.txt",
                 io::convergence_manifest(
                     report, {{"pass_rule", "median distance at largest n < median at smallest n"},
                              {"thresholds", "none (pilot-free paired comparison)"}}));

  PointSet2D medians;
  PointSet2D all;
  for (std::size_t j = 0; j < report.n_grid.size(); ++j) {
    const double lx = std::log10(static_cast<double>(report.n_grid[j]));
    medians.push_back({lx, sum.medians[j]});
    for (const auto& row : report.distances) all.push_back({lx, row[j]});
  }
  SvgPlot plot("windowed Hausdorff distance to " + report.limit, "log10 n", "distance");
  plot.add_series("replications", all, SvgPlot::Style::kScatter);
  plot.add_series("median", medians, SvgPlot::Style::kLine);
  plot.add_annotation("window " + report.window.describe() + ", k " + report.k_rule);
  run.svg("convergence.svg", plot);

  for (std::size_t j = 0; j < report.n_grid.size(); ++j) {
    out << "n = " << report.n_grid[j] << " (k = " << report.k_values[j]
        << "): median distance = " << Num(sum.medians[j]) << "\n";
    run.result("median_n" + std::to_string(report.n_grid[j]), Num(sum.medians[j]));
  }
  out << "paired improvement = " << Num(sum.paired_improvement) << "\n";
  run.result("paired_improvement", Num(sum.paired_improvement));
  std::string verdict = sum.improved ? "PASS" : "FAIL";
  if (witness) verdict = sum.improved ? "PASS (unexpected for xi>=1)" : "FAIL (expected: xi>=1 inconsistency)";
  run.result("verdict", verdict);
  out << verdict << "\n";
}

// ---- analyze ---------------------------------------------------------------

struct AnalyzeOptions {
  Common common;
  std::string date_column = "date";
  std::string value_column = "value";
  std::string date_format = "%Y-%m-%d";
  bool skip_invalid = false;
  std::string segment;
  std::size_t p_max = 40;
  std::string trim;
  std::string k = "pow:0.7";
  std::size_t max_lag = 60;
};

template <class F>
auto Stage(const std::string& name, F fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.code(), name + " stage: " + e.detail());
  }
}

void Analyze(const AnalyzeOptions& o, Run& run, std::ostream& out, std::ostream& err) {
  const Common& c = o.common;
  if (!c.input.empty() && !c.model.empty()) {
    throw Error(Errc::kConfiguration, "give either --input or --model, not both");
  }
  const TimeSeries raw = Stage("ingest", [&] {
    if (!c.model.empty()) {
      if (c.model.rfind("composite", 0) != 0) {
        throw Error(Errc::kConfiguration, "analyze simulates only composite:alpha[,years[,phi1,phi2]]");
      }
      const auto colon = c.model.find(':');
      const auto spec = CompositeSpec::parse(colon == std::string::npos ? "4" : c.model.substr(colon + 1));
      run.config("model", spec.describe());
      return synthesize_composite(spec, RandomSeed{c.seed, 0});
    }
    if (c.input.empty()) throw Error(Errc::kConfiguration, "analyze needs --input or --model");
    CsvSchema schema;
    schema.date_column = o.date_column;
    schema.value_column = o.value_column;
    schema.date_format = o.date_format;
    schema.skip_invalid = o.skip_invalid;
    run.config("input", c.input);
    run.config("date_column", o.date_column);
    run.config("value_column", o.value_column);
    run.config("date_format", o.date_format);
    return load_csv(c.input, schema);
  });
  for (const auto& r : raw.rejected) err << "note: skipped line " << r.line << ": " << r.reason << "\n";
  if (!raw.gaps.empty()) err << "note: " << raw.gaps.size() << " gap(s) in the dates\n";
  run.result("observations", std::to_string(raw.size()));
  run.result("gaps", std::to_string(raw.gaps.size()));
  run.result("rejected_lines", std::to_string(raw.rejected.size()));
  run.csv("series.csv", io::series_csv(raw));

  const Deseasonalized des = Stage("deseasonalize", [&] { return deseasonalize(raw); });
  run.csv("profile.csv", io::profile_csv(des.profile));
  run.csv("deseasonalized.csv", io::series_csv(des.series));

  const TimeSeries seg = Stage("segment", [&] {
    std::optional<Date> start;
    std::optional<Date> end;
    if (!o.segment.empty()) {
      const auto colon = o.segment.find(':');
      if (colon == std::string::npos) {
        throw Error(Errc::kConfiguration, "segment must be START:END");
      }
      start = parse_date(o.segment.substr(0, colon), "%Y-%m-%d");
      end = parse_date(o.segment.substr(colon + 1), "%Y-%m-%d");
      if (!start || !end) throw Error(Errc::kConfiguration, "segment dates must be YYYY-MM-DD");
      run.config("segment", o.segment);
    }
    return contiguous_segment(des.series, start, end);
  });
  const std::vector<double>& x = seg.values;

  run.config("p_max", std::to_string(o.p_max));
  const auto [aic, model] = Stage("ar", [&] {
    const auto table = aic_table(x, o.p_max);
    const std::size_t p =
        static_cast<std::size_t>(std::min_element(table.begin(), table.end()) - table.begin());
    return std::pair{table, yule_walker(x, p)};
  });
  std::string aic_csv = "p,aic\n";
  for (std::size_t p = 0; p < aic.size(); ++p) aic_csv += std::to_string(p) + "," + Num(aic[p]) + "\n";
  run.csv("aic.csv", aic_csv);
  run.csv("ar.csv", io::ar_csv(model));
  run.result("ar_order", std::to_string(model.order));
  out << "AR order (AIC, p_max = " << o.p_max << "): " << model.order << "\n";
  for (std::size_t i = 0; i < model.phi.size() && i < 5; ++i) {
    out << "  phi" << i + 1 << " = " << Num(model.phi[i]) << "\n";
  }

  const std::vector<double> res = Stage("residuals", [&] { return residuals(x, model); });
  run.csv("residuals.csv", io::values_csv(res, "residual"));

  Stage("diagnostics", [&] {
    const std::size_t lag = std::min(o.max_lag, res.size() - 1);
    const auto rho = acf(res, lag);
    PointSet2D acf_pts;
    for (std::size_t h = 0; h < rho.size(); ++h) acf_pts.push_back({static_cast<double>(h), rho[h]});
    run.csv("acf.csv", io::points_csv(acf_pts));
    const double band = 1.96 / std::sqrt(static_cast<double>(res.size()));
    SvgPlot acf_plot("ACF of residuals", "lag", "autocorrelation");
    acf_plot.add_series("acf", acf_pts, SvgPlot::Style::kScatter);
    acf_plot.add_series("upper band", {{0.0, band}, {static_cast<double>(lag), band}},
                        SvgPlot::Style::kLine);
    acf_plot.add_series("lower band", {{0.0, -band}, {static_cast<double>(lag), -band}},
                        SvgPlot::Style::kLine);
    run.svg("acf.svg", acf_plot);

    const OrderedSample s(res);
    const std::size_t n = s.n();
    auto [i_min, i_max] = o.trim.empty()
                              ? std::pair{default_trim_min(n), std::max<std::size_t>(n / 20, default_trim_min(n))}
                              : ParseTrim(o.trim);
    run.config("trim", std::to_string(i_min) + ":" + std::to_string(i_max));
    const KRule rule = KRule::parse(o.k);
    const std::size_t m = std::min(rule(n), n - 1);
    run.config("k", rule.describe());

    std::string summary = "estimator,parameter,xi_hat\n";
    auto row = [&](const std::string& name, const std::string& param, double xi) {
      summary += name + "," + param + "," + Num(xi) + "\n";
      out << "  " << name << " (" << param << "): xi_hat = " << Num(xi) << "\n";
    };
    out << "tail estimates on residuals:\n";

    const PointSet2D me = me_plot(s, i_min, i_max);
    run.csv("meplot.csv", io::points_csv(me));
    SvgPlot me_plot_svg("ME plot of residuals, order statistics " + std::to_string(i_min) + "-" +
                            std::to_string(i_max),
                        "threshold u", "mean excess");
    me_plot_svg.add_series("me_plot", thin(me, kSvgPointLimit), SvgPlot::Style::kScatter);
    try {
      const FitResult fit = ls_fit(me, PlotKind::kMEPlot);
      const auto [x0, x1] = XRange(me);
      me_plot_svg.add_series("ls_fit", FitLine(fit, x0, x1), SvgPlot::Style::kLine);
      if (fit.xi_hat) {
        me_plot_svg.add_annotation("xi_hat = " + Short(*fit.xi_hat));
        row("me_ls", "trim=" + std::to_string(i_min) + ":" + std::to_string(i_max), *fit.xi_hat);
        run.result("xi_me_ls", Num(*fit.xi_hat));
      }
    } catch (const Error& e) {
      if (e.code() != Errc::kSingularDesign) throw;
      me_plot_svg.add_annotation("no LS fit: " + e.detail());
    }
    run.svg("meplot.svg", me_plot_svg);

    const TraceOptions topts;
    for (auto kind : {EstimatorKind::kHill, EstimatorKind::kPickands}) {
      const auto t = trace(s, kind, topts);
      const std::string name = to_string(kind);
      run.csv(name + ".csv", io::trace_csv(t));
      run.svg(name + ".svg", TracePlot(t, name + " plot of residuals",
                                       kind == EstimatorKind::kHill ? "alpha_hat" : "xi_hat", false));
    }
    auto attempt = [&](const std::string& name, auto fn) {
      try {
        fn();
      } catch (const Error& e) {
        err << "note: " << name << " skipped: " << e.what() << "\n";
      }
    };
    attempt("hill", [&] { row("hill", "m=" + std::to_string(m), 1.0 / hill(s, m)); });
    attempt("pickands", [&] {
      const std::size_t mp = std::min(m, n / 4);
      row("pickands", "m=" + std::to_string(mp), pickands(s, mp));
    });
    attempt("moment", [&] { row("moment", "m=" + std::to_string(m), moment(s, m)); });
    attempt("qq_pos", [&] {
      const PointSet2D qq = qq_points_pos(s, m);
      const FitResult fit = ls_fit(qq, PlotKind::kQQPos);
      row("qq_pos", "m=" + std::to_string(m), *fit.xi_hat);
      SvgPlot plot("QQ plot of residuals, m = " + std::to_string(m), "-log(i/m)",
                   "log(X_(i)/X_(m))");
      plot.add_series("qq", thin(qq, kSvgPointLimit), SvgPlot::Style::kScatter);
      const auto [x0, x1] = XRange(qq);
      plot.add_series("ls_fit", FitLine(fit, x0, x1), SvgPlot::Style::kLine);
      run.svg("qq.svg", plot);
    });
    run.data("summary.csv", summary);
    return 0;
  });
}

// ---- argument plumbing -----------------------------------------------------

bool HasFlag(const std::vector<std::string>& args, const std::string& name) {
  const std::string flag = "--" + name;
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == flag || a.rfind(flag + "=", 0) == 0;
  });
}

std::optional<std::string> FlagValue(const std::vector<std::string>& args, const std::string& name) {
  const std::string flag = "--" + name;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == flag && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind(flag + "=", 0) == 0) return args[i].substr(flag.size() + 1);
  }
  return std::nullopt;
}

// Config entries become --key=value arguments unless the flag is present;
// the seed falls back to TAILSCOPE_SEED.
std::vector<std::string> ResolveArgs(std::vector<std::string> args) {
  if (const auto path = FlagValue(args, "config")) {
    std::ifstream in(*path);
    if (!in) throw Error(Errc::kIo, "cannot open config file '" + *path + "'");
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> extra;
    while (std::getline(in, line)) {
      ++line_no;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const auto b = line.find_first_not_of(" \t\r");
      if (b == std::string::npos) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        throw Error(Errc::kConfiguration, *path + ":" + std::to_string(line_no) +
                                              ": expected key = value");
      }
      auto trim = [](std::string s) {
        const auto lo = s.find_first_not_of(" \t\r");
        const auto hi = s.find_last_not_of(" \t\r");
        return lo == std::string::npos ? std::string() : s.substr(lo, hi - lo + 1);
      };
      std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key.rfind("--", 0) == 0) key.erase(0, 2);
      if (key.empty() || key == "config") continue;
      if (!HasFlag(args, key)) extra.push_back("--" + key + "=" + value);
    }
    args.insert(args.end(), extra.begin(), extra.end());
  }
  if (!HasFlag(args, "seed")) {
    if (const char* env = std::getenv("TAILSCOPE_SEED"); env != nullptr && *env != '\0') {
      args.push_back(std::string("--seed=") + env);
    }
  }
  return args;
}

}  // namespace

std::string version() { return TAILSCOPE_VERSION; }

int exit_code(ErrorClass error_class) {
  switch (error_class) {
    case ErrorClass::kConfig: return kExitConfig;
    case ErrorClass::kData: return kExitData;
    case ErrorClass::kIo: return kExitIo;
  }
  return kExitData;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  try {
    const std::vector<std::string> args =
        raw_args.empty() || raw_args.front().rfind("-", 0) == 0 ? raw_args
                                                                : ResolveArgs(raw_args);

    CLI::App app{"Mean-excess diagnostics and tail-index estimation for heavy-tailed data",
                 "tailscope"};
    app.set_version_flag("--version", version());
    app.require_subcommand(1);

    SimulateOptions sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Draw a sample from a model");
    AddCommon(sim_cmd, sim.common, false);
    sim_cmd->add_option("--n", sim.n, "Sample size");

    MeplotOptions me;
    auto* me_cmd = app.add_subcommand("meplot", "ME plot with least-squares tail estimate");
    AddCommon(me_cmd, me.common, true);
    me_cmd->add_option("--n", me.n, "Sample size when simulating");
    me_cmd->add_option("--trim", me.trim, "Order-statistic range i_min:i_max");

    EstimateOptions est;
    auto* est_cmd = app.add_subcommand("estimate", "Hill, Pickands, moment traces and QQ plots");
    AddCommon(est_cmd, est.common, true);
    est_cmd->add_option("--n", est.n, "Sample size when simulating");
    est_cmd->add_option("--k", est.k, "Rule for m in point estimates: pow:E, sqrt, fixed:M");
    est_cmd->add_option("--m-max", est.m_max, "Largest m in traces (0: all)");
    est_cmd->add_option("--stride", est.stride, "Step between trace entries");

    ConvergeOptions conv;
    auto* conv_cmd = app.add_subcommand("converge", "Monte Carlo set-convergence experiment");
    AddCommon(conv_cmd, conv.common, false);
    conv_cmd->add_option("--case", conv.tail_case, "positive, negative, zero or heavy");
    conv_cmd->add_option("--n", conv.n_grid, "Comma-separated sample sizes");
    conv_cmd->add_option("--k", conv.k, "k rule: pow:E, sqrt, fixed:K");
    conv_cmd->add_option("--reps", conv.reps, "Replications per sample size");
    conv_cmd->add_option("--window", conv.window, "x0,x1,y0,y1");
    conv_cmd->add_option("--resolution", conv.resolution, "Limit discretization resolution");
    conv_cmd->add_option("--threads", conv.threads, "Worker threads (0: all cores)");
    conv_cmd->add_option("--assume-xi", conv.assume_xi,
                         "Reference xi for the positive case when the model has xi >= 1");
    conv_cmd->add_option("--level", conv.level, "Level of the zero-case limit line");

    AnalyzeOptions an;
    auto* an_cmd = app.add_subcommand("analyze", "Deseasonalize, fit AR, diagnose residual tails");
    AddCommon(an_cmd, an.common, true);
    an_cmd->add_option("--date-column", an.date_column, "Date column name");
    an_cmd->add_option("--value-column", an.value_column, "Value column name");
    an_cmd->add_option("--date-format", an.date_format, "Date format (%Y %m %d)");
    an_cmd->add_flag("--skip-invalid", an.skip_invalid, "Drop unparseable rows instead of failing");
    an_cmd->add_option("--segment", an.segment, "Contiguous date range START:END for AR fitting");
    an_cmd->add_option("--p-max", an.p_max, "Largest AR order searched by AIC");
    an_cmd->add_option("--trim", an.trim, "ME plot order-statistic range i_min:i_max");
    an_cmd->add_option("--k", an.k, "Rule for m in point estimates");
    an_cmd->add_option("--max-lag", an.max_lag, "Largest ACF lag");

    try {
      std::vector<std::string> reversed(args.rbegin(), args.rend());
      app.parse(reversed);
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? kExitOk : kExitConfig;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    auto go = [&](const Common& common, auto body) {
      Run r(command, common, raw_args);
      body(r);
      r.finish();
    };
    if (command == "simulate") go(sim.common, [&](Run& r) { Simulate(sim, r, out); });
    if (command == "meplot") go(me.common, [&](Run& r) { Meplot(me, r, out); });
    if (command == "estimate") go(est.common, [&](Run& r) { Estimate(est, r, out, err); });
    if (command == "converge") go(conv.common, [&](Run& r) { Converge(conv, r, out); });
    if (command == "analyze") go(an.common, [&](Run& r) { Analyze(an, r, out, err); });
    return kExitOk;
  } catch (const Error& e) {
    err << "tailscope: error: " << e.what() << "\n";
    return exit_code(e.error_class());
  } catch (const std::exception& e) {
    err << "tailscope: error: " << e.what() << "\n";
    return kExitData;
  }
}

}  // namespace tailscope::cli
