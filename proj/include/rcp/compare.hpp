#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "rcp/controller.hpp"
#include "rcp/frame_solver.hpp"
#include "rcp/metrics.hpp"
#include "rcp/scenario_io.hpp"

namespace rcp {

struct TimingStats {
  double mean_ms = 0.0;
  double std_ms = 0.0;
  // Quartiles of the per-step wall times, milliseconds.
  double q0 = 0.0, q25 = 0.0, q50 = 0.0, q75 = 0.0, q100 = 0.0;
};

inline TimingStats timing_stats(const RunTrace& trace) {
  TimingStats s;
  const std::size_t n = trace.rows.size();
  if (n == 0) return s;
  std::vector<double> ms;
  ms.reserve(n);
  double sum = 0.0;
  for (const TraceRow& row : trace.rows) {
    ms.push_back(static_cast<double>(row.wall_us) / 1000.0);
    sum += ms.back();
  }
  s.mean_ms = sum / static_cast<double>(n);
  double var = 0.0;
  for (double v : ms) var += (v - s.mean_ms) * (v - s.mean_ms);
  s.std_ms = std::sqrt(var / static_cast<double>(n));
  std::sort(ms.begin(), ms.end());
  auto quantile = [&](double p) {
    const double pos = p * static_cast<double>(n - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, n - 1);
    const double frac = pos - static_cast<double>(lo);
    return ms[lo] * (1.0 - frac) + ms[hi] * frac;
  };
  s.q0 = ms.front();
  s.q25 = quantile(0.25);
  s.q50 = quantile(0.5);
  s.q75 = quantile(0.75);
  s.q100 = ms.back();
  return s;
}

// Both algorithms run on the identical scenario, aligned step by step.
struct ComparisonReport {
  Scenario scenario;
  RunTrace rcp;
  RunTrace frame;
  // Per step: matched distance between the two placements, and the hard
  // total network delay of each.
  std::vector<double> tracking_error;
  std::vector<double> rcp_delay;
  std::vector<double> frame_delay;
  TimingStats rcp_timing;
  TimingStats frame_timing;
  double speedup = 0.0;  // frame mean step time / rcp mean step time
};

// Run both solvers on the same scenario and align their traces. The two runs
// execute sequentially on the calling thread so the timing comparison is
// fair; wall times were captured around the pure compute calls inside the
// runs and file emission never counts.
inline ComparisonReport compare_runs(const Scenario& scenario, const ControllerGains& gains,
                                     const AnnealSchedule& schedule,
                                     const FrameSolverConfig& frame_config) {
  ComparisonReport report;
  report.scenario = scenario;
  report.rcp = run_rcp(scenario, gains, schedule);
  report.frame = run_frame_by_frame(scenario, frame_config);

  const std::size_t n = report.rcp.rows.size();
  report.tracking_error.reserve(n);
  report.rcp_delay.reserve(n);
  report.frame_delay.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::vector<Vec> rcp_y = row_controllers(report.rcp, report.rcp.rows[i]);
    const std::vector<Vec> frame_y = row_controllers(report.frame, report.frame.rows[i]);
    report.tracking_error.push_back(tracking_error(rcp_y, frame_y));

    NetworkState state;
    state.t = report.rcp.rows[i].t;
    state.nodes = node_positions(scenario.mobility, state.t);
    state.controllers = rcp_y;
    report.rcp_delay.push_back(total_delay(state, scenario.gamma));
    state.controllers = frame_y;
    report.frame_delay.push_back(total_delay(state, scenario.gamma));
  }
  report.rcp_timing = timing_stats(report.rcp);
  report.frame_timing = timing_stats(report.frame);
  report.speedup =
      report.rcp_timing.mean_ms > 0.0 ? report.frame_timing.mean_ms / report.rcp_timing.mean_ms
                                      : 0.0;
  return report;
}

namespace detail {

inline nlohmann::json timing_to_json(const TimingStats& s) {
  nlohmann::json j;
  j["mean_ms"] = s.mean_ms;
  j["std_ms"] = s.std_ms;
  j["quartiles_ms"] = {s.q0, s.q25, s.q50, s.q75, s.q100};
  return j;
}

}  // namespace detail

// Write rcp.csv, frame.csv, comparison.csv and report.json into out_dir.
// With zero_walltime all wall-time derived values are written as zero so
// repeated runs produce byte-identical files.
inline void emit_comparison(const ComparisonReport& report, const std::string& out_dir,
                            bool zero_walltime = false) {
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  emit_csv(report.rcp, (dir / "rcp.csv").string(), zero_walltime);
  emit_csv(report.frame, (dir / "frame.csv").string(), zero_walltime);

  std::string csv = "step,t,tracking_error,rcp_delay,frame_delay,rcp_wall_us,frame_wall_us\n";
  char buf[48];
  for (std::size_t i = 0; i < report.tracking_error.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%zu", i);
    csv += buf;
    csv += ',';
    detail::append_double(csv, report.rcp.rows[i].t);
    csv += ',';
    detail::append_double(csv, report.tracking_error[i]);
    csv += ',';
    detail::append_double(csv, report.rcp_delay[i]);
    csv += ',';
    detail::append_double(csv, report.frame_delay[i]);
    csv += ',';
    std::snprintf(buf, sizeof(buf), "%" PRIu64,
                  zero_walltime ? 0 : report.rcp.rows[i].wall_us);
    csv += buf;
    csv += ',';
    std::snprintf(buf, sizeof(buf), "%" PRIu64,
                  zero_walltime ? 0 : report.frame.rows[i].wall_us);
    csv += buf;
    csv += '\n';
  }
  {
    std::ofstream f(dir / "comparison.csv", std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + (dir / "comparison.csv").string());
    f.write(csv.data(), static_cast<std::streamsize>(csv.size()));
  }

  nlohmann::json j;
  j["scenario"] = scenario_to_json(report.scenario);
  if (zero_walltime) {
    j["rcp_timing"] = detail::timing_to_json(TimingStats{});
    j["frame_timing"] = detail::timing_to_json(TimingStats{});
    j["speedup"] = 0.0;
  } else {
    j["rcp_timing"] = detail::timing_to_json(report.rcp_timing);
    j["frame_timing"] = detail::timing_to_json(report.frame_timing);
    j["speedup"] = report.speedup;
  }
  {
    std::ofstream f(dir / "report.json", std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + (dir / "report.json").string());
    const std::string text = j.dump(2) + "\n";
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
  }
}

}  // namespace rcp
