// Command-line driver: scenario generation, single-algorithm runs, paired
// comparison runs, and SVG plotting of trace files.
//
// Exit codes: 0 success, 2 invalid arguments or configuration, 3 runtime
// numeric failure (a run produced a non-finite value).

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rcp/compare.hpp"
#include "rcp/controller.hpp"
#include "rcp/frame_solver.hpp"
#include "rcp/plot.hpp"
#include "rcp/scenario_io.hpp"

namespace {

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> gamma;
  std::optional<double> k0;
  std::optional<double> alpha;
  std::optional<double> t0;
  std::optional<std::size_t> steps;
  std::optional<double> horizon;
};

void add_override_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--seed", o.seed, "Override the scenario seed");
  cmd->add_option("--gamma", o.gamma, "Override the synchronization weight");
  cmd->add_option("--k0", o.k0, "Override the controller gain");
  cmd->add_option("--alpha", o.alpha, "Override the temperature decay rate");
  cmd->add_option("--t0", o.t0, "Override the starting temperature");
  cmd->add_option("--steps", o.steps, "Override the number of steps");
  cmd->add_option("--horizon", o.horizon, "Override the time horizon");
}

rcp::Scenario load_with_overrides(const std::string& path, const Overrides& o) {
  rcp::Scenario s = rcp::load_scenario(path);
  if (o.seed) s.seed = *o.seed;
  if (o.gamma) s.gamma = *o.gamma;
  if (o.k0) s.k0 = *o.k0;
  if (o.alpha) s.alpha = *o.alpha;
  if (o.t0) s.t0_temperature = *o.t0;
  if (o.steps) s.steps = *o.steps;
  if (o.horizon) s.horizon = *o.horizon;
  rcp::validate(s);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Real-time controller placement simulator"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a scenario JSON file");
  rcp::ScenarioGenConfig gen_config;
  std::string gen_out;
  gen->add_option("--out", gen_out, "Output scenario path")->required();
  gen->add_option("--dim", gen_config.dimension, "Coordinate dimension");
  gen->add_option("--clusters", gen_config.num_clusters, "Number of node clusters");
  gen->add_option("--nodes-per-cluster", gen_config.nodes_per_cluster, "Nodes per cluster");
  gen->add_option("--spread", gen_config.cluster_spread, "Cluster standard deviation");
  gen->add_option("--rayleigh-sigma", gen_config.rayleigh_sigma,
                  "Rayleigh parameter for node rates");
  gen->add_option("--controllers", gen_config.num_controllers, "Number of controllers");
  gen->add_option("--seed", gen_config.seed, "Generator seed");
  gen->add_option("--horizon", gen_config.horizon, "Time horizon (seconds)");
  gen->add_option("--steps", gen_config.steps, "Number of simulation steps");
  gen->add_option("--gamma", gen_config.gamma, "Synchronization weight");
  gen->add_option("--k0", gen_config.k0, "Controller gain (<=0 selects the default)");
  gen->add_option("--alpha", gen_config.alpha,
                  "Temperature decay per step (<=0 selects the default)");
  gen->add_option("--t0", gen_config.t0, "Starting temperature (<=0 selects the default)");

  // run
  auto* run = app.add_subcommand("run", "Run one algorithm on a scenario");
  std::string run_algo, run_scenario, run_out;
  bool run_zero_wall = false;
  bool run_warm_start = false;
  Overrides run_overrides;
  run->add_option("--algo", run_algo, "Algorithm: rcp or frame")
      ->required()
      ->check(CLI::IsMember({"rcp", "frame"}));
  run->add_option("--scenario", run_scenario, "Scenario JSON path")->required();
  run->add_option("--out", run_out, "Output trace CSV path")->required();
  run->add_flag("--zero-walltime", run_zero_wall, "Write wall_us as 0");
  run->add_flag("--warm-start", run_warm_start,
                "Frame algorithm: start each frame from the previous placement");
  add_override_flags(run, run_overrides);

  // compare
  auto* compare = app.add_subcommand("compare", "Run both algorithms and emit a comparison");
  std::string cmp_scenario, cmp_out_dir;
  bool cmp_zero_wall = false;
  Overrides cmp_overrides;
  compare->add_option("--scenario", cmp_scenario, "Scenario JSON path")->required();
  compare->add_option("--out-dir", cmp_out_dir, "Output directory")->required();
  compare->add_flag("--zero-walltime", cmp_zero_wall, "Write wall-time fields as 0");
  add_override_flags(compare, cmp_overrides);

  // plot
  auto* plot = app.add_subcommand("plot", "Render trace CSVs as an SVG");
  std::vector<std::string> plot_traces;
  std::string plot_out;
  plot->add_option("--trace", plot_traces, "Trace CSV path (repeatable)")->required();
  plot->add_option("--out", plot_out, "Output SVG path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) {
      const rcp::Scenario scenario = rcp::generate_scenario(gen_config);
      rcp::save_scenario(scenario, gen_out);
      std::printf("wrote %s (%zu nodes, %zu controllers)\n", gen_out.c_str(),
                  scenario.mobility.num_nodes(), scenario.num_controllers);
    } else if (run->parsed()) {
      const rcp::Scenario scenario = load_with_overrides(run_scenario, run_overrides);
      rcp::RunTrace trace;
      if (run_algo == "rcp") {
        trace = rcp::run_rcp(scenario, rcp::gains_from(scenario), rcp::schedule_from(scenario));
      } else {
        rcp::FrameSolverConfig config = rcp::frame_config_from(scenario);
        config.warm_start = run_warm_start;
        trace = rcp::run_frame_by_frame(scenario, config);
      }
      rcp::emit_csv(trace, run_out, run_zero_wall);
      std::printf("wrote %s (%zu rows)\n", run_out.c_str(), trace.rows.size());
    } else if (compare->parsed()) {
      const rcp::Scenario scenario = load_with_overrides(cmp_scenario, cmp_overrides);
      const rcp::ComparisonReport report =
          rcp::compare_runs(scenario, rcp::gains_from(scenario), rcp::schedule_from(scenario),
                            rcp::frame_config_from(scenario));
      rcp::emit_comparison(report, cmp_out_dir, cmp_zero_wall);
      std::printf("wrote %s/{rcp.csv,frame.csv,comparison.csv,report.json}\n",
                  cmp_out_dir.c_str());
      if (!cmp_zero_wall) {
        std::printf("mean step time: rcp %.3f ms, frame %.3f ms, speedup %.1fx\n",
                    report.rcp_timing.mean_ms, report.frame_timing.mean_ms, report.speedup);
      }
    } else if (plot->parsed()) {
      std::vector<rcp::RunTrace> traces;
      std::vector<std::string> labels;
      for (const std::string& path : plot_traces) {
        traces.push_back(rcp::parse_csv(path));
        labels.push_back(std::filesystem::path(path).stem().string());
      }
      rcp::emit_plot(traces, labels, plot_out);
      std::printf("wrote %s\n", plot_out.c_str());
    }
  } catch (const rcp::numeric_error& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return 3;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
