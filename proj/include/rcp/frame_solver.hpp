#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>

#include "rcp/clustering.hpp"
#include "rcp/metrics.hpp"
#include "rcp/params.hpp"
#include "rcp/trace.hpp"

// Frame-by-frame baseline: a per-snapshot deterministic-annealing solver.
// Each frame is solved from a cold start, ignoring the temporal relationship
// between snapshots; this is the convention the comparison harness measures
// against.

namespace rcp {

struct FrameSolution {
  std::vector<Vec> controllers;
  AssociationMatrix assoc;
  CostBreakdown cost;
  std::size_t iterations = 0;
  std::size_t temperature_levels = 0;
  std::uint64_t wall_us = 0;
  // Objective recorded at the start of every inner iteration, and the
  // largest increase observed between consecutive iterations at a fixed
  // temperature (0 when the inner loop only ever descended).
  std::vector<double> objective_trace;
  double max_objective_increase = 0.0;
};

// Anneal the temperature from t0 by factor alpha down to t_min; at each
// level alternate Gibbs weights and optimal centroids until the largest
// controller displacement falls below inner_tol or max_inner_iters is hit.
// Deterministic given the seed. warm_init, when given, replaces the seeded
// cold-start placement.
//
// Every level starts with a small seeded displacement of each controller.
// Above the critical temperature the alternation pulls near-coincident
// controllers back together, and in floating point the gap between them
// reaches exactly zero, after which identical controllers receive identical
// updates forever and the clusters can never separate. The per-level
// perturbation keeps the gap alive so splits happen where they should; at
// the final level the inner loop converges well past the perturbation
// radius, so the returned placement is unaffected.
inline FrameSolution solve_frame(const std::vector<Vec>& nodes, std::size_t num_controllers,
                                 double gamma, const FrameSolverConfig& config,
                                 std::uint64_t seed,
                                 const std::vector<Vec>* warm_init = nullptr) {
  if (nodes.empty() || num_controllers < 1 || nodes.size() < num_controllers) {
    throw std::invalid_argument("solve_frame: need N >= M >= 1");
  }
  validate(config);
  const auto started = std::chrono::steady_clock::now();

  NetworkState state;
  state.nodes = nodes;
  state.controllers =
      warm_init ? *warm_init : initial_placement(nodes, num_controllers, seed);
  SplitMix64 rng(seed ^ 0x5bf0f3c4f2fa5bd5ULL);

  FrameSolution sol;
  double temperature = config.t0;
  bool last_level = false;
  while (!last_level) {
    if (temperature <= config.t_min) {
      temperature = config.t_min;
      last_level = true;
    }
    ++sol.temperature_levels;
    for (Vec& y : state.controllers) {
      for (double& c : y) c += kInitPerturbRadius * rng.next_uniform(-1.0, 1.0);
    }
    double level_prev_objective = std::numeric_limits<double>::infinity();
    for (std::size_t it = 0; it < config.max_inner_iters; ++it) {
      const AssociationMatrix assoc = gibbs_associations(state, temperature, gamma);
      const double objective = free_energy(state, assoc, temperature, gamma).free_energy;
      sol.objective_trace.push_back(objective);
      if (objective > level_prev_objective) {
        sol.max_objective_increase =
            std::max(sol.max_objective_increase, objective - level_prev_objective);
      }
      level_prev_objective = objective;

      std::vector<Vec> next = optimal_centroids(state, assoc, gamma);
      double max_disp_sq = 0.0;
      for (std::size_t j = 0; j < next.size(); ++j) {
        max_disp_sq = std::max(max_disp_sq, dist_sq(next[j], state.controllers[j]));
        require_finite(next[j], "frame solver centroid");
      }
      state.controllers = std::move(next);
      ++sol.iterations;
      if (max_disp_sq < config.inner_tol * config.inner_tol) break;
    }
    temperature *= config.alpha;
  }

  sol.assoc = gibbs_associations(state, config.t_min, gamma);
  sol.cost = free_energy(state, sol.assoc, config.t_min, gamma);
  if (!std::isfinite(sol.cost.free_energy)) throw numeric_error("non-finite free energy");
  sol.controllers = std::move(state.controllers);
  sol.wall_us = static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::microseconds>(
                                               std::chrono::steady_clock::now() - started)
                                               .count());
  return sol;
}

// Solve every snapshot of the scenario independently (cold start per frame
// unless config.warm_start is set, in which case each frame starts from the
// previous placement). Rows carry the solved placement for the snapshot at
// t; tracking_error is the solution's own fixed-point residual.
inline RunTrace run_frame_by_frame(const Scenario& scenario, const FrameSolverConfig& config) {
  validate(scenario);
  validate(config);
  const MobilitySpec& spec = scenario.mobility;
  const double dt = time_step(scenario);

  RunTrace trace;
  trace.header = {"frame", scenario, ControllerGains{}, AnnealSchedule{}, config};
  trace.num_controllers = scenario.num_controllers;
  trace.dimension = spec.dimension;
  trace.rows.reserve(scenario.steps);

  std::vector<Vec> previous;
  for (std::size_t i = 0; i < scenario.steps; ++i) {
    const double t = static_cast<double>(i) * dt;
    const std::vector<Vec> nodes = node_positions(spec, t);
    const std::vector<Vec>* warm =
        (config.warm_start && !previous.empty()) ? &previous : nullptr;
    FrameSolution sol;
    try {
      sol = solve_frame(nodes, scenario.num_controllers, scenario.gamma, config,
                        scenario.seed, warm);
    } catch (const numeric_error& e) {
      throw numeric_error(std::string(e.what()) + " (frame " + std::to_string(i) + ")");
    }

    NetworkState state;
    state.t = t;
    state.nodes = nodes;
    state.controllers = sol.controllers;

    TraceRow row;
    row.step = i;
    row.t = t;
    row.temperature = config.t_min;
    row.d1 = sol.cost.delay;
    row.d2 = sol.cost.sync;
    row.entropy = sol.cost.entropy;
    row.free_energy = sol.cost.free_energy;
    row.tracking_error =
        tracking_error(sol.controllers, optimal_centroids(state, sol.assoc, scenario.gamma));
    row.wall_us = sol.wall_us;
    row.controllers.reserve(trace.num_controllers * trace.dimension);
    for (const Vec& y : sol.controllers) {
      row.controllers.insert(row.controllers.end(), y.begin(), y.end());
    }
    trace.rows.push_back(std::move(row));
    previous = std::move(sol.controllers);
  }
  return trace;
}

}  // namespace rcp
