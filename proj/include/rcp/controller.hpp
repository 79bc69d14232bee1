#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>

#include "rcp/clustering.hpp"
#include "rcp/metrics.hpp"
#include "rcp/mobility.hpp"
#include "rcp/params.hpp"
#include "rcp/trace.hpp"

// Real-time placement controller. Instead of re-solving the clustering
// problem per snapshot, controllers move continuously under a velocity law
// that makes the free energy non-increasing along the joint node/controller
// trajectory, so the placement converges onto the optimal one while the
// network moves.

namespace rcp {

// Result of one explicit-Euler controller update.
struct RcpStepResult {
  std::vector<Vec> controllers;     // placement after the step
  std::vector<Vec> u;               // applied controller velocities
  std::vector<Vec> y_bar;           // scaled deviation from the optimal placement
  std::vector<Vec> centroid_target; // the placement that would zero y_bar
  double lyapunov_rate = 0.0;       // -2 k0 sum_j mass_j |ybar_j|^2, always <= 0
  CostBreakdown cost;               // cost terms at the pre-step placement
};

// Scaled deviation from the optimal placement at the current weights:
//   ybar_j = N * ((Theta y)_j - c_j),  c_j = sum_i p(x_i|y_j) x_i.
// Zero exactly when y solves the optimal-placement system.
inline std::vector<Vec> y_bar(const NetworkState& state, const AssociationMatrix& assoc,
                              double gamma) {
  const auto [post, masses] = posteriors_and_masses(assoc);
  (void)masses;
  const std::vector<Vec> c = posterior_means(state, post);
  std::vector<Vec> out = theta_apply(state.controllers, gamma);
  const double n = static_cast<double>(state.num_nodes());
  for (std::size_t j = 0; j < out.size(); ++j) {
    for (std::size_t k = 0; k < out[j].size(); ++k) {
      out[j][k] = n * (out[j][k] - c[j][k]);
    }
  }
  return out;
}

namespace detail {

// (x^T - y^T Pbar^T) phi = sum_i phi_i . (x_i - sum_j p(y_j|x_i) y_j)
inline double drift_coupling(const NetworkState& state, const AssociationMatrix& assoc,
                             const std::vector<Vec>& phi) {
  const std::size_t n = state.num_nodes();
  const std::size_t m = state.num_controllers();
  const std::size_t d = state.dimension();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec& x = state.nodes[i];
    for (std::size_t k = 0; k < d; ++k) {
      double residual = x[k];
      for (std::size_t j = 0; j < m; ++j) residual -= assoc(i, j) * state.controllers[j][k];
      total += phi[i][k] * residual;
    }
  }
  return total;
}

inline double weighted_ybar_norm_sq(const std::vector<Vec>& ybar, const ClusterMasses& masses) {
  double s = 0.0;
  for (std::size_t j = 0; j < ybar.size(); ++j) s += masses.masses[j] * norm_sq(ybar[j]);
  return s;
}

inline std::vector<Vec> apply_gain(const std::vector<Vec>& ybar, double scale,
                                   const std::optional<double>& u_max) {
  std::vector<Vec> u(ybar.size());
  for (std::size_t j = 0; j < ybar.size(); ++j) {
    u[j] = rcp::scale(ybar[j], -scale);
    if (u_max) {
      const double mag = norm(u[j]);
      if (mag > *u_max) u[j] = rcp::scale(u[j], *u_max / mag);
    }
  }
  return u;
}

}  // namespace detail

// Velocity law
//   u = -[k0 + ((x^T - y^T Pbar^T) phi) / (ybar^T Pbar_y ybar + eps)] ybar.
// For a static network the coupling term vanishes and u = -k0 ybar; at the
// optimal placement ybar = 0 and the controllers hold position.
inline std::vector<Vec> control_law(const NetworkState& state, const AssociationMatrix& assoc,
                                    const std::vector<Vec>& phi, const ControllerGains& gains,
                                    double gamma) {
  if (phi.size() != state.num_nodes()) {
    throw std::invalid_argument("control_law: one velocity per node required");
  }
  const auto [post, masses] = posteriors_and_masses(assoc);
  (void)post;
  const std::vector<Vec> ybar = y_bar(state, assoc, gamma);
  const double num = detail::drift_coupling(state, assoc, phi);
  const double den = detail::weighted_ybar_norm_sq(ybar, masses) + gains.eps_den;
  return detail::apply_gain(ybar, gains.k0 + num / den, gains.u_max);
}

// Descent rate of the free energy under the control law: -2 k0 ybar^T Pbar_y ybar.
inline double lyapunov_rate(const std::vector<Vec>& ybar, const ClusterMasses& masses,
                            double k0) {
  if (!(k0 > 0.0)) throw std::invalid_argument("k0 must be positive");
  return -2.0 * k0 * detail::weighted_ybar_norm_sq(ybar, masses);
}

// One explicit-Euler step: refresh Gibbs weights at the current temperature,
// evaluate the control law, advance the controllers by u*dt. Node positions
// are not advanced here; the caller moves them along the exact closed form.
inline RcpStepResult rcp_step(const NetworkState& state, const MobilitySpec& spec,
                              double temperature, const ControllerGains& gains, double gamma,
                              double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  const std::size_t m = state.num_controllers();
  const double n = static_cast<double>(state.num_nodes());

  RcpStepResult result;
  const AssociationMatrix assoc = gibbs_associations(state, temperature, gamma);
  const auto [post, masses] = posteriors_and_masses(assoc);
  const std::vector<Vec> c = posterior_means(state, post);
  result.centroid_target = theta_solve(c, gamma);

  result.y_bar = theta_apply(state.controllers, gamma);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = 0; k < result.y_bar[j].size(); ++k) {
      result.y_bar[j][k] = n * (result.y_bar[j][k] - c[j][k]);
    }
  }

  const std::vector<Vec> phi = node_velocities(spec, state.t);
  const double num = detail::drift_coupling(state, assoc, phi);
  const double den = detail::weighted_ybar_norm_sq(result.y_bar, masses) + gains.eps_den;
  result.u = detail::apply_gain(result.y_bar, gains.k0 + num / den, gains.u_max);
  result.lyapunov_rate = -2.0 * gains.k0 * detail::weighted_ybar_norm_sq(result.y_bar, masses);

  result.controllers.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    result.controllers[j] = state.controllers[j];
    add_scaled(result.controllers[j], result.u[j], dt);
    require_finite(result.controllers[j], "controller update");
  }
  result.cost = free_energy(state, assoc, temperature, gamma);
  if (!std::isfinite(result.cost.free_energy)) {
    throw numeric_error("non-finite free energy");
  }
  return result;
}

// Run the annealed control loop over the scenario horizon: n explicit-Euler
// steps of size horizon/n, temperature decaying by alpha per step down to
// t_min. Emits one trace row per step; each row describes the configuration
// the step started from. The tracking_error column is the matched distance
// from the current placement to the placement that would zero y_bar at the
// current weights.
inline RunTrace run_rcp(const Scenario& scenario, const ControllerGains& gains,
                        const AnnealSchedule& schedule) {
  validate(scenario);
  validate(gains);
  validate(schedule);
  const MobilitySpec& spec = scenario.mobility;
  const double dt = time_step(scenario);

  RunTrace trace;
  trace.header = {"rcp", scenario, gains, schedule, FrameSolverConfig{}};
  trace.num_controllers = scenario.num_controllers;
  trace.dimension = spec.dimension;
  trace.rows.reserve(scenario.steps);

  NetworkState state;
  state.t = 0.0;
  state.nodes = node_positions(spec, 0.0);
  state.controllers =
      initial_placement(state.nodes, scenario.num_controllers, scenario.seed);

  double temperature = schedule.t0;
  for (std::size_t i = 0; i < scenario.steps; ++i) {
    state.t = static_cast<double>(i) * dt;
    state.nodes = node_positions(spec, state.t);

    const auto started = std::chrono::steady_clock::now();
    RcpStepResult step;
    try {
      step = rcp_step(state, spec, temperature, gains, scenario.gamma, dt);
    } catch (const numeric_error& e) {
      throw numeric_error(std::string(e.what()) + " (rcp step " + std::to_string(i) + ")");
    }
    const auto elapsed = std::chrono::steady_clock::now() - started;

    TraceRow row;
    row.step = i;
    row.t = state.t;
    row.temperature = temperature;
    row.d1 = step.cost.delay;
    row.d2 = step.cost.sync;
    row.entropy = step.cost.entropy;
    row.free_energy = step.cost.free_energy;
    row.tracking_error = tracking_error(state.controllers, step.centroid_target);
    row.wall_us = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::microseconds>(elapsed).count());
    row.controllers.reserve(trace.num_controllers * trace.dimension);
    for (const Vec& y : state.controllers) {
      row.controllers.insert(row.controllers.end(), y.begin(), y.end());
    }
    trace.rows.push_back(std::move(row));

    state.controllers = std::move(step.controllers);
    temperature = std::max(schedule.alpha * temperature, schedule.t_min);
  }
  return trace;
}

}  // namespace rcp
