#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>

#include "rcp/scenario.hpp"

namespace rcp {

// Placement controller gains. eps_den regularizes the control-law
// denominator, which vanishes exactly at the optimal placement; the additive
// form keeps u -> 0 smooth at the fixed point. u_max optionally caps each
// controller's speed and is off by default.
struct ControllerGains {
  double k0 = 1.0;
  double eps_den = 1e-9;
  std::optional<double> u_max;
};

inline void validate(const ControllerGains& g) {
  if (!(g.k0 > 0.0)) throw std::invalid_argument("k0 must be positive");
  if (!(g.eps_den > 0.0)) throw std::invalid_argument("eps_den must be positive");
  if (g.u_max && !(*g.u_max > 0.0)) throw std::invalid_argument("u_max must be positive");
}

// Geometric temperature schedule: T starts at t0 and decays by alpha per
// step, floored at t_min.
struct AnnealSchedule {
  double t0 = 16.0;
  double alpha = 0.95;
  double t_min = kDefaultTempFloor;
};

inline void validate(const AnnealSchedule& s) {
  if (!(s.t0 > 0.0)) throw std::invalid_argument("t0 must be positive");
  if (!(s.alpha > 0.0 && s.alpha < 1.0)) throw std::invalid_argument("alpha must be in (0, 1)");
  if (!(s.t_min > 0.0 && s.t_min <= s.t0)) {
    throw std::invalid_argument("t_min must be in (0, t0]");
  }
}

// Per-frame deterministic-annealing solver configuration.
struct FrameSolverConfig {
  double t0 = 16.0;
  double alpha = 0.9;
  double t_min = kDefaultTempFloor;
  double inner_tol = 1e-6;
  std::size_t max_inner_iters = 100;
  bool warm_start = false;
};

inline void validate(const FrameSolverConfig& c) {
  if (!(c.t0 > 0.0)) throw std::invalid_argument("t0 must be positive");
  if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw std::invalid_argument("alpha must be in (0, 1)");
  if (!(c.t_min > 0.0 && c.t_min <= c.t0)) {
    throw std::invalid_argument("t_min must be in (0, t0]");
  }
  if (!(c.inner_tol > 0.0)) throw std::invalid_argument("inner_tol must be positive");
  if (c.max_inner_iters < 1) throw std::invalid_argument("max_inner_iters must be >= 1");
}

// Radius of the seeded perturbations that break controller coincidence at
// initialization. Coincident controllers receive identical updates forever,
// so exact ties must never occur.
inline constexpr double kInitPerturbRadius = 1e-3;

// Deterministic-annealing start: all controllers at the centroid of the
// given points, each displaced by a small seeded perturbation.
inline std::vector<Vec> initial_placement(const std::vector<Vec>& points, std::size_t m,
                                          std::uint64_t seed) {
  if (points.empty()) throw std::invalid_argument("initial_placement: no points");
  const std::size_t d = points.front().size();
  Vec centroid(d, 0.0);
  for (const Vec& p : points) add_scaled(centroid, p, 1.0);
  for (double& c : centroid) c /= static_cast<double>(points.size());
  SplitMix64 rng(seed);
  std::vector<Vec> placement(m, centroid);
  for (Vec& y : placement) {
    for (double& c : y) c += kInitPerturbRadius * rng.next_uniform(-1.0, 1.0);
  }
  return placement;
}

inline ControllerGains gains_from(const Scenario& s) {
  ControllerGains g;
  g.k0 = s.k0;
  return g;
}

inline AnnealSchedule schedule_from(const Scenario& s) {
  AnnealSchedule sched;
  sched.t0 = s.t0_temperature;
  sched.alpha = s.alpha;
  sched.t_min = std::min(kDefaultTempFloor, s.t0_temperature);
  return sched;
}

inline FrameSolverConfig frame_config_from(const Scenario& s) {
  FrameSolverConfig c;
  c.t0 = s.t0_temperature;
  c.t_min = std::min(kDefaultTempFloor, s.t0_temperature);
  return c;
}

}  // namespace rcp
