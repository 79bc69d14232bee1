#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

#include "rcp/geometry.hpp"
#include "rcp/mobility.hpp"
#include "rcp/rng.hpp"

namespace rcp {

// Temperature floor shared by both solvers; Gibbs weights are undefined at
// T = 0, and below this value they are hard to machine precision anyway.
inline constexpr double kDefaultTempFloor = 1e-6;

// A complete simulation input: node motions plus solver parameters. This is
// what scenario JSON files serialize.
struct Scenario {
  MobilitySpec mobility;
  std::size_t num_controllers = 3;
  double gamma = 0.0;
  double k0 = 1.0;
  double t0_temperature = 16.0;
  double alpha = 0.95;
  double horizon = 5.0;
  std::size_t steps = 300;
  std::uint64_t seed = 1;
};

inline void validate(const Scenario& s) {
  validate(s.mobility);
  if (s.num_controllers < 1) throw std::invalid_argument("num_controllers must be >= 1");
  if (s.num_controllers > s.mobility.num_nodes()) {
    throw std::invalid_argument("num_controllers must not exceed the node count");
  }
  if (!(s.gamma >= 0.0)) throw std::invalid_argument("gamma must be >= 0");
  if (!(s.k0 > 0.0)) throw std::invalid_argument("k0 must be positive");
  if (!(s.t0_temperature > 0.0)) throw std::invalid_argument("t0_temperature must be positive");
  if (!(s.alpha > 0.0 && s.alpha < 1.0)) throw std::invalid_argument("alpha must be in (0, 1)");
  if (!(s.horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  if (s.steps < 1) throw std::invalid_argument("steps must be >= 1");
}

inline double time_step(const Scenario& s) {
  return s.horizon / static_cast<double>(s.steps);
}

// Generator configuration. Non-positive k0 / alpha / t0 select documented
// defaults resolved at generation time and written into the scenario:
//   t0    = 8 * dimension  (initial weights within 1e-2 of uniform in the
//           normalized domain)
//   k0    = 0.3 / (N * dt) (placement update contracts by ~30% per step)
//   alpha = (temp_floor / t0)^(1 / (0.7 * steps))  (temperature reaches the
//           floor at 70% of the run)
struct ScenarioGenConfig {
  std::size_t dimension = 2;
  std::size_t num_clusters = 3;
  std::size_t nodes_per_cluster = 20;
  double cluster_spread = 0.5;
  double rayleigh_sigma = 0.5;
  std::size_t num_controllers = 3;
  std::uint64_t seed = 1;
  double horizon = 5.0;
  std::size_t steps = 300;
  double gamma = 0.0;
  double k0 = 0.0;
  double alpha = 0.0;
  double t0 = 0.0;
};

inline void validate(const ScenarioGenConfig& c) {
  if (c.dimension < 1) throw std::invalid_argument("dimension must be >= 1");
  if (c.num_clusters < 1) throw std::invalid_argument("num_clusters must be >= 1");
  if (c.nodes_per_cluster < 1) throw std::invalid_argument("nodes_per_cluster must be >= 1");
  if (c.num_controllers < 1 || c.num_clusters * c.nodes_per_cluster < c.num_controllers) {
    throw std::invalid_argument("need num_clusters * nodes_per_cluster >= num_controllers >= 1");
  }
  if (!(c.cluster_spread > 0.0)) throw std::invalid_argument("cluster_spread must be positive");
  if (!(c.rayleigh_sigma > 0.0)) throw std::invalid_argument("rayleigh_sigma must be positive");
  if (!(c.horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  if (c.steps < 1) throw std::invalid_argument("steps must be >= 1");
  if (!(c.gamma >= 0.0)) throw std::invalid_argument("gamma must be >= 0");
  if (c.alpha >= 1.0) throw std::invalid_argument("alpha must be in (0, 1)");
}

// Sample moving-cluster node motions: Gaussian start clusters paired with
// equal-sized Gaussian destination clusters, each start point assigned to a
// random point of the paired destination cluster, rates Rayleigh-distributed.
// All coordinates are normalized into [-1, 1]^d by the bounding box of every
// start and end position. Deterministic given the seed.
inline Scenario generate_scenario(const ScenarioGenConfig& config) {
  validate(config);
  SplitMix64 rng(config.seed);
  const std::size_t d = config.dimension;
  const std::size_t nc = config.num_clusters;
  const std::size_t per = config.nodes_per_cluster;

  auto sample_centers = [&](std::size_t count) {
    std::vector<Vec> centers(count, Vec(d));
    for (Vec& c : centers) {
      for (double& v : c) v = rng.next_uniform(-5.0, 5.0);
    }
    return centers;
  };
  auto sample_spreads = [&](std::size_t count) {
    std::vector<double> s(count);
    for (double& v : s) v = config.cluster_spread * (0.5 + rng.next_uniform());
    return s;
  };
  const std::vector<Vec> start_centers = sample_centers(nc);
  const std::vector<double> start_spreads = sample_spreads(nc);
  const std::vector<Vec> end_centers = sample_centers(nc);
  const std::vector<double> end_spreads = sample_spreads(nc);

  // Pair each starting cluster with a destination cluster.
  std::vector<std::size_t> pairing(nc);
  std::iota(pairing.begin(), pairing.end(), std::size_t{0});
  for (std::size_t i = nc; i > 1; --i) {
    const std::size_t j = rng.next_u64() % i;
    std::swap(pairing[i - 1], pairing[j]);
  }

  auto sample_cluster = [&](const Vec& center, double spread) {
    std::vector<Vec> pts(per, Vec(d));
    for (Vec& p : pts) {
      for (std::size_t k = 0; k < d; ++k) p[k] = center[k] + spread * rng.next_gaussian();
    }
    return pts;
  };

  std::vector<std::vector<Vec>> end_points(nc);
  for (std::size_t c = 0; c < nc; ++c) {
    end_points[c] = sample_cluster(end_centers[c], end_spreads[c]);
  }

  Scenario scenario;
  scenario.mobility.dimension = d;
  for (std::size_t c = 0; c < nc; ++c) {
    std::vector<Vec> starts = sample_cluster(start_centers[c], start_spreads[c]);
    // Random bijection from start points to the paired destination points.
    std::vector<std::size_t> order(per);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = per; i > 1; --i) {
      const std::size_t j = rng.next_u64() % i;
      std::swap(order[i - 1], order[j]);
    }
    for (std::size_t i = 0; i < per; ++i) {
      NodeMotion n;
      n.start = std::move(starts[i]);
      n.end = end_points[pairing[c]][order[i]];
      n.rate = rng.next_rayleigh(config.rayleigh_sigma);
      scenario.mobility.nodes.push_back(std::move(n));
    }
  }

  std::vector<Vec> all;
  all.reserve(2 * scenario.mobility.nodes.size());
  for (const NodeMotion& n : scenario.mobility.nodes) {
    all.push_back(n.start);
    all.push_back(n.end);
  }
  const DomainBox box = fit_domain(all);
  for (NodeMotion& n : scenario.mobility.nodes) {
    n.start = normalize(box, n.start);
    n.end = normalize(box, n.end);
  }

  scenario.num_controllers = config.num_controllers;
  scenario.gamma = config.gamma;
  scenario.horizon = config.horizon;
  scenario.steps = config.steps;
  scenario.seed = config.seed;
  scenario.t0_temperature =
      config.t0 > 0.0 ? config.t0 : 8.0 * static_cast<double>(d);
  const double dt = scenario.horizon / static_cast<double>(scenario.steps);
  scenario.k0 = config.k0 > 0.0
                    ? config.k0
                    : 0.3 / (static_cast<double>(scenario.mobility.num_nodes()) * dt);
  scenario.alpha =
      config.alpha > 0.0
          ? config.alpha
          : std::exp(std::log(kDefaultTempFloor / scenario.t0_temperature) /
                     (0.7 * static_cast<double>(scenario.steps)));
  validate(scenario);
  return scenario;
}

}  // namespace rcp
