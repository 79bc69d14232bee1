#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <utility>

#include "rcp/mobility.hpp"
#include "rcp/vec.hpp"

// Static maximum-entropy clustering core. Nodes associate with controllers
// through Gibbs weights p(y_j|x_i) ~ exp(-d(x_i,y_j)/T); the distortion is
// the squared node-to-controller distance plus a gamma-weighted sum of
// squared controller-to-controller distances. Placements that are optimal
// for the free energy F = D1 + gamma*D2 - T*H solve the linear system
// Theta y = c with c the posterior-weighted node means.

namespace rcp {

// Floor applied to cluster masses; zero-mass clusters are not allowed.
inline constexpr double kMassFloor = 1e-12;

// Row-stochastic N x M association weights p(y_j | x_i), row-major.
struct AssociationMatrix {
  std::size_t num_nodes = 0;
  std::size_t num_controllers = 0;
  std::vector<double> w;

  double operator()(std::size_t i, std::size_t j) const { return w[i * num_controllers + j]; }
  double& operator()(std::size_t i, std::size_t j) { return w[i * num_controllers + j]; }
};

// Column-stochastic N x M posterior weights p(x_i | y_j), row-major.
struct PosteriorMatrix {
  std::size_t num_nodes = 0;
  std::size_t num_controllers = 0;
  std::vector<double> w;

  double operator()(std::size_t i, std::size_t j) const { return w[i * num_controllers + j]; }
  double& operator()(std::size_t i, std::size_t j) { return w[i * num_controllers + j]; }
};

// Cluster masses p(y_j); positive, sum to 1.
struct ClusterMasses {
  std::vector<double> masses;
};

// Cost terms of one snapshot: F = delay + gamma*sync - temperature*entropy.
struct CostBreakdown {
  double delay = 0.0;        // D1
  double sync = 0.0;         // D2
  double entropy = 0.0;      // H
  double free_energy = 0.0;  // F
  double temperature = 0.0;
  double gamma = 0.0;
};

// Sum over j' of squared distance from controllers[j] to every controller.
// Shared term of the distortion; depends only on j.
inline std::vector<double> controller_sync_sums(const std::vector<Vec>& controllers) {
  const std::size_t m = controllers.size();
  std::vector<double> s(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t jp = j + 1; jp < m; ++jp) {
      const double d = dist_sq(controllers[j], controllers[jp]);
      s[j] += d;
      s[jp] += d;
    }
  }
  return s;
}

// d(x_i, y_j) = |x_i - y_j|^2 + gamma * sum_j' |y_j - y_j'|^2.
inline double distortion(const Vec& node, const Vec& controller,
                         const std::vector<Vec>& controllers, double gamma) {
  double sync = 0.0;
  for (const Vec& other : controllers) sync += dist_sq(controller, other);
  return dist_sq(node, controller) + gamma * sync;
}

// Gibbs association weights at temperature T. Each row is computed in the
// log domain with a max shift, so the partition function never underflows
// to zero no matter how small T is.
inline AssociationMatrix gibbs_associations(const NetworkState& state, double temperature,
                                            double gamma) {
  if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be positive");
  const std::size_t n = state.num_nodes();
  const std::size_t m = state.num_controllers();
  AssociationMatrix assoc{n, m, std::vector<double>(n * m)};
  const std::vector<double> sync = controller_sync_sums(state.controllers);
  std::vector<double> d(m);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec& x = state.nodes[i];
    double dmin = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) {
      d[j] = dist_sq(x, state.controllers[j]) + gamma * sync[j];
      dmin = std::min(dmin, d[j]);
    }
    if (!std::isfinite(dmin)) throw numeric_error("non-finite distortion");
    double z = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double wj = std::exp(-(d[j] - dmin) / temperature);
      assoc(i, j) = wj;
      z += wj;
    }
    for (std::size_t j = 0; j < m; ++j) assoc(i, j) /= z;
  }
  return assoc;
}

// Bayes step with uniform node prior p(x_i) = 1/N:
//   masses[j]    = (1/N) sum_i assoc(i,j), floored at kMassFloor, renormalized
//   posterior(i,j) = assoc(i,j) * (1/N) / masses[j]
// A column whose raw mass falls below the floor carries no information about
// its cluster; its posterior column is set uniform to stay column-stochastic.
inline std::pair<PosteriorMatrix, ClusterMasses> posteriors_and_masses(
    const AssociationMatrix& assoc) {
  const std::size_t n = assoc.num_nodes;
  const std::size_t m = assoc.num_controllers;
  ClusterMasses masses{std::vector<double>(m, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) masses.masses[j] += assoc(i, j);
  }
  std::vector<bool> degenerate(m, false);
  double total = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    masses.masses[j] /= static_cast<double>(n);
    if (masses.masses[j] < kMassFloor) {
      degenerate[j] = true;
      masses.masses[j] = kMassFloor;
    }
    total += masses.masses[j];
  }
  for (double& mj : masses.masses) mj /= total;

  PosteriorMatrix post{n, m, std::vector<double>(n * m)};
  const double prior = 1.0 / static_cast<double>(n);
  for (std::size_t j = 0; j < m; ++j) {
    if (degenerate[j]) {
      for (std::size_t i = 0; i < n; ++i) post(i, j) = prior;
    } else {
      for (std::size_t i = 0; i < n; ++i) post(i, j) = assoc(i, j) * prior / masses.masses[j];
    }
  }
  return {std::move(post), std::move(masses)};
}

// Theta is the M-block coupling matrix with diagonal blocks
// (gamma*(M-1) + 1) I and off-diagonal blocks -gamma I. It is applied and
// inverted in closed form, never materialized: its eigenvalues are 1 on the
// all-ones block direction and 1 + gamma*M orthogonal to it.
inline std::vector<Vec> theta_apply(const std::vector<Vec>& y, double gamma) {
  const std::size_t m = y.size();
  if (m == 0) return {};
  const std::size_t d = y.front().size();
  const double eta = gamma * (static_cast<double>(m) - 1.0) + 1.0;
  Vec total(d, 0.0);
  for (const Vec& yj : y) add_scaled(total, yj, 1.0);
  std::vector<Vec> out(m, Vec(d));
  for (std::size_t j = 0; j < m; ++j) {
    // eta*y_j - gamma*(total - y_j) = (eta + gamma)*y_j - gamma*total
    for (std::size_t k = 0; k < d; ++k) {
      out[j][k] = (eta + gamma) * y[j][k] - gamma * total[k];
    }
  }
  return out;
}

// Solve Theta y = c:  y_j = (c_j + gamma * sum_j' c_j') / (1 + gamma*M).
inline std::vector<Vec> theta_solve(const std::vector<Vec>& c, double gamma) {
  const std::size_t m = c.size();
  if (m == 0) return {};
  const std::size_t d = c.front().size();
  Vec total(d, 0.0);
  for (const Vec& cj : c) add_scaled(total, cj, 1.0);
  const double denom = 1.0 + gamma * static_cast<double>(m);
  std::vector<Vec> y(m, Vec(d));
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = 0; k < d; ++k) {
      y[j][k] = (c[j][k] + gamma * total[k]) / denom;
    }
  }
  return y;
}

// Posterior-weighted node means, one per controller.
inline std::vector<Vec> posterior_means(const NetworkState& state, const PosteriorMatrix& post) {
  const std::size_t n = state.num_nodes();
  const std::size_t m = state.num_controllers();
  const std::size_t d = state.dimension();
  std::vector<Vec> c(m, Vec(d, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    const Vec& x = state.nodes[i];
    for (std::size_t j = 0; j < m; ++j) add_scaled(c[j], x, post(i, j));
  }
  return c;
}

// Placement that is stationary for the free energy at the given weights:
// solves Theta y = c with c the posterior-weighted node means.
inline std::vector<Vec> optimal_centroids(const NetworkState& state,
                                          const AssociationMatrix& assoc, double gamma) {
  const auto [post, masses] = posteriors_and_masses(assoc);
  (void)masses;
  return theta_solve(posterior_means(state, post), gamma);
}

// Evaluate the cost terms at the given weights:
//   D1 = sum_ij p(y_j|x_i) |x_i - y_j|^2
//   D2 = sum_jj' |y_j - y_j'|^2 * sum_i p(y_j|x_i)
//   H  = -sum_ij p log p        (0 log 0 = 0)
//   F  = D1 + gamma*D2 - T*H
inline CostBreakdown free_energy(const NetworkState& state, const AssociationMatrix& assoc,
                                 double temperature, double gamma) {
  if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be positive");
  const std::size_t n = state.num_nodes();
  const std::size_t m = state.num_controllers();
  CostBreakdown cost;
  cost.temperature = temperature;
  cost.gamma = gamma;
  std::vector<double> colsum(m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec& x = state.nodes[i];
    for (std::size_t j = 0; j < m; ++j) {
      const double p = assoc(i, j);
      cost.delay += p * dist_sq(x, state.controllers[j]);
      if (p > 0.0) cost.entropy -= p * std::log(p);
      colsum[j] += p;
    }
  }
  const std::vector<double> sync = controller_sync_sums(state.controllers);
  for (std::size_t j = 0; j < m; ++j) cost.sync += colsum[j] * sync[j];
  cost.free_energy = cost.delay + gamma * cost.sync - temperature * cost.entropy;
  return cost;
}

}  // namespace rcp
