#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "rcp/clustering.hpp"
#include "rcp/vec.hpp"

namespace rcp {

// Minimum-cost perfect assignment on a square cost matrix (Hungarian
// algorithm with potentials, O(n^3)). Returns for each row the column it is
// assigned to.
inline std::vector<std::size_t> min_cost_assignment(const std::vector<double>& cost,
                                                    std::size_t n) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> row_to_col(n);
  for (std::size_t j = 1; j <= n; ++j) {
    if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
  }
  return row_to_col;
}

// Average Euclidean distance between two controller sets under the optimal
// label matching. Controllers carry no canonical order across solvers, so an
// unmatched comparison would penalize pure relabelings.
inline double tracking_error(const std::vector<Vec>& placed, const std::vector<Vec>& reference) {
  if (placed.size() != reference.size()) {
    throw std::invalid_argument("tracking_error: controller counts differ");
  }
  const std::size_t m = placed.size();
  if (m == 0) return 0.0;
  std::vector<double> cost(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      cost[i * m + j] = std::sqrt(dist_sq(placed[i], reference[j]));
    }
  }
  const std::vector<std::size_t> match = min_cost_assignment(cost, m);
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) total += cost[i * m + match[i]];
  return total / static_cast<double>(m);
}

// Total network delay of a snapshot: every node hard-assigned to its
// minimum-distortion controller, then D1 + gamma*D2 under those assignments.
// This is the T -> 0 limit of the soft objective and is solver-agnostic.
inline double total_delay(const NetworkState& state, double gamma) {
  const std::size_t n = state.num_nodes();
  const std::size_t m = state.num_controllers();
  const std::vector<double> sync = controller_sync_sums(state.controllers);
  std::vector<double> assigned_count(m, 0.0);
  double d1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec& x = state.nodes[i];
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_j = 0;
    for (std::size_t j = 0; j < m; ++j) {
      const double d = dist_sq(x, state.controllers[j]) + gamma * sync[j];
      if (d < best) {
        best = d;
        best_j = j;
      }
    }
    d1 += dist_sq(x, state.controllers[best_j]);
    assigned_count[best_j] += 1.0;
  }
  double d2 = 0.0;
  for (std::size_t j = 0; j < m; ++j) d2 += assigned_count[j] * sync[j];
  return d1 + gamma * d2;
}

}  // namespace rcp
