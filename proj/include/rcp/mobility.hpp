#pragma once

#include <cstddef>
#include <stdexcept>

#include "rcp/vec.hpp"

namespace rcp {

// Network snapshot: N node positions and M controller positions at time t.
struct NetworkState {
  double t = 0.0;
  std::vector<Vec> nodes;
  std::vector<Vec> controllers;

  std::size_t num_nodes() const { return nodes.size(); }
  std::size_t num_controllers() const { return controllers.size(); }
  std::size_t dimension() const { return nodes.empty() ? 0 : nodes.front().size(); }
};

// One node's motion: exponential approach from start to end with rate k,
//   x(t) = (start - end) * exp(-k t) + end.
// The trajectory is closed form; positions and velocities are exact at any t.
struct NodeMotion {
  Vec start;
  Vec end;
  double rate = 1.0;
};

struct MobilitySpec {
  std::size_t dimension = 2;
  std::vector<NodeMotion> nodes;

  std::size_t num_nodes() const { return nodes.size(); }
};

inline void validate(const MobilitySpec& spec) {
  if (spec.dimension < 1) throw std::invalid_argument("dimension must be >= 1");
  if (spec.nodes.empty()) throw std::invalid_argument("mobility spec has no nodes");
  for (const NodeMotion& n : spec.nodes) {
    if (n.start.size() != spec.dimension || n.end.size() != spec.dimension) {
      throw std::invalid_argument("node start/end dimension mismatch");
    }
    require_finite(n.start, "node start");
    require_finite(n.end, "node end");
    if (!(n.rate > 0.0)) throw std::invalid_argument("node rate must be positive");
  }
}

inline Vec node_position(const NodeMotion& n, double t) {
  const double decay = std::exp(-n.rate * t);
  Vec p(n.start.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    p[k] = (n.start[k] - n.end[k]) * decay + n.end[k];
  }
  return p;
}

inline std::vector<Vec> node_positions(const MobilitySpec& spec, double t) {
  std::vector<Vec> out;
  out.reserve(spec.nodes.size());
  for (const NodeMotion& n : spec.nodes) out.push_back(node_position(n, t));
  return out;
}

// Analytic derivative of the closed form: phi_i(t) = -k_i (x_i(t) - end_i).
inline std::vector<Vec> node_velocities(const MobilitySpec& spec, double t) {
  std::vector<Vec> out;
  out.reserve(spec.nodes.size());
  for (const NodeMotion& n : spec.nodes) {
    const double decay = std::exp(-n.rate * t);
    Vec v(n.start.size());
    for (std::size_t k = 0; k < v.size(); ++k) {
      v[k] = -n.rate * (n.start[k] - n.end[k]) * decay;
    }
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace rcp
