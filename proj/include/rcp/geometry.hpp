#pragma once

#include <algorithm>
#include <stdexcept>

#include "rcp/vec.hpp"

namespace rcp {

// Floor on the box half extent so degenerate point sets still normalize.
inline constexpr double kBoxEpsilon = 1e-9;

// Axis-aligned scaling box: maps points into [-1, 1]^d via
// (p - center) / half_extent. half_extent is the largest per-coordinate
// half width of the fitted bounding box, so the map is a similarity
// (one scale for all axes) and never singular.
struct DomainBox {
  Vec center;
  double half_extent = kBoxEpsilon;
};

inline DomainBox fit_domain(const std::vector<Vec>& points) {
  if (points.empty()) throw std::invalid_argument("empty point set");
  const std::size_t d = points.front().size();
  Vec lo = points.front();
  Vec hi = points.front();
  for (const Vec& p : points) {
    if (p.size() != d) throw std::invalid_argument("mixed point dimensions");
    require_finite(p, "fit_domain input");
    for (std::size_t k = 0; k < d; ++k) {
      lo[k] = std::min(lo[k], p[k]);
      hi[k] = std::max(hi[k], p[k]);
    }
  }
  DomainBox box;
  box.center.resize(d);
  double half = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    box.center[k] = 0.5 * (lo[k] + hi[k]);
    half = std::max(half, 0.5 * (hi[k] - lo[k]));
  }
  box.half_extent = std::max(half, kBoxEpsilon);
  return box;
}

inline Vec normalize(const DomainBox& box, const Vec& p) {
  Vec r(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    r[k] = (p[k] - box.center[k]) / box.half_extent;
  }
  return r;
}

inline Vec denormalize(const DomainBox& box, const Vec& p) {
  Vec r(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    r[k] = p[k] * box.half_extent + box.center[k];
  }
  return r;
}

}  // namespace rcp
