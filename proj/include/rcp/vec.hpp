#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace rcp {

// A point or velocity in R^d. Dimension is a runtime parameter (default 2).
using Vec = std::vector<double>;

// Thrown when a run produces a non-finite value. Runs fail fast on NaN/inf;
// the CLI maps this to exit code 3.
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

inline bool is_finite(const Vec& v) {
  for (double c : v) {
    if (!std::isfinite(c)) return false;
  }
  return true;
}

inline void require_finite(const Vec& v, const char* what) {
  if (!is_finite(v)) throw numeric_error(std::string("non-finite value in ") + what);
}

inline Vec add(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Vec sub(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Vec scale(const Vec& a, double s) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
  return r;
}

inline void add_scaled(Vec& acc, const Vec& a, double s) {
  for (std::size_t i = 0; i < a.size(); ++i) acc[i] += a[i] * s;
}

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Squared Euclidean distance.
inline double dist_sq(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

inline double norm_sq(const Vec& a) { return dot(a, a); }

inline double norm(const Vec& a) { return std::sqrt(norm_sq(a)); }

}  // namespace rcp
