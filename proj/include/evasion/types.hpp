#ifndef EVASION_TYPES_HPP
#define EVASION_TYPES_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace evasion {

using Point = std::vector<double>;
using Vector = std::vector<double>;

/// Absolute comparison tolerance at unit scale; scaled by max(1, C) for
/// cost-level comparisons so binary search does not oscillate on rounding noise.
inline constexpr double kCostTol = 1e-12;

inline double cost_tol(double scale) { return kCostTol * std::max(1.0, std::abs(scale)); }

struct DegenerateSubgradientError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateBodyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InconsistentOracleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SearchExhaustedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParameterRangeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline double dot(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Point axpy(const Point& x, double alpha, const Vector& v) {
  Point out = x;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += alpha * v[i];
  return out;
}

inline bool all_finite(const Point& x) {
  for (double v : x)
    if (!std::isfinite(v)) return false;
  return true;
}

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace evasion

#endif
