#ifndef TESTS_SUPPORT_HPP
#define TESTS_SUPPORT_HPP

#include <cmath>
#include <random>

#include "evasion/cost.hpp"
#include "evasion/oracle.hpp"

namespace test_support {

using namespace evasion;

/// Independent minimal-cost oracle for a halfspace at D = 2: the infimum over
/// {x : x.w >= b.w} is attained on the boundary line when the target lies
/// strictly inside the positive side, so parameterize the line and ternary
/// search the (convex) cost along it. Shares no code with halfspace_lp_mac.
inline double numeric_halfspace_mac_2d(const Vector& w, const Point& b, const CostSpec& spec) {
  const Vector u = {-w[1], w[0]};
  auto cost_at = [&](double t) {
    Point x = {b[0] + t * u[0], b[1] + t * u[1]};
    return evaluate_cost(x, spec);
  };
  // Bracket the minimizer by expanding until the cost grows on both sides.
  double lo = -1.0, hi = 1.0;
  while (cost_at(lo) < cost_at(lo + 1e-3)) lo *= 2.0;
  while (cost_at(hi) < cost_at(hi - 1e-3)) hi *= 2.0;
  for (int it = 0; it < 300; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (cost_at(m1) <= cost_at(m2))
      hi = m2;
    else
      lo = m1;
  }
  return cost_at(0.5 * (lo + hi));
}

inline Vector random_unit(std::mt19937_64& rng, std::size_t dims) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (;;) {
    Vector w(dims);
    for (double& c : w) c = gauss(rng);
    const double n = std::sqrt(dot(w, w));
    if (n > 1e-9) {
      for (double& c : w) c /= n;
      return w;
    }
  }
}

inline CostSpec unit_spec(std::size_t dims, double exponent = 1.0) {
  return CostSpec{Point(dims, 0.0), Vector(dims, 1.0), exponent};
}

/// Random halfspace whose boundary sits at displacement in [1, 3] from the
/// origin target along a random unit normal.
inline HalfspaceClassifier random_halfspace(std::mt19937_64& rng, std::size_t dims) {
  Vector w = random_unit(rng, dims);
  std::uniform_real_distribution<double> disp(1.0, 3.0);
  const double d = disp(rng);
  Point b(dims);
  for (std::size_t i = 0; i < dims; ++i) b[i] = d * w[i];
  return HalfspaceClassifier{std::move(w), std::move(b)};
}

}  // namespace test_support

#endif
