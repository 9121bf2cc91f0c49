#include "evasion/cost.hpp"

#include <algorithm>
#include <cmath>

namespace evasion {

void CostSpec::validate() const {
  require(!target.empty(), "cost spec: dimension must be >= 1");
  require(all_finite(target), "cost spec: target must be finite");
  require(weights.size() == target.size(), "cost spec: weight/target size mismatch");
  for (double c : weights)
    require(c >= 0.0 && !std::isnan(c), "cost spec: weights must lie in [0, inf]");
  require(exponent > 0.0, "cost spec: exponent must be positive");
}

bool CostSpec::weights_regular() const {
  for (double c : weights)
    if (!(c > 0.0) || !std::isfinite(c)) return false;
  return true;
}

void BoundPair::validate() const {
  require(lower >= 0.0 && upper >= lower, "bound pair: need 0 <= lower <= upper");
  if (mode == OptimalityMode::multiplicative)
    require(lower > 0.0, "bound pair: multiplicative mode needs lower > 0");
}

double evaluate_cost(const Point& x, const CostSpec& spec) {
  require(x.size() == spec.dims(), "evaluate_cost: dimension mismatch");
  require(all_finite(x), "evaluate_cost: non-finite coordinate");
  const double p = spec.exponent;
  if (std::isinf(p)) {
    double m = 0.0;
    for (std::size_t d = 0; d < x.size(); ++d)
      m = std::max(m, spec.weights[d] * std::abs(x[d] - spec.target[d]));
    return m;
  }
  // Factor out the largest deviation so x^p does not overflow.
  double m = 0.0;
  for (std::size_t d = 0; d < x.size(); ++d)
    m = std::max(m, std::abs(x[d] - spec.target[d]));
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (std::size_t d = 0; d < x.size(); ++d)
    s += spec.weights[d] * std::pow(std::abs(x[d] - spec.target[d]) / m, p);
  return m * std::pow(s, 1.0 / p);
}

std::vector<Point> l1_ball_vertices(double radius, const CostSpec& spec) {
  require(radius > 0.0 && std::isfinite(radius), "l1_ball_vertices: radius must be positive");
  require(spec.exponent == 1.0, "l1_ball_vertices: requires p = 1");
  require(spec.weights_regular(), "l1_ball_vertices: weights must be finite and positive");
  std::vector<Point> out;
  out.reserve(2 * spec.dims());
  for (std::size_t d = 0; d < spec.dims(); ++d) {
    const double step = radius / spec.weights[d];
    Point plus = spec.target;
    plus[d] += step;
    out.push_back(std::move(plus));
    Point minus = spec.target;
    minus[d] -= step;
    out.push_back(std::move(minus));
  }
  return out;
}

int steps_for_gap(const BoundPair& bounds, double accuracy) {
  bounds.validate();
  require(accuracy > 0.0, "steps_for_gap: accuracy must be positive");
  double raw;
  if (bounds.mode == OptimalityMode::multiplicative) {
    const double gap = bounds.upper / bounds.lower;
    if (gap <= 1.0 + accuracy) return 0;
    raw = std::log2(std::log2(gap) / std::log2(1.0 + accuracy));
  } else {
    const double gap = bounds.upper - bounds.lower;
    if (gap <= accuracy) return 0;
    raw = std::log2(gap / accuracy);
  }
  return std::max(0, static_cast<int>(std::ceil(raw - kCostTol)));
}

Halfspace subgradient_halfspace(const Point& y, const CostSpec& spec) {
  require(y.size() == spec.dims(), "subgradient: dimension mismatch");
  require(spec.exponent >= 1.0, "subgradient: requires p >= 1");
  require(spec.weights_regular(), "subgradient: weights must be finite and positive");
  const double cost = evaluate_cost(y, spec);
  if (cost <= 0.0)
    throw DegenerateSubgradientError("subgradient undefined at the target point");

  const double p = spec.exponent;
  Vector h(spec.dims(), 0.0);
  for (std::size_t d = 0; d < spec.dims(); ++d) {
    const double delta = y[d] - spec.target[d];
    const double sgn = delta > 0.0 ? 1.0 : (delta < 0.0 ? -1.0 : 0.0);
    if (p == 1.0) {
      h[d] = spec.weights[d] * sgn;
    } else if (std::isinf(p)) {
      // All coordinates attaining the max contribute (full subdifferential face).
      const bool attains = spec.weights[d] * std::abs(delta) >= cost - cost_tol(cost);
      h[d] = attains ? spec.weights[d] * sgn : 0.0;
    } else {
      h[d] = spec.weights[d] * sgn * std::pow(std::abs(delta) / cost, p - 1.0);
    }
  }
  return Halfspace{h, dot(h, y)};
}

double halfspace_lp_mac(const Vector& w, const Point& b, const CostSpec& spec) {
  require(w.size() == spec.dims() && b.size() == spec.dims(),
          "halfspace_lp_mac: dimension mismatch");
  require(spec.exponent >= 1.0, "halfspace_lp_mac: requires p >= 1");
  require(spec.weights_regular(), "halfspace_lp_mac: weights must be finite and positive");
  double norm_w = 0.0;
  for (double wd : w) norm_w += std::abs(wd);
  require(norm_w > 0.0, "halfspace_lp_mac: normal must be nonzero");

  double displacement = 0.0;
  for (std::size_t d = 0; d < spec.dims(); ++d)
    displacement += (b[d] - spec.target[d]) * w[d];
  if (displacement <= 0.0) return 0.0;

  const double p = spec.exponent;
  // Rescale coordinates so the weighted cost becomes an unweighted Lp norm;
  // the transformed normal picks up the inverse factor.
  Vector wt(spec.dims());
  double dual_norm;
  if (std::isinf(p)) {
    for (std::size_t d = 0; d < spec.dims(); ++d) wt[d] = w[d] / spec.weights[d];
    dual_norm = 0.0;
    for (double v : wt) dual_norm += std::abs(v);
  } else if (p == 1.0) {
    for (std::size_t d = 0; d < spec.dims(); ++d) wt[d] = w[d] / spec.weights[d];
    dual_norm = 0.0;
    for (double v : wt) dual_norm = std::max(dual_norm, std::abs(v));
  } else {
    const double q = p / (p - 1.0);
    for (std::size_t d = 0; d < spec.dims(); ++d)
      wt[d] = w[d] * std::pow(spec.weights[d], -1.0 / p);
    double s = 0.0;
    for (double v : wt) s += std::pow(std::abs(v), q);
    dual_norm = std::pow(s, 1.0 / q);
  }
  return displacement / dual_norm;
}

double enclosed_lp_radius(int dims, double exponent) {
  require(dims >= 1, "enclosed_lp_radius: dims must be >= 1");
  require(exponent >= 1.0, "enclosed_lp_radius: requires p >= 1");
  if (exponent == 1.0) return 1.0;
  if (std::isinf(exponent)) return 1.0 / dims;
  return std::pow(static_cast<double>(dims), (1.0 - exponent) / exponent);
}

double binary_entropy(double delta) {
  if (delta <= 0.0 || delta >= 1.0) return 0.0;
  return -delta * std::log2(delta) - (1.0 - delta) * std::log2(1.0 - delta);
}

double hypercube_covering_bound(int dims, double delta) {
  require(dims >= 1, "hypercube_covering_bound: dims must be >= 1");
  require(delta > 0.0 && delta < 0.5, "hypercube_covering_bound: delta in (0, 1/2)");
  return std::exp2(dims * (1.0 - binary_entropy(delta)));
}

double cap_covering_bound(int dims, double phi) {
  require(dims >= 2, "cap_covering_bound: dims must be >= 2");
  require(phi > 0.0 && phi <= std::acos(-1.0) / 2.0, "cap_covering_bound: phi in (0, pi/2]");
  return std::pow(1.0 / std::sin(phi), dims - 2);
}

double l2_query_lower_bound(int dims, double epsilon) {
  require(dims >= 2, "l2_query_lower_bound: dims must be >= 2");
  require(epsilon > 0.0, "l2_query_lower_bound: epsilon must be positive");
  const double a = (1.0 + epsilon) * (1.0 + epsilon);
  return std::pow(a / (a - 1.0), (dims - 2) / 2.0);
}

double lp_query_lower_bound(int dims, double exponent, double epsilon) {
  require(dims >= 1, "lp_query_lower_bound: dims must be >= 1");
  require(exponent > 1.0, "lp_query_lower_bound: requires p > 1");
  double delta;
  if (std::isinf(exponent)) {
    require(epsilon > 0.0 && epsilon < 1.0, "lp_query_lower_bound: eps in (0, 1) for p = inf");
    delta = epsilon / (1.0 + epsilon);
  } else {
    const double limit = std::exp2((exponent - 1.0) / exponent) - 1.0;
    require(epsilon > 0.0 && epsilon < limit,
            "lp_query_lower_bound: eps outside the validity range for this p");
    const double g = std::pow(1.0 + epsilon, exponent / (exponent - 1.0));
    delta = (g - 1.0) / g;
  }
  const double alpha = std::exp2(1.0 - binary_entropy(delta));
  return std::pow(alpha, dims);
}

}  // namespace evasion
