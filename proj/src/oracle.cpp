#include "evasion/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace evasion {

namespace {

int classify_halfspace(const HalfspaceClassifier& c, const Point& x) {
  return dot(c.normal, x) >= dot(c.normal, c.boundary_point) ? kNegative : kPositive;
}

int classify_ball(const OpenCostBallClassifier& c, const Point& x) {
  return evaluate_cost(x, c.spec) < c.threshold ? kPositive : kNegative;
}

int classify_polytope(const PolytopeClassifier& c, const Point& x) {
  for (const Halfspace& f : c.faces)
    if (dot(f.normal, x) >= f.offset) return kNegative;
  return kPositive;
}

int classify_convex_negative(const ConvexNegativeClassifier& c, const Point& x) {
  for (const Halfspace& f : c.faces)
    if (!f.contains(x)) return kPositive;
  return kNegative;
}

bool same_spec(const CostSpec& a, const CostSpec& b) {
  if (a.dims() != b.dims() || a.exponent != b.exponent) return false;
  for (std::size_t d = 0; d < a.dims(); ++d)
    if (a.target[d] != b.target[d] || a.weights[d] != b.weights[d]) return false;
  return true;
}

}  // namespace

int classify(const Classifier& c, const Point& x) {
  require(all_finite(x), "classify: non-finite query point");
  return std::visit(
      [&x](const auto& v) -> int {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, HalfspaceClassifier>)
          return classify_halfspace(v, x);
        else if constexpr (std::is_same_v<T, OpenCostBallClassifier>)
          return classify_ball(v, x);
        else if constexpr (std::is_same_v<T, PolytopeClassifier>)
          return classify_polytope(v, x);
        else
          return classify_convex_negative(v, x);
      },
      c);
}

bool positive_set_convex(const Classifier& c) {
  return !std::holds_alternative<ConvexNegativeClassifier>(c);
}

int MembershipOracle::query(const Point& x) {
  if (memoize_) {
    auto it = memo_.find(x);
    if (it != memo_.end()) return it->second;
  }
  const int label = classify(classifier_, x);
  ledger_.record(x, label);
  if (memoize_) memo_.emplace(x, label);
  return label;
}

std::optional<double> analytic_mac(const Classifier& c, const CostSpec& spec) {
  if (const auto* h = std::get_if<HalfspaceClassifier>(&c))
    return halfspace_lp_mac(h->normal, h->boundary_point, spec);
  if (const auto* b = std::get_if<OpenCostBallClassifier>(&c)) {
    if (!same_spec(b->spec, spec)) return std::nullopt;
    return b->threshold;
  }
  if (const auto* p = std::get_if<PolytopeClassifier>(&c)) {
    // The negative set is a union over faces; the cheapest face wins.
    double best = kInf;
    for (const Halfspace& f : p->faces) {
      Point boundary = spec.target;
      const double nn = dot(f.normal, f.normal);
      require(nn > 0.0, "analytic_mac: degenerate polytope face");
      const double shift = (f.offset - dot(f.normal, spec.target)) / nn;
      for (std::size_t d = 0; d < boundary.size(); ++d) boundary[d] += shift * f.normal[d];
      best = std::min(best, halfspace_lp_mac(f.normal, boundary, spec));
    }
    return best;
  }
  return std::nullopt;
}

MacInterval brute_force_mac(const Classifier& c, const CostSpec& spec, double resolution,
                            const Point& box_lo, const Point& box_hi) {
  const std::size_t dims = spec.dims();
  require(dims <= 3, "brute_force_mac: only supported for D <= 3");
  require(resolution > 0.0, "brute_force_mac: resolution must be positive");
  require(box_lo.size() == dims && box_hi.size() == dims, "brute_force_mac: box mismatch");

  std::vector<std::size_t> counts(dims);
  for (std::size_t d = 0; d < dims; ++d) {
    require(box_hi[d] > box_lo[d], "brute_force_mac: empty box");
    counts[d] = static_cast<std::size_t>(std::floor((box_hi[d] - box_lo[d]) / resolution)) + 1;
  }

  double best = kInf;
  Point x(dims);
  std::vector<std::size_t> idx(dims, 0);
  for (;;) {
    for (std::size_t d = 0; d < dims; ++d) x[d] = box_lo[d] + idx[d] * resolution;
    if (classify(c, x) == kNegative) best = std::min(best, evaluate_cost(x, spec));
    std::size_t d = 0;
    while (d < dims && ++idx[d] == counts[d]) idx[d++] = 0;
    if (d == dims) break;
  }
  if (!std::isfinite(best))
    throw SearchExhaustedError("brute_force_mac: no negative point in the box");

  // Lipschitz slack for one grid cell in the sup norm.
  double lip;
  if (std::isinf(spec.exponent)) {
    lip = *std::max_element(spec.weights.begin(), spec.weights.end());
  } else {
    double s = 0.0;
    for (double w : spec.weights) s += w;
    lip = std::pow(s, 1.0 / spec.exponent);
  }
  return MacInterval{std::max(0.0, best - 2.0 * resolution * lip), best};
}

MaliciousOracle::MaliciousOracle(CostSpec spec, double lower0, double upper0)
    : spec_(std::move(spec)), bounds_{lower0, upper0, OptimalityMode::multiplicative} {
  require(lower0 > 0.0 && lower0 < upper0, "malicious oracle: need 0 < lower < upper");
}

int MaliciousOracle::query(const Point& x) {
  const double cost = evaluate_cost(x, spec_);
  const double threshold = std::exp((std::log(bounds_.lower) + std::log(bounds_.upper)) / 2.0);
  int label;
  if (cost <= threshold) {
    label = kPositive;
    bounds_.lower = std::max(bounds_.lower, cost);
  } else {
    label = kNegative;
    bounds_.upper = std::min(bounds_.upper, cost);
  }
  ledger_.record(x, label);
  return label;
}

}  // namespace evasion
