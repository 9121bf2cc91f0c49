#ifndef EVASION_COST_HPP
#define EVASION_COST_HPP

#include <limits>
#include <optional>
#include <vector>

#include "evasion/types.hpp"

namespace evasion {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Weighted Lp cost anchored at an adversarial target point: parameters for
///   A(x) = (sum_d c_d |x_d - t_d|^p)^(1/p),   p in (0, inf].
struct CostSpec {
  Point target;     ///< the point whose neighborhood the adversary wants to reach
  Vector weights;   ///< per-feature cost weights c_d, each in [0, inf]
  double exponent = 1.0;

  std::size_t dims() const { return target.size(); }

  /// Structural invariants only; operations declare which weight values they accept.
  void validate() const;

  /// True when every weight is finite and strictly positive.
  bool weights_regular() const;
};

/// Sublevel set {x : A(x) <= radius} of a cost spec.
struct CostBall {
  CostSpec spec;
  double radius;
};

/// {x : normal . x <= offset}. Cuts and separating hyperplanes both use this
/// orientation; classifier code documents its own sign convention.
struct Halfspace {
  Vector normal;
  double offset = 0.0;

  bool contains(const Point& x) const { return dot(normal, x) <= offset; }
  double slack(const Point& x) const { return offset - dot(normal, x); }
};

enum class OptimalityMode { multiplicative, additive };

/// Certified bracket on the minimal adversarial cost: every point with cost
/// <= lower is known positive, and a negative witness of cost upper is known.
struct BoundPair {
  double lower = 0.0;
  double upper = 0.0;
  OptimalityMode mode = OptimalityMode::multiplicative;

  double gap() const {
    return mode == OptimalityMode::multiplicative ? upper / lower : upper - lower;
  }
  void validate() const;
};

double evaluate_cost(const Point& x, const CostSpec& spec);

/// The 2D axis-aligned vertices target +- (C/c_d) e_d of the weighted L1 ball,
/// ordered +1, -1, +2, -2, ...
std::vector<Point> l1_ball_vertices(double radius, const CostSpec& spec);

/// Number of binary-search steps needed to close the bracket to the requested
/// accuracy (epsilon for multiplicative mode, eta for additive), clamped at 0.
int steps_for_gap(const BoundPair& bounds, double accuracy);

/// Supporting halfspace of the sublevel set {x : A(x) <= A(y)} at y, oriented
/// so that A(x) <= A(y) implies normal . x <= offset. Requires p >= 1.
Halfspace subgradient_halfspace(const Point& y, const CostSpec& spec);

/// Exact minimal cost over the halfspace {x : x.w >= b.w}. Weighted costs are
/// reduced to the unweighted case by coordinate rescaling. Supports p >= 1.
double halfspace_lp_mac(const Vector& w, const Point& b, const CostSpec& spec);

/// Radius of the largest Lp ball contained in the unit L1 ball.
double enclosed_lp_radius(int dims, double exponent);

/// Minimum size of a Hamming-delta covering of the D-dimensional hypercube
/// graph: 2^(D (1 - H(delta))) for delta in (0, 1/2).
double hypercube_covering_bound(int dims, double delta);

/// Minimum number of spherical caps of half-angle phi covering a
/// D-dimensional hypersphere: (1/sin phi)^(D-2).
double cap_covering_bound(int dims, double phi);

/// Worst-case query lower bound for L2 costs: alpha^((D-2)/2) with
/// alpha = (1+eps)^2 / ((1+eps)^2 - 1).
double l2_query_lower_bound(int dims, double epsilon);

/// Worst-case query lower bound for Lp costs (p > 1): alpha^D with
/// alpha = 2^(1 - H(delta)) for the covering parameter delta of the orthant
/// construction. Validity: eps < 2^((p-1)/p) - 1 for finite p, eps < 1 for p = inf.
double lp_query_lower_bound(int dims, double exponent, double epsilon);

double binary_entropy(double delta);

}  // namespace evasion

#endif
