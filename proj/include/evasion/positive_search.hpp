#ifndef EVASION_POSITIVE_SEARCH_HPP
#define EVASION_POSITIVE_SEARCH_HPP

#include <cstdint>
#include <vector>

#include "evasion/cost.hpp"
#include "evasion/oracle.hpp"
#include "evasion/types.hpp"

namespace evasion {

/// Ordered search rays radiating from the target, each scaled to unit cost.
/// Pruned rays stay in the set with their flag cleared and are never revived
/// within a run.
struct DirectionSet {
  std::vector<Vector> dirs;
  std::vector<char> active;

  /// The 2D vertices of the unit-cost ball along the coordinate axes,
  /// ordered +1, -1, +2, -2, ...
  static DirectionSet axis_directions(const CostSpec& spec);

  /// Axis directions restricted by the orthant of a known negative point:
  /// only sign(xminus_d - target_d) survives where that sign is nonzero.
  static DirectionSet signed_axis_directions(const CostSpec& spec, const Point& xminus);

  /// Arbitrary rays, normalized to unit cost.
  static DirectionSet from_vectors(std::vector<Vector> rays, const CostSpec& spec);

  std::size_t size() const { return dirs.size(); }
  std::size_t active_count() const;
};

enum class Termination { converged, no_lower_bound, budget_exhausted };

struct TraceRecord {
  int iteration;
  double lower;
  double upper;
  std::uint64_t queries;
  std::size_t active_directions;
};

struct EvasionResult {
  Point witness;
  BoundPair bounds;
  std::uint64_t queries = 0;
  int iterations = 0;
  std::uint64_t bisections = 0;  ///< bound-updating binary-search proposals
  Termination termination = Termination::converged;
  std::vector<TraceRecord> trace;
};

struct SearchOptions {
  double epsilon = 0.1;  ///< multiplicative slack, or eta in additive mode
  OptimalityMode mode = OptimalityMode::multiplicative;
  int kmls_steps = 0;  ///< 0 selects ceil(sqrt(L*))
  bool use_kmls = false;
  std::uint64_t query_budget = 10'000'000;
  int max_doublings = 64;
  bool trace = false;
  bool verify_witness = false;  ///< spend one query confirming xminus is negative
};

/// Simultaneous binary search along every active direction with lazy querying
/// and pruning. Worst case |W| L + |W| queries.
EvasionResult multiline_search(DirectionSet& dirs, const CostSpec& spec, const Point& xminus,
                               double lower0, double upper0, Oracle& oracle,
                               const SearchOptions& opts);

/// K deep bisection steps along one round-robin direction, then a breadth
/// sweep of the rest at the candidate lower bound. Worst case
/// L + (2 ceil(sqrt(L)) + 1) |W| queries at the default K.
EvasionResult kmls(DirectionSet& dirs, const CostSpec& spec, const Point& xminus, double lower0,
                   double upper0, Oracle& oracle, const SearchOptions& opts);

/// Evasion of a convex positive set: axis directions plus multiline or K-step
/// search. Accepts p <= 1 directly; p > 1 only where axis directions can still
/// certify the requested accuracy (epsilon above D^((p-1)/p) - 1).
EvasionResult convex_search(const CostSpec& spec, const Point& xminus, double lower0,
                            Oracle& oracle, const SearchOptions& opts);

/// The halfspace special case: directions outside the orthant of xminus
/// cannot contain the minimizer and are dropped up front. Requires p = 1.
EvasionResult linear_search(const CostSpec& spec, const Point& xminus, double lower0,
                            Oracle& oracle, const SearchOptions& opts);

struct SpiralResult {
  DirectionSet directions;  ///< surviving rays, to be reused downstream
  double lower = 0.0;
  double upper = 0.0;
  Point witness;
  std::uint64_t queries = 0;
  bool found_lower = false;
};

/// Establishes an initial lower bound by halving search on the cost exponent,
/// pruning rays that were positive whenever a probe level turns up negative.
SpiralResult spiral_search(const DirectionSet& dirs, const CostSpec& spec, const Point& xminus,
                           double upper0, Oracle& oracle, const SearchOptions& opts);

struct BootstrapResult {
  Point witness;
  double lower = 0.0;
  double upper = 0.0;
  std::uint64_t queries = 0;
  bool found = false;
  int doublings = 0;
};

/// Finds a first negative example by probing every ray at doubly
/// exponentially increasing cost.
BootstrapResult bootstrap_upper_bound(const DirectionSet& dirs, const CostSpec& spec,
                                      double lower0, Oracle& oracle, const SearchOptions& opts);

struct WeightPlan {
  DirectionSet directions;      ///< rays for the first (or only) surrogate spec
  std::vector<CostSpec> specs;  ///< one entry normally; a decay schedule when zeros exist
  bool certified = true;        ///< false when the zero-weight path is taken
};

/// Removes rays along infinite-weight features and replaces zero weights with
/// a 2^-t decay schedule of surrogate specs for repeated search runs.
WeightPlan handle_degenerate_weights(const CostSpec& spec, int schedule_length = 8);

double geometric_mean(double a, double b);

}  // namespace evasion

#endif
