#ifndef EVASION_NEGATIVE_SEARCH_HPP
#define EVASION_NEGATIVE_SEARCH_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "evasion/cost.hpp"
#include "evasion/oracle.hpp"
#include "evasion/positive_search.hpp"
#include "evasion/types.hpp"

namespace evasion {

/// Search region for the convex-negative-set pipeline: the oracle's negative
/// set intersected with a bounding cost ball of radius 2R and every cut
/// accumulated so far. Convex by construction.
struct FeasibleBody {
  Oracle* oracle = nullptr;
  CostSpec spec;
  double radius = 0.0;  ///< R; the bounding ball has cost radius 2R
  std::vector<Halfspace> cuts;

  /// Ball and cut constraints only; costs no oracle query.
  bool satisfies_constraints(const Point& x) const;

  /// Full membership: constraints first, then one oracle query if they pass.
  bool contains(const Point& x) const;
};

/// Points believed approximately uniform in the current body, plus the RNG
/// that owns all randomness for the run.
struct SampleSet {
  std::vector<Point> points;
  std::mt19937_64 rng;

  explicit SampleSet(std::uint64_t seed = 0) : rng(seed) {}
};

struct PhaseRecord {
  int phase = 0;
  std::size_t samples = 0;
  std::size_t cut_count = 0;
  double best_cost = kInf;
};

struct NegativeSearchOptions {
  double epsilon = 0.5;
  int samples_per_phase = 0;    ///< N; 0 selects 10 D
  int walk_steps = 0;           ///< K; 0 selects 50 D
  int rounding_rounds = 3;
  double inner_radius_scale = 1e-3;  ///< r = scale * R, sets the phase cap
  int max_phases = 0;           ///< T; 0 selects ceil(D log2(R / r))
  std::uint64_t query_budget = 10'000'000;
  bool uncentered_directions = false;  ///< raw sample locations instead of deviations
  bool trace = false;
};

/// One hit-and-run random walk: each step draws a direction from the sample
/// set's spread, brackets the feasible chord by doubling outward, and picks a
/// uniform feasible point on it by shrinking rejection. Returns the endpoint,
/// always inside the body.
Point hit_and_run(const FeasibleBody& body, SampleSet& samples, const Point& start, int steps,
                  const NegativeSearchOptions& opts = {});

/// Seeds a sample set at a known interior point plus accepted axis
/// perturbations, then alternates hit-and-run resampling rounds so directions
/// pick up the body's covariance. Statistical contract only.
SampleSet approximate_rounding(const FeasibleBody& body, const Point& xminus,
                               std::uint64_t seed, const NegativeSearchOptions& opts = {});

struct IntersectOutcome {
  bool found = false;
  Point witness;
  std::uint64_t queries = 0;
  std::vector<PhaseRecord> trace;
};

/// Randomized feasibility test for body-intersects-cost-ball: per phase draws
/// 2N samples, returns any sample of cost <= cost_cap, otherwise cuts through
/// the centroid of the first half and keeps the second half's survivors.
IntersectOutcome intersect_search(FeasibleBody& body, SampleSet& samples, double cost_cap,
                                  const NegativeSearchOptions& opts = {});

/// Binary search over cost levels driven by intersect_search. upper0 is the
/// cost of a known negative point, lower0 a positive lower bound on the
/// minimal cost. The certified direction is the upper bound only; the lower
/// bound is probabilistic.
EvasionResult set_search(FeasibleBody& body, SampleSet& samples, const Point& xminus,
                         double lower0, double upper0, const NegativeSearchOptions& opts = {});

}  // namespace evasion

#endif
