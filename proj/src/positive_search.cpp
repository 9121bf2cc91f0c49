#include "evasion/positive_search.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace evasion {

namespace {

constexpr double kLn2 = 0.6931471805599453;

double axis_step(const CostSpec& spec, std::size_t d) {
  const double c = spec.weights[d];
  if (std::isinf(spec.exponent) || spec.exponent == 1.0) return 1.0 / c;
  return std::pow(c, -1.0 / spec.exponent);
}

double proposal(OptimalityMode mode, double lower, double upper) {
  return mode == OptimalityMode::multiplicative ? geometric_mean(lower, upper)
                                                : 0.5 * (lower + upper);
}

bool converged(OptimalityMode mode, double lower, double upper, double accuracy) {
  if (mode == OptimalityMode::multiplicative)
    return upper - (1.0 + accuracy) * lower <= cost_tol(upper);
  return upper - lower - accuracy <= cost_tol(upper);
}

void validate_entry(OptimalityMode mode, double lower0, double upper0, double accuracy) {
  require(accuracy > 0.0, "search: accuracy must be positive");
  require(upper0 > 0.0 && lower0 <= upper0, "search: need 0 < lower <= upper");
  if (mode == OptimalityMode::multiplicative)
    require(lower0 > 0.0, "search: multiplicative mode needs a positive lower bound");
}

struct Run {
  const CostSpec& spec;
  Oracle& oracle;
  const SearchOptions& opts;
  std::uint64_t start_count;

  Run(const CostSpec& s, Oracle& o, const SearchOptions& op)
      : spec(s), oracle(o), opts(op), start_count(o.ledger().count) {}

  std::uint64_t used() const { return oracle.ledger().count - start_count; }
  bool over_budget() const { return used() >= opts.query_budget; }

  int probe(const Vector& dir, double cost, Point* out = nullptr) {
    Point x = axpy(spec.target, cost, dir);
    const int label = oracle.query(x);
    if (out) *out = std::move(x);
    return label;
  }
};

void check_witness(Run& run, const Point& xminus) {
  if (run.opts.verify_witness && run.oracle.query(xminus) != kNegative)
    throw InconsistentOracleError("search: supplied negative example queried positive");
}

EvasionResult finish(Run& run, Point witness, double lower, double upper, int iterations,
                     std::uint64_t bisections, Termination term,
                     std::vector<TraceRecord> trace) {
  EvasionResult r;
  r.witness = std::move(witness);
  r.bounds = BoundPair{lower, upper, run.opts.mode};
  r.queries = run.used();
  r.iterations = iterations;
  r.bisections = bisections;
  r.termination = term;
  r.trace = std::move(trace);
  return r;
}

}  // namespace

double geometric_mean(double a, double b) {
  // Stable across 2^(2^t) schedules where a * b would overflow.
  return std::exp(0.5 * (std::log(a) + std::log(b)));
}

DirectionSet DirectionSet::axis_directions(const CostSpec& spec) {
  spec.validate();
  require(spec.weights_regular(), "axis_directions: weights must be finite and positive");
  DirectionSet set;
  for (std::size_t d = 0; d < spec.dims(); ++d) {
    Vector plus(spec.dims(), 0.0);
    plus[d] = axis_step(spec, d);
    Vector minus(spec.dims(), 0.0);
    minus[d] = -plus[d];
    set.dirs.push_back(std::move(plus));
    set.dirs.push_back(std::move(minus));
  }
  set.active.assign(set.dirs.size(), 1);
  return set;
}

DirectionSet DirectionSet::signed_axis_directions(const CostSpec& spec, const Point& xminus) {
  spec.validate();
  require(spec.weights_regular(), "signed_axis_directions: weights must be finite and positive");
  require(xminus.size() == spec.dims(), "signed_axis_directions: dimension mismatch");
  DirectionSet set;
  for (std::size_t d = 0; d < spec.dims(); ++d) {
    const double delta = xminus[d] - spec.target[d];
    const double step = axis_step(spec, d);
    if (delta == 0.0) {
      Vector plus(spec.dims(), 0.0);
      plus[d] = step;
      Vector minus(spec.dims(), 0.0);
      minus[d] = -step;
      set.dirs.push_back(std::move(plus));
      set.dirs.push_back(std::move(minus));
    } else {
      Vector v(spec.dims(), 0.0);
      v[d] = delta > 0.0 ? step : -step;
      set.dirs.push_back(std::move(v));
    }
  }
  set.active.assign(set.dirs.size(), 1);
  return set;
}

DirectionSet DirectionSet::from_vectors(std::vector<Vector> rays, const CostSpec& spec) {
  DirectionSet set;
  for (Vector& v : rays) {
    const double cost = evaluate_cost(axpy(spec.target, 1.0, v), spec);
    require(cost > 0.0, "from_vectors: zero-cost ray");
    for (double& c : v) c /= cost;
    set.dirs.push_back(std::move(v));
  }
  set.active.assign(set.dirs.size(), 1);
  return set;
}

std::size_t DirectionSet::active_count() const {
  return static_cast<std::size_t>(std::count(active.begin(), active.end(), 1));
}

EvasionResult multiline_search(DirectionSet& dirs, const CostSpec& spec, const Point& xminus,
                               double lower0, double upper0, Oracle& oracle,
                               const SearchOptions& opts) {
  validate_entry(opts.mode, lower0, upper0, opts.epsilon);
  require(dirs.active_count() > 0, "multiline_search: no active directions");
  Run run(spec, oracle, opts);
  check_witness(run, xminus);

  Point witness = xminus;
  double lower = lower0;
  double upper = upper0;
  int t = 0;
  std::uint64_t bisections = 0;
  std::vector<TraceRecord> trace;
  std::vector<char> response(dirs.size(), 0);

  while (!converged(opts.mode, lower, upper, opts.epsilon)) {
    if (run.over_budget())
      return finish(run, std::move(witness), lower, upper, t, bisections,
                    Termination::budget_exhausted, std::move(trace));
    const double cost = proposal(opts.mode, lower, upper);
    std::fill(response.begin(), response.end(), 0);
    bool negative_found = false;
    for (std::size_t i = 0; i < dirs.size(); ++i) {
      if (!dirs.active[i]) continue;
      Point probed;
      const int label = run.probe(dirs.dirs[i], cost, &probed);
      response[i] = static_cast<char>(label);
      if (label == kNegative) {
        witness = std::move(probed);
        // Rays positive at a cost where another ray is negative cannot beat
        // the new upper bound; drop them.
        for (std::size_t j = 0; j < dirs.size(); ++j)
          if (response[j] == kPositive) dirs.active[j] = 0;
        negative_found = true;
        break;
      }
    }
    if (negative_found)
      upper = cost;
    else
      lower = cost;
    ++bisections;
    ++t;
    if (opts.trace) trace.push_back({t, lower, upper, run.used(), dirs.active_count()});
  }
  return finish(run, std::move(witness), lower, upper, t, bisections, Termination::converged,
                std::move(trace));
}

EvasionResult kmls(DirectionSet& dirs, const CostSpec& spec, const Point& xminus, double lower0,
                   double upper0, Oracle& oracle, const SearchOptions& opts) {
  validate_entry(opts.mode, lower0, upper0, opts.epsilon);
  require(dirs.active_count() > 0, "kmls: no active directions");
  Run run(spec, oracle, opts);
  check_witness(run, xminus);

  int steps = opts.kmls_steps;
  if (steps <= 0) {
    const int total = steps_for_gap(BoundPair{lower0, upper0, opts.mode}, opts.epsilon);
    steps = std::max(1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(total)))));
  }

  Point witness = xminus;
  double best_cost = upper0;
  double lower = lower0;
  double upper = upper0;
  int t = 0;
  std::uint64_t bisections = 0;
  std::size_t previous_choice = dirs.size();
  std::vector<TraceRecord> trace;
  std::vector<char> response(dirs.size(), 0);

  while (!converged(opts.mode, lower, upper, opts.epsilon)) {
    if (run.over_budget())
      return finish(run, std::move(witness), lower, upper, t, bisections,
                    Termination::budget_exhausted, std::move(trace));

    // Round-robin over active rays, skipping the previous iteration's choice.
    std::size_t chosen = dirs.size();
    for (std::size_t off = 1; off <= dirs.size(); ++off) {
      const std::size_t i = (previous_choice + off) % dirs.size();
      if (dirs.active[i]) {
        chosen = i;
        break;
      }
    }
    previous_choice = chosen;

    double cand_lower = lower;
    double cand_upper = upper;
    for (int k = 0; k < steps; ++k) {
      const double cost = proposal(opts.mode, cand_lower, cand_upper);
      Point probed;
      if (run.probe(dirs.dirs[chosen], cost, &probed) == kPositive) {
        cand_lower = cost;
      } else {
        cand_upper = cost;
        if (cost < best_cost) {
          best_cost = cost;
          witness = std::move(probed);
        }
      }
      ++bisections;
    }

    std::fill(response.begin(), response.end(), 0);
    bool negative_found = false;
    // The sweep is only informative when the depth steps raised the candidate
    // lower bound; at the certified lower it would answer a settled question.
    if (cand_lower > lower) {
      for (std::size_t i = 0; i < dirs.size(); ++i) {
        if (!dirs.active[i] || i == chosen) continue;
        Point probed;
        const int label = run.probe(dirs.dirs[i], cand_lower, &probed);
        response[i] = static_cast<char>(label);
        if (label == kNegative) {
          if (cand_lower < best_cost) {
            best_cost = cand_lower;
            witness = std::move(probed);
          }
          for (std::size_t j = 0; j < dirs.size(); ++j)
            if (response[j] == kPositive) dirs.active[j] = 0;
          // The chosen ray is positive at the new upper bound, so it stays
          // positive on the whole remaining bracket and cannot help again.
          dirs.active[chosen] = 0;
          negative_found = true;
          break;
        }
      }
    }

    upper = cand_upper;
    if (negative_found)
      upper = cand_lower;
    else
      lower = cand_lower;
    upper = std::min(upper, best_cost);
    ++t;
    if (opts.trace) trace.push_back({t, lower, upper, run.used(), dirs.active_count()});
  }
  return finish(run, std::move(witness), lower, upper, t, bisections, Termination::converged,
                std::move(trace));
}

EvasionResult convex_search(const CostSpec& spec, const Point& xminus, double lower0,
                            Oracle& oracle, const SearchOptions& opts) {
  spec.validate();
  require(opts.epsilon > 0.0, "convex_search: accuracy must be positive");
  const double p = spec.exponent;
  const double dims = static_cast<double>(spec.dims());

  // Axis rays reconstruct the L1 ball exactly; for p > 1 they only certify
  // the enclosed Lp ball, which shrinks the usable accuracy.
  double hull_ratio = 1.0;  // certified lower bound = hull_ratio * L1 bound
  double search_epsilon = opts.epsilon;
  if (opts.mode == OptimalityMode::multiplicative && p > 1.0) {
    hull_ratio = enclosed_lp_radius(static_cast<int>(spec.dims()), p);
    search_epsilon = (1.0 + opts.epsilon) * hull_ratio - 1.0;
    if (search_epsilon <= 0.0)
      throw ParameterRangeError(
          "convex_search: for p > 1 axis directions cannot certify this accuracy; "
          "epsilon must exceed D^((p-1)/p) - 1 (D - 1 for p = inf)");
  } else if (p > 1.0) {
    throw ParameterRangeError("convex_search: additive mode supports p <= 1 only");
  }
  (void)dims;

  DirectionSet dirs = DirectionSet::axis_directions(spec);
  const double upper0 = evaluate_cost(xminus, spec);
  SearchOptions inner = opts;
  inner.epsilon = search_epsilon;
  EvasionResult result = opts.use_kmls
                             ? kmls(dirs, spec, xminus, lower0, upper0, oracle, inner)
                             : multiline_search(dirs, spec, xminus, lower0, upper0, oracle, inner);
  result.bounds.lower *= hull_ratio;
  return result;
}

EvasionResult linear_search(const CostSpec& spec, const Point& xminus, double lower0,
                            Oracle& oracle, const SearchOptions& opts) {
  spec.validate();
  require(spec.exponent == 1.0, "linear_search: requires p = 1");
  DirectionSet dirs = DirectionSet::signed_axis_directions(spec, xminus);
  const double upper0 = evaluate_cost(xminus, spec);
  return opts.use_kmls ? kmls(dirs, spec, xminus, lower0, upper0, oracle, opts)
                       : multiline_search(dirs, spec, xminus, lower0, upper0, oracle, opts);
}

SpiralResult spiral_search(const DirectionSet& dirs, const CostSpec& spec, const Point& xminus,
                           double upper0, Oracle& oracle, const SearchOptions& opts) {
  require(upper0 > 0.0, "spiral_search: upper bound must be positive");
  require(dirs.active_count() > 0, "spiral_search: no active directions");
  Run run(spec, oracle, opts);

  const double log_upper = std::log(upper0);
  auto level_cost = [&](int t) { return std::exp(log_upper - std::exp2(t) * kLn2); };

  std::deque<std::size_t> pending;
  for (std::size_t i = 0; i < dirs.size(); ++i)
    if (dirs.active[i]) pending.push_back(i);

  SpiralResult out;
  out.witness = xminus;
  out.upper = upper0;
  std::vector<std::size_t> consistent;
  int t = 0;

  while (!pending.empty()) {
    if (t > opts.max_doublings || run.over_budget()) {
      out.directions = dirs;
      out.lower = 0.0;
      out.queries = run.used();
      out.found_lower = false;
      return out;
    }
    const std::size_t e = pending.front();
    pending.pop_front();
    consistent.push_back(e);
    const double cost = level_cost(t);
    if (run.probe(dirs.dirs[e], cost) == kNegative) {
      // This level is an upper bound: rays positive at it are pruned, the
      // negative ray goes back into play at the next, deeper level.
      if (cost < out.upper) {
        out.upper = cost;
        out.witness = axpy(spec.target, cost, dirs.dirs[e]);
      }
      pending.push_back(e);
      consistent.clear();
      ++t;
    }
  }

  out.directions.dirs = dirs.dirs;
  out.directions.active.assign(dirs.size(), 0);
  for (std::size_t i : consistent) out.directions.active[i] = 1;
  out.lower = level_cost(t);
  out.queries = run.used();
  out.found_lower = true;
  return out;
}

BootstrapResult bootstrap_upper_bound(const DirectionSet& dirs, const CostSpec& spec,
                                      double lower0, Oracle& oracle,
                                      const SearchOptions& opts) {
  require(lower0 > 0.0, "bootstrap_upper_bound: lower bound must be positive");
  require(dirs.active_count() > 0, "bootstrap_upper_bound: no active directions");
  Run run(spec, oracle, opts);
  const double log_lower = std::log(lower0);

  BootstrapResult out;
  for (int t = 0; t <= opts.max_doublings; ++t) {
    const double cost = std::exp(log_lower + std::exp2(t) * kLn2);
    if (!std::isfinite(cost)) break;
    for (std::size_t i = 0; i < dirs.size(); ++i) {
      if (!dirs.active[i]) continue;
      Point probed;
      if (run.probe(dirs.dirs[i], cost, &probed) == kNegative) {
        out.witness = std::move(probed);
        out.upper = cost;
        out.lower = t == 0 ? lower0 : std::exp(log_lower + std::exp2(t - 1) * kLn2);
        out.queries = run.used();
        out.found = true;
        out.doublings = t;
        return out;
      }
    }
    if (run.over_budget()) break;
  }
  out.queries = run.used();
  out.found = false;
  return out;
}

WeightPlan handle_degenerate_weights(const CostSpec& spec, int schedule_length) {
  spec.validate();
  require(schedule_length >= 1, "handle_degenerate_weights: schedule length must be >= 1");

  bool any_zero = false;
  bool all_infinite = true;
  for (double c : spec.weights) {
    if (c == 0.0) any_zero = true;
    if (std::isfinite(c)) all_infinite = false;
  }
  if (all_infinite)
    throw std::invalid_argument("handle_degenerate_weights: every feature is immutable");

  WeightPlan plan;
  plan.certified = !any_zero;

  auto surrogate = [&](double zero_weight) {
    CostSpec s = spec;
    for (double& c : s.weights)
      if (c == 0.0) c = zero_weight;
    return s;
  };

  if (any_zero) {
    for (int t = 1; t <= schedule_length; ++t) plan.specs.push_back(surrogate(std::exp2(-t)));
  } else {
    plan.specs.push_back(spec);
  }

  // Immutable features contribute no ray; build directions from the first
  // surrogate so zero-weight features are searchable.
  const CostSpec& base = plan.specs.front();
  for (std::size_t d = 0; d < base.dims(); ++d) {
    if (std::isinf(base.weights[d])) continue;
    Vector plus(base.dims(), 0.0);
    plus[d] = axis_step(base, d);
    Vector minus = plus;
    minus[d] = -plus[d];
    plan.directions.dirs.push_back(std::move(plus));
    plan.directions.dirs.push_back(std::move(minus));
  }
  plan.directions.active.assign(plan.directions.dirs.size(), 1);
  return plan;
}

}  // namespace evasion
