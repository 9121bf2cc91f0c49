#include "evasion/negative_search.hpp"

#include <algorithm>
#include <cmath>

namespace evasion {

namespace {

int default_samples(const NegativeSearchOptions& opts, std::size_t dims) {
  return opts.samples_per_phase > 0 ? opts.samples_per_phase : 10 * static_cast<int>(dims);
}

int default_walk_steps(const NegativeSearchOptions& opts, std::size_t dims) {
  return opts.walk_steps > 0 ? opts.walk_steps : 50 * static_cast<int>(dims);
}

int default_phases(const NegativeSearchOptions& opts, std::size_t dims) {
  if (opts.max_phases > 0) return opts.max_phases;
  const double t = static_cast<double>(dims) * std::log2(1.0 / opts.inner_radius_scale);
  return std::max(1, static_cast<int>(std::ceil(t)));
}

/// Direction drawn from the sample spread, rescaled to unit cost. Falls back
/// to an isotropic draw when the spread is degenerate.
Vector draw_direction(const FeasibleBody& body, SampleSet& samples,
                      const NegativeSearchOptions& opts) {
  const std::size_t dims = body.spec.dims();
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector mean(dims, 0.0);
  if (!opts.uncentered_directions && !samples.points.empty()) {
    for (const Point& y : samples.points)
      for (std::size_t d = 0; d < dims; ++d) mean[d] += y[d];
    for (double& m : mean) m /= static_cast<double>(samples.points.size());
  }

  for (int attempt = 0; attempt < 16; ++attempt) {
    Vector v(dims, 0.0);
    if (samples.points.empty()) {
      for (double& c : v) c = gauss(samples.rng);
    } else {
      for (const Point& y : samples.points) {
        const double nu = gauss(samples.rng);
        for (std::size_t d = 0; d < dims; ++d) v[d] += nu * (y[d] - mean[d]);
      }
    }
    const double unit = evaluate_cost(axpy(body.spec.target, 1.0, v), body.spec);
    if (unit > 0.0 && std::isfinite(unit)) {
      for (double& c : v) c /= unit;
      return v;
    }
    // Degenerate spread (all samples equal): isotropic retry.
    Vector iso(dims, 0.0);
    for (double& c : iso) c = gauss(samples.rng);
    const double iu = evaluate_cost(axpy(body.spec.target, 1.0, iso), body.spec);
    if (iu > 0.0 && std::isfinite(iu)) {
      for (double& c : iso) c /= iu;
      return iso;
    }
  }
  throw DegenerateBodyError("hit_and_run: could not draw a usable direction");
}

}  // namespace

bool FeasibleBody::satisfies_constraints(const Point& x) const {
  if (!all_finite(x)) return false;
  if (evaluate_cost(x, spec) > 2.0 * radius) return false;
  for (const Halfspace& cut : cuts)
    if (!cut.contains(x)) return false;
  return true;
}

bool FeasibleBody::contains(const Point& x) const {
  if (!satisfies_constraints(x)) return false;
  return oracle->query(x) == kNegative;
}

Point hit_and_run(const FeasibleBody& body, SampleSet& samples, const Point& start, int steps,
                  const NegativeSearchOptions& opts) {
  require(body.oracle != nullptr, "hit_and_run: body has no oracle");
  require(body.radius > 0.0, "hit_and_run: body radius must be positive");
  require(steps >= 0, "hit_and_run: steps must be >= 0");
  if (!body.contains(start))
    throw DegenerateBodyError("hit_and_run: start point is outside the body");
  if (steps == 0) return start;

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double extent_cap = 4.125 * body.radius;  // chord cannot leave the 2R ball
  const double extent_floor = 1e-12 * body.radius;

  Point x = start;
  for (int k = 0; k < steps; ++k) {
    const Vector v = draw_direction(body, samples, opts);
    // The cap is infeasible by the ball constraint, so shrinking rejection
    // can start there; rejections outside the ball never touch the oracle.
    double omega = extent_cap;

    for (;;) {
      if (omega <= extent_floor) break;  // chord too thin on this side: stay put
      const double w = omega * unit(samples.rng);
      Point candidate = axpy(x, w, v);
      if (body.contains(candidate)) {
        x = std::move(candidate);
        break;
      }
      omega = w;
    }
  }
  return x;
}

SampleSet approximate_rounding(const FeasibleBody& body, const Point& xminus,
                               std::uint64_t seed, const NegativeSearchOptions& opts) {
  require(body.oracle != nullptr, "approximate_rounding: body has no oracle");
  if (!body.contains(xminus))
    throw DegenerateBodyError("approximate_rounding: negative example is outside the body");

  const std::size_t dims = body.spec.dims();
  SampleSet out(seed);
  out.points.push_back(xminus);

  bool perturbed = false;
  double scale = std::max(opts.inner_radius_scale, 1e-6) * body.radius;
  for (int shrink = 0; shrink < 3 && !perturbed; ++shrink, scale *= 0.1) {
    for (std::size_t d = 0; d < dims; ++d) {
      Vector e(dims, 0.0);
      e[d] = 1.0;
      const double unit = evaluate_cost(axpy(body.spec.target, 1.0, e), body.spec);
      if (!(unit > 0.0) || !std::isfinite(unit)) continue;
      for (double sgn : {+1.0, -1.0}) {
        Point candidate = xminus;
        candidate[d] += sgn * scale / unit;
        if (body.contains(candidate)) {
          out.points.push_back(std::move(candidate));
          perturbed = true;
        }
      }
    }
  }
  if (!perturbed)
    throw DegenerateBodyError("approximate_rounding: body too thin to perturb around the seed");

  const int n2 = 2 * default_samples(opts, dims);
  const int steps = default_walk_steps(opts, dims);
  for (int round = 0; round < opts.rounding_rounds; ++round) {
    std::vector<Point> fresh;
    fresh.reserve(n2);
    for (int j = 0; j < n2; ++j) {
      const Point& start = out.points[j % out.points.size()];
      fresh.push_back(hit_and_run(body, out, start, steps, opts));
    }
    out.points = std::move(fresh);
  }
  return out;
}

IntersectOutcome intersect_search(FeasibleBody& body, SampleSet& samples, double cost_cap,
                                  const NegativeSearchOptions& opts) {
  require(body.oracle != nullptr, "intersect_search: body has no oracle");
  require(cost_cap > 0.0, "intersect_search: cost cap must be positive");
  require(!samples.points.empty(), "intersect_search: sample set is empty");

  const std::size_t dims = body.spec.dims();
  const int n = default_samples(opts, dims);
  const int steps = default_walk_steps(opts, dims);
  const int phases = default_phases(opts, dims);
  const std::uint64_t start_count = body.oracle->ledger().count;

  IntersectOutcome out;
  auto finish = [&](bool found, Point witness) {
    out.found = found;
    out.witness = std::move(witness);
    out.queries = body.oracle->ledger().count - start_count;
    return out;
  };

  // A held sample may already qualify.
  for (const Point& y : samples.points)
    if (evaluate_cost(y, body.spec) <= cost_cap) return finish(true, y);

  double best = kInf;
  for (int phase = 1; phase <= phases; ++phase) {
    if (body.oracle->ledger().count - start_count >= opts.query_budget) break;

    std::vector<Point> drawn;
    drawn.reserve(2 * static_cast<std::size_t>(n));
    for (int j = 0; j < 2 * n; ++j) {
      const Point& start = samples.points[j % samples.points.size()];
      Point y = hit_and_run(body, samples, start, steps, opts);
      const double cost = evaluate_cost(y, body.spec);
      best = std::min(best, cost);
      if (cost <= cost_cap) return finish(true, std::move(y));
      drawn.push_back(std::move(y));
    }

    // First half fixes the cut, second half seeds the next phase.
    Point centroid(dims, 0.0);
    for (int j = 0; j < n; ++j)
      for (std::size_t d = 0; d < dims; ++d) centroid[d] += drawn[j][d];
    for (double& c : centroid) c /= static_cast<double>(n);

    const Halfspace cut = subgradient_halfspace(centroid, body.spec);
    body.cuts.push_back(cut);

    std::vector<Point> survivors;
    for (int j = n; j < 2 * n; ++j)
      if (cut.contains(drawn[j])) survivors.push_back(drawn[j]);
    if (survivors.empty()) {
      for (int j = 0; j < n; ++j)
        if (cut.contains(drawn[j])) survivors.push_back(drawn[j]);
    }
    if (survivors.empty()) {
      // Last resort: restart the walk from the cut point if it is still
      // inside the body.
      if (body.contains(centroid)) {
        for (int j = 0; j < 2 * n; ++j)
          survivors.push_back(hit_and_run(body, samples, centroid, steps, opts));
      } else {
        throw DegenerateBodyError("intersect_search: no sample survived the cut");
      }
    }
    samples.points = std::move(survivors);

    if (opts.trace)
      out.trace.push_back({phase, samples.points.size(), body.cuts.size(), best});
  }
  return finish(false, Point{});
}

EvasionResult set_search(FeasibleBody& body, SampleSet& samples, const Point& xminus,
                         double lower0, double upper0, const NegativeSearchOptions& opts) {
  require(lower0 > 0.0 && lower0 < upper0, "set_search: need 0 < lower < upper");
  require(opts.epsilon > 0.0, "set_search: accuracy must be positive");
  require(body.oracle != nullptr, "set_search: body has no oracle");
  const std::uint64_t start_count = body.oracle->ledger().count;

  EvasionResult result;
  result.witness = xminus;
  result.bounds = BoundPair{lower0, upper0, OptimalityMode::multiplicative};
  double lower = lower0;
  double upper = upper0;
  int phases = 0;

  while (upper > (1.0 + opts.epsilon) * lower + cost_tol(upper)) {
    if (body.oracle->ledger().count - start_count >= opts.query_budget) {
      result.termination = Termination::budget_exhausted;
      break;
    }
    const double proposal = geometric_mean(lower, upper);

    // Cuts made while testing a level stay valid for every smaller level, so
    // the shrunken body and its samples carry forward only on success.
    FeasibleBody trial_body = body;
    SampleSet trial_samples = samples;
    IntersectOutcome outcome = intersect_search(trial_body, trial_samples, proposal, opts);
    ++phases;
    if (outcome.found) {
      body = std::move(trial_body);
      samples = std::move(trial_samples);
      upper = evaluate_cost(outcome.witness, body.spec);
      result.witness = std::move(outcome.witness);
    } else {
      samples.rng = trial_samples.rng;  // keep the stream moving for determinism
      lower = proposal;
    }
    if (opts.trace)
      result.trace.push_back({phases, lower, upper, body.oracle->ledger().count - start_count,
                              samples.points.size()});
  }

  result.bounds.lower = lower;
  result.bounds.upper = upper;
  result.queries = body.oracle->ledger().count - start_count;
  result.iterations = phases;
  result.bisections = static_cast<std::uint64_t>(phases);
  return result;
}

}  // namespace evasion
