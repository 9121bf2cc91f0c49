// Acceptance gate: one line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "evasion/harness.hpp"
#include "evasion/negative_search.hpp"
#include "evasion/oracle.hpp"
#include "evasion/positive_search.hpp"
#include "support.hpp"

using namespace evasion;
using test_support::random_halfspace;
using test_support::unit_spec;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Trial {
  HalfspaceClassifier classifier;
  CostSpec spec;
  double mac;
  double epsilon;
  Point witness;  // from bootstrap
  double lower;
  double upper;
};

std::vector<Trial> build_halfspace_trials() {
  std::vector<Trial> trials;
  std::mt19937_64 rng(2024);
  for (std::size_t dims : {std::size_t{2}, std::size_t{10}, std::size_t{50}}) {
    for (double eps : {0.1, 0.01}) {
      for (int s = 0; s < 50; ++s) {
        Trial t;
        t.spec = unit_spec(dims, 1.0);
        t.classifier = random_halfspace(rng, dims);
        t.mac = halfspace_lp_mac(t.classifier.normal, t.classifier.boundary_point, t.spec);
        t.epsilon = eps;
        MembershipOracle oracle(t.classifier);
        DirectionSet dirs = DirectionSet::axis_directions(t.spec);
        BootstrapResult boot = bootstrap_upper_bound(dirs, t.spec, 0.25, oracle, {});
        if (!boot.found) continue;
        t.witness = boot.witness;
        t.lower = boot.lower;
        t.upper = boot.upper;
        trials.push_back(std::move(t));
      }
    }
  }
  return trials;
}

bool criterion1(const std::vector<Trial>& trials) {
  for (const Trial& t : trials) {
    const auto t0 = std::chrono::steady_clock::now();
    MembershipOracle oracle(t.classifier);
    SearchOptions opts;
    opts.epsilon = t.epsilon;
    EvasionResult r = convex_search(t.spec, t.witness, t.lower, oracle, opts);
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (r.termination != Termination::converged) return false;
    if (classify(t.classifier, r.witness) != kNegative) return false;
    const double cost = evaluate_cost(r.witness, t.spec);
    if (cost > (1.0 + t.epsilon) * t.mac * (1.0 + 1e-9)) return false;
    if (ms >= 1000.0) return false;
  }
  return true;
}

bool criterion2(const std::vector<Trial>& trials) {
  for (const Trial& t : trials) {
    MembershipOracle oracle(t.classifier);
    DirectionSet dirs = DirectionSet::axis_directions(t.spec);
    SearchOptions opts;
    opts.epsilon = t.epsilon;
    const int lstar = steps_for_gap(
        BoundPair{t.lower, t.upper, OptimalityMode::multiplicative}, t.epsilon);
    EvasionResult r = kmls(dirs, t.spec, t.witness, t.lower, t.upper, oracle, opts);
    if (r.termination != Termination::converged) return false;
    const auto root = static_cast<std::uint64_t>(std::ceil(std::sqrt(double(lstar))));
    const std::uint64_t ceiling =
        static_cast<std::uint64_t>(lstar) + (2 * root + 1) * 2 * t.spec.dims();
    if (r.queries > ceiling) return false;
  }
  return true;
}

bool criterion3(const std::vector<Trial>& trials) {
  for (const Trial& t : trials) {
    MembershipOracle oracle(t.classifier);
    DirectionSet dirs = DirectionSet::axis_directions(t.spec);
    SearchOptions opts;
    opts.epsilon = t.epsilon;
    const int lstar = steps_for_gap(
        BoundPair{t.lower, t.upper, OptimalityMode::multiplicative}, t.epsilon);
    EvasionResult r = multiline_search(dirs, t.spec, t.witness, t.lower, t.upper, oracle, opts);
    if (r.termination != Termination::converged) return false;
    const std::uint64_t ceiling = 2 * t.spec.dims() * static_cast<std::uint64_t>(lstar) +
                                  2 * t.spec.dims();
    if (r.queries > ceiling) return false;
  }
  return true;
}

bool criterion4() {
  const std::size_t dims = 4;
  CostSpec spec = unit_spec(dims, 1.0);
  const double upper0 = std::exp2(32.0);
  SearchOptions opts;
  opts.epsilon = 0.01;
  const int lstar = static_cast<int>(
      std::ceil(std::log2(32.0 / std::log2(1.01))));
  if (lstar != 12) return false;
  if (steps_for_gap(BoundPair{1.0, upper0, OptimalityMode::multiplicative}, 0.01) != lstar)
    return false;
  Point xminus(dims, 0.0);
  xminus[0] = upper0;
  {
    MaliciousOracle oracle(spec, 1.0, upper0);
    DirectionSet dirs = DirectionSet::axis_directions(spec);
    EvasionResult r = multiline_search(dirs, spec, xminus, 1.0, upper0, oracle, opts);
    if (r.termination != Termination::converged) return false;
    if (r.bisections < static_cast<std::uint64_t>(lstar)) return false;
  }
  {
    MaliciousOracle oracle(spec, 1.0, upper0);
    DirectionSet dirs = DirectionSet::axis_directions(spec);
    EvasionResult r = kmls(dirs, spec, xminus, 1.0, upper0, oracle, opts);
    if (r.termination != Termination::converged) return false;
    if (r.bisections < static_cast<std::uint64_t>(lstar)) return false;
  }
  return true;
}

bool grid_scan(const PolytopeClassifier& c, const CostSpec& spec, double budget,
               double resolution, Point& x, std::size_t d) {
  if (d == spec.dims()) return classify(c, x) == kNegative;
  const double half = budget / spec.weights[d];
  for (double v = -half; v <= half + resolution / 2; v += resolution) {
    x[d] = spec.target[d] + v;
    const double spent = spec.weights[d] * std::abs(v);
    if (spent > budget) continue;
    if (grid_scan(c, spec, budget - spent, resolution, x, d + 1)) return true;
  }
  return false;
}

bool criterion5() {
  std::mt19937_64 rng(515);
  std::uniform_int_distribution<int> nfaces(2, 5);
  std::uniform_real_distribution<double> margin(0.5, 2.0), u(0.5, 1.5), wdist(0.5, 2.0);
  int agreements = 0, trials = 0;
  for (std::size_t dims : {std::size_t{2}, std::size_t{3}}) {
    for (int t = 0; t < 50; ++t) {
      CostSpec spec = unit_spec(dims, 1.0);
      for (double& w : spec.weights) w = wdist(rng);
      PolytopeClassifier poly;
      const int count = nfaces(rng);
      for (int f = 0; f < count; ++f) {
        Vector n = test_support::random_unit(rng, dims);
        poly.faces.push_back(Halfspace{n, dot(n, spec.target) + margin(rng)});
      }
      const auto mac_opt = analytic_mac(poly, spec);
      const double mac = *mac_opt;
      double cost = mac * u(rng);
      if (std::abs(cost - mac) < 0.1 * mac) cost = mac * (cost < mac ? 0.85 : 1.15);

      bool via_vertices = false;
      for (const Point& v : l1_ball_vertices(cost, spec))
        via_vertices = via_vertices || classify(poly, v) == kNegative;
      Point x(dims);
      const bool via_grid = grid_scan(poly, spec, cost, 1e-2, x, 0);
      agreements += via_vertices == via_grid;
      ++trials;
    }
  }
  return agreements == trials && trials == 100;
}

bool criterion6() {
  const auto t0 = std::chrono::steady_clock::now();
  for (std::size_t dims : {std::size_t{2}, std::size_t{5}}) {
    for (double p : {1.0, 2.0}) {
      int converged = 0;
      for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        CostSpec spec = unit_spec(dims, p);
        std::vector<Halfspace> faces;
        Vector n(dims, 0.0);
        n[0] = -1.0;
        faces.push_back(Halfspace{n, -2.0});
        for (std::size_t d = 0; d < dims; ++d) {
          Vector plus(dims, 0.0);
          plus[d] = 1.0;
          faces.push_back(Halfspace{plus, 10.0});
          Vector minus(dims, 0.0);
          minus[d] = -1.0;
          faces.push_back(Halfspace{minus, 10.0});
        }
        MembershipOracle oracle(ConvexNegativeClassifier{faces});
        Point xminus(dims, 0.5);
        xminus[0] = 3.0;
        const double xcost = evaluate_cost(xminus, spec);
        FeasibleBody body;
        body.oracle = &oracle;
        body.spec = spec;
        body.radius = xcost;
        NegativeSearchOptions opts;
        opts.epsilon = 0.5;
        opts.samples_per_phase = 20;
        opts.walk_steps = 60;
        opts.rounding_rounds = 2;
        opts.inner_radius_scale = 0.01;
        opts.query_budget = 100'000'000;
        try {
          SampleSet samples = approximate_rounding(body, xminus, seed, opts);
          EvasionResult r = set_search(body, samples, xminus, 0.1, xcost, opts);
          if (r.termination == Termination::converged && r.bounds.upper <= 3.0 + 1e-9 &&
              classify(ConvexNegativeClassifier{faces}, r.witness) == kNegative)
            ++converged;
        } catch (const std::exception&) {
        }
      }
      if (converged < 18) return false;
    }
  }
  const double minutes =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / 60.0;
  return minutes < 10.0;
}

bool criterion7() {
  CostSpec spec{{0.5, 0.5}, {1.0, 1.0}, kInf};
  std::vector<Halfspace> faces = {
      {{1.0, 0.0}, 1.0}, {{-1.0, 0.0}, 0.0}, {{0.0, 1.0}, 1.0}, {{0.0, -1.0}, 0.0}};
  MembershipOracle oracle(ConvexNegativeClassifier{faces});
  FeasibleBody body;
  body.oracle = &oracle;
  body.spec = spec;
  body.radius = 1.0;

  SampleSet samples(77);
  std::uniform_real_distribution<double> u(0.1, 0.9);
  for (int i = 0; i < 16; ++i) samples.points.push_back({u(samples.rng), u(samples.rng)});

  double mx = 0.0, my = 0.0;
  int quadrant[4] = {0, 0, 0, 0};
  Point x = {0.5, 0.5};
  const int count = 2000;
  for (int i = 0; i < count; ++i) {
    x = hit_and_run(body, samples, x, 1000);
    mx += x[0];
    my += x[1];
    quadrant[(x[0] >= 0.5 ? 1 : 0) + (x[1] >= 0.5 ? 2 : 0)]++;
  }
  mx /= count;
  my /= count;
  if (std::abs(mx - 0.5) >= 0.05 || std::abs(my - 0.5) >= 0.05) return false;
  for (int q = 0; q < 4; ++q)
    if (quadrant[q] < 425 || quadrant[q] > 575) return false;
  return true;
}

bool criterion8() {
  std::mt19937_64 rng(808);
  std::uniform_real_distribution<double> wdist(0.3, 3.0), disp(0.5, 2.5);
  for (double p : {1.5, 2.0, 3.0, kInf}) {
    for (int t = 0; t < 100; ++t) {
      CostSpec spec{{0.0, 0.0}, {wdist(rng), wdist(rng)}, p};
      Vector w = test_support::random_unit(rng, 2);
      const double d = disp(rng);
      Point b = {d * w[0], d * w[1]};
      const double exact = halfspace_lp_mac(w, b, spec);
      const double numeric = test_support::numeric_halfspace_mac_2d(w, b, spec);
      if (std::abs(exact - numeric) > 1e-7 * std::max(1.0, numeric)) return false;
    }
  }
  // Containment of the enclosed Lp ball in the unit L1 ball at D <= 4.
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int dims : {2, 3, 4}) {
    for (double p : {1.5, 2.0, 4.0, kInf}) {
      const double r = enclosed_lp_radius(dims, p);
      CostSpec lp = unit_spec(dims, p);
      for (int t = 0; t < 100'000 / 12; ++t) {
        Point x(dims);
        for (double& c : x) c = gauss(rng);
        const double cost = evaluate_cost(x, lp);
        if (cost <= 0.0) continue;
        double l1 = 0.0;
        for (double c : x) l1 += std::abs(c) * r / cost;
        if (l1 > 1.0 + 1e-9) return false;
      }
      const double inflated = r * (1.0 + 1e-3);
      const double coord = std::isinf(p) ? inflated : inflated * std::pow(dims, -1.0 / p);
      if (coord * dims <= 1.0) return false;
    }
  }
  return true;
}

bool criterion9() {
  const double s = 7.3;
  std::mt19937_64 rng(909);
  std::uniform_real_distribution<double> wdist(0.3, 3.0), thr(2.0, 6.0);
  for (int t = 0; t < 20; ++t) {
    CostSpec spec{Point(3, 0.0), {wdist(rng), wdist(rng), wdist(rng)}, 1.0};
    CostSpec scaled = spec;
    for (double& w : scaled.weights) w *= s;
    const double threshold = thr(rng);
    SearchOptions opts;
    opts.epsilon = 0.03;

    MembershipOracle base(OpenCostBallClassifier{spec, threshold});
    base.ledger().keep_transcript = true;
    DirectionSet da = DirectionSet::axis_directions(spec);
    EvasionResult a = multiline_search(da, spec, axpy(spec.target, 2.0 * threshold, da.dirs[0]),
                                       0.5, 2.0 * threshold, base, opts);

    MembershipOracle big(OpenCostBallClassifier{scaled, s * threshold});
    big.ledger().keep_transcript = true;
    DirectionSet db = DirectionSet::axis_directions(scaled);
    EvasionResult b = multiline_search(db, scaled,
                                       axpy(scaled.target, s * 2.0 * threshold, db.dirs[0]),
                                       s * 0.5, s * 2.0 * threshold, big, opts);

    if (a.queries != b.queries) return false;
    if (base.ledger().transcript.size() != big.ledger().transcript.size()) return false;
    for (std::size_t i = 0; i < base.ledger().transcript.size(); ++i)
      if (base.ledger().transcript[i].second != big.ledger().transcript[i].second) return false;
    if (std::abs(b.bounds.upper - s * a.bounds.upper) > 1e-12 * s * a.bounds.upper) return false;
  }
  return true;
}

bool criterion10() {
  // The exponential worst-case query counts cannot be exhibited by running
  // searches at desk scale; they are covered by the closed-form calculators
  // and by the accuracy-range guard for p > 1.
  const double hyper = hypercube_covering_bound(10, 0.3);
  if (std::abs(hyper - 2.2769) > 1e-3 * hyper) return false;
  if (std::abs(cap_covering_bound(4, kPi / 6.0) - 4.0) > 1e-9) return false;
  if (std::abs(l2_query_lower_bound(4, 1.0) - 4.0 / 3.0) > 1e-9) return false;
  const double alpha = std::exp2(1.0 - binary_entropy(0.25));
  if (std::abs(lp_query_lower_bound(1, kInf, 1.0 / 3.0) - alpha) > 1e-9) return false;

  CostSpec spec = unit_spec(6, 2.0);
  MembershipOracle oracle(OpenCostBallClassifier{spec, 3.0});
  SearchOptions opts;
  opts.epsilon = 0.3;  // below sqrt(6) - 1
  try {
    (void)convex_search(spec, {5.0, 0.0, 0.0, 0.0, 0.0, 0.0}, 1.0, oracle, opts);
    return false;
  } catch (const ParameterRangeError&) {
  }
  return true;
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const char* name, bool ok) {
    std::printf("criterion %2d [%s]: %s\n", id, ok ? "PASS" : "FAIL", name);
    if (!ok) ++failures;
  };

  const std::vector<Trial> trials = build_halfspace_trials();
  report(1, "convex search returns a (1+eps)-optimal negative witness on random halfspaces",
         trials.size() == 300 && criterion1(trials));
  report(2, "k-step search stays under its query ceiling on every trial", criterion2(trials));
  report(3, "multiline search stays under its query ceiling on every trial", criterion3(trials));
  report(4, "adversarial oracle forces the full bisection round count", criterion4());
  report(5, "vertex witnesses agree with brute-force grids on random polytopes", criterion5());
  report(6, "negative-set pipeline converges on >= 18/20 seeded runs per cell", criterion6());
  report(7, "hit-and-run sampling is uniform on the unit box", criterion7());
  report(8, "closed-form utilities match independent numeric oracles", criterion8());
  report(9, "weight/threshold scaling preserves transcripts and scales costs", criterion9());
  report(10, "exponential lower bounds covered by calculators and the p > 1 guard",
         criterion10());

  std::printf("%s\n", failures == 0 ? "all criteria passed" : "ACCEPTANCE FAILURES PRESENT");
  return failures == 0 ? 0 : 1;
}
