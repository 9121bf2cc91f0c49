#ifndef EVASION_ORACLE_HPP
#define EVASION_ORACLE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "evasion/cost.hpp"
#include "evasion/types.hpp"

namespace evasion {

inline constexpr int kPositive = +1;
inline constexpr int kNegative = -1;

/// Counts raw membership queries; never decremented. Transcript retention is
/// opt-in and capped so long bench sweeps do not exhaust memory.
struct QueryLedger {
  std::uint64_t count = 0;
  bool keep_transcript = false;
  std::size_t transcript_cap = 1'000'000;
  std::vector<std::pair<Point, int>> transcript;

  void record(const Point& x, int label) {
    ++count;
    if (keep_transcript && transcript.size() < transcript_cap)
      transcript.emplace_back(x, label);
  }
};

/// Negative set {x : x.w >= b.w}; the positive side contains the target.
struct HalfspaceClassifier {
  Vector normal;
  Point boundary_point;
};

/// Predicts +1 iff A(x) < threshold (strict: the threshold sphere is negative).
struct OpenCostBallClassifier {
  CostSpec spec;
  double threshold;
};

/// Positive set = intersection of open halfspaces {x : x.normal < offset}.
struct PolytopeClassifier {
  std::vector<Halfspace> faces;
};

/// Negative set = intersection of closed halfspaces {x : x.normal <= offset}.
struct ConvexNegativeClassifier {
  std::vector<Halfspace> faces;
};

using Classifier = std::variant<HalfspaceClassifier, OpenCostBallClassifier,
                                PolytopeClassifier, ConvexNegativeClassifier>;

int classify(const Classifier& c, const Point& x);

/// True when the classifier's positive set is convex (as opposed to the
/// negative set). Drives which search family applies.
bool positive_set_convex(const Classifier& c);

class Oracle {
 public:
  virtual ~Oracle() = default;
  virtual int query(const Point& x) = 0;
  virtual QueryLedger& ledger() = 0;
};

class MembershipOracle : public Oracle {
 public:
  explicit MembershipOracle(Classifier c) : classifier_(std::move(c)) {}

  int query(const Point& x) override;
  QueryLedger& ledger() override { return ledger_; }
  const Classifier& classifier() const { return classifier_; }

  /// Memoization is off by default: complexity results count raw queries.
  void set_memoize(bool on) { memoize_ = on; }

 private:
  Classifier classifier_;
  QueryLedger ledger_;
  bool memoize_ = false;
  std::map<Point, int> memo_;
};

/// Closed-form minimal adversarial cost, when the variant admits one.
std::optional<double> analytic_mac(const Classifier& c, const CostSpec& spec);

struct MacInterval {
  double lower;
  double upper;
};

/// Grid search over a bounding box (D <= 3): upper = cheapest negative grid
/// point, lower = upper minus a Lipschitz slack for the grid resolution.
MacInterval brute_force_mac(const Classifier& c, const CostSpec& spec, double resolution,
                            const Point& box_lo, const Point& box_hi);

/// Worst-case adversary of the bisection lower bound: answers +1 iff the query
/// cost is at most the geometric mean of its current bracket, then tightens
/// the bracket so the gap shrinks no faster than a square root per round.
class MaliciousOracle : public Oracle {
 public:
  MaliciousOracle(CostSpec spec, double lower0, double upper0);

  int query(const Point& x) override;
  QueryLedger& ledger() override { return ledger_; }

  const BoundPair& bounds() const { return bounds_; }
  const CostSpec& spec() const { return spec_; }

 private:
  CostSpec spec_;
  BoundPair bounds_;
  QueryLedger ledger_;
};

}  // namespace evasion

#endif
