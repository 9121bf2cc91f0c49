#ifndef EVASION_HARNESS_HPP
#define EVASION_HARNESS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "evasion/negative_search.hpp"
#include "evasion/oracle.hpp"
#include "evasion/positive_search.hpp"

namespace evasion {

/// Classifier description in a config file. kind selects the family:
///   halfspace          explicit normal + boundary point
///   random_halfspace   seeded normal / displacement draw
///   cost_ball          positive iff cost < threshold, on the trial's cost spec
///   negative_halfspace convex negative set {x : x . normal >= level} within a box
struct ClassifierConfig {
  std::string kind = "random_halfspace";
  Vector normal;
  Point boundary_point;
  double threshold = 0.0;
  double level = 0.0;
  double box_halfwidth = 10.0;
};

struct ExperimentConfig {
  std::string algorithm = "convex_search";  ///< convex_search | linear_search |
                                            ///< multiline_search | kmls | set_search
  ClassifierConfig classifier;
  std::size_t dims = 2;
  double exponent = 1.0;
  Vector weights;  ///< empty selects all-ones
  Point target;    ///< empty selects the origin
  double epsilon = 0.1;
  OptimalityMode mode = OptimalityMode::multiplicative;
  std::uint64_t seed = 1;
  int trials = 1;
  std::uint64_t query_budget = 10'000'000;
  double lower0 = 1e-3;      ///< initial certified lower bound for bootstrapping
  Point negative_example;    ///< required for set_search; optional elsewhere
  double radius = 0.0;       ///< body radius R for set_search; 0 derives from the example

  // Sampler constants for set_search.
  int samples_per_phase = 0;
  int walk_steps = 0;
  int rounding_rounds = 3;
  double inner_radius_scale = 1e-3;

  std::string output_path;  ///< CSV destination for bench; empty means stdout
  bool trace = false;

  // Sweep axes for bench; empty lists fall back to the scalar fields above.
  std::vector<std::size_t> dims_list;
  std::vector<double> epsilon_list;
  std::vector<std::string> algorithm_list;
  std::vector<std::uint64_t> seed_list;

  void validate() const;
  CostSpec cost_spec() const;
};

/// Parses the JSON config text into a config, starting from defaults.
ExperimentConfig parse_config(const std::string& json_text);

struct TrialRecord {
  std::string algorithm;
  std::size_t dims = 0;
  double exponent = 1.0;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t queries = 0;
  int iterations = 0;
  double final_cost = 0.0;
  double mac_reference = 0.0;
  double ratio = 0.0;
  bool bound_ok = true;
  double wall_ms = 0.0;
  std::string termination;
  std::string mac_provenance;  ///< analytic | brute-force | none
};

/// Header plus one line per record, shortest round-trip numeric formatting.
std::string csv_header();
std::string csv_row(const TrialRecord& r);

struct EvadeOutcome {
  EvasionResult result;
  TrialRecord record;
  int bracket_steps = 0;  ///< binary-search depth implied by the bootstrapped bracket
};

/// Runs one configured trial end to end, bootstrapping bounds when absent.
EvadeOutcome run_evade(const ExperimentConfig& config);

/// Runs the sweep grid and writes one CSV row per cell trial plus a summary
/// row per cell (median queries and the theoretical ceilings).
void run_bench(const ExperimentConfig& config, std::ostream& out);

/// Runs the named property suites; empty selector runs everything. Returns the
/// number of failed suites and prints one line per check.
int run_verify(const std::string& selector, std::ostream& out);

/// Shortest representation of a double that parses back to the same bits.
std::string format_double(double v);

}  // namespace evasion

#endif
