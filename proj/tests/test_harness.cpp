#include <doctest.h>

#include <sstream>

#include "evasion/harness.hpp"

using namespace evasion;

TEST_CASE("config parsing with defaults and overrides") {
  const char* text = R"({
    "algorithm": "kmls",
    "dims": 7,
    "epsilon": 0.05,
    "seed": 42,
    "classifier": {"kind": "cost_ball", "threshold": 2.5},
    "epsilon_list": [0.1, 0.01]
  })";
  ExperimentConfig c = parse_config(text);
  CHECK(c.algorithm == "kmls");
  CHECK(c.dims == 7);
  CHECK(c.epsilon == 0.05);
  CHECK(c.seed == 42);
  CHECK(c.classifier.kind == "cost_ball");
  CHECK(c.classifier.threshold == 2.5);
  CHECK(c.epsilon_list == std::vector<double>{0.1, 0.01});
  CHECK(c.mode == OptimalityMode::multiplicative);
  CHECK(c.trials == 1);
  c.validate();
}

TEST_CASE("config validation rejects bad fields") {
  ExperimentConfig c;
  c.epsilon = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.epsilon = 0.1;
  c.algorithm = "gradient_descent";
  CHECK_THROWS_AS(c.validate(), std::exception);
  c.algorithm = "set_search";
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);  // missing negative_example
}

TEST_CASE("run_evade halfspace trial meets its accuracy and ceiling") {
  ExperimentConfig c;
  c.algorithm = "convex_search";
  c.dims = 3;
  c.epsilon = 0.1;
  c.seed = 1;
  EvadeOutcome o = run_evade(c);
  CHECK(o.record.termination == "converged");
  CHECK(o.record.mac_provenance == "analytic");
  CHECK(o.record.ratio >= 1.0 - 1e-9);
  CHECK(o.record.ratio <= 1.1 + 1e-9);
  CHECK(o.record.bound_ok);
}

TEST_CASE("run_evade is deterministic for a fixed seed") {
  ExperimentConfig c;
  c.algorithm = "kmls";
  c.dims = 5;
  c.epsilon = 0.02;
  c.seed = 9;
  EvadeOutcome a = run_evade(c);
  EvadeOutcome b = run_evade(c);
  CHECK(a.record.queries == b.record.queries);
  CHECK(a.record.final_cost == b.record.final_cost);
  CHECK(a.record.iterations == b.record.iterations);
  CHECK(a.result.witness == b.result.witness);
  // Only wall_ms may differ between the two rows.
  TrialRecord ra = a.record, rb = b.record;
  ra.wall_ms = rb.wall_ms = 0.0;
  CHECK(csv_row(ra) == csv_row(rb));
}

TEST_CASE("csv schema is stable") {
  CHECK(csv_header() ==
        "algorithm,D,p,epsilon,seed,queries,iterations,final_cost,mac_reference,ratio,"
        "bound_ok,wall_ms,termination,mac_provenance");
  TrialRecord r;
  r.algorithm = "kmls";
  r.dims = 2;
  r.exponent = 1.0;
  r.epsilon = 0.1;
  r.seed = 3;
  r.queries = 10;
  r.iterations = 4;
  r.final_cost = 2.5;
  r.mac_reference = 2.0;
  r.ratio = 1.25;
  r.bound_ok = true;
  r.wall_ms = 1.5;
  r.termination = "converged";
  r.mac_provenance = "analytic";
  CHECK(csv_row(r) == "kmls,2,1,0.1,3,10,4,2.5,2,1.25,true,1.5,converged,analytic");
  r.mac_provenance = "none";
  CHECK(csv_row(r) == "kmls,2,1,0.1,3,10,4,2.5,,,true,1.5,converged,none");
}

TEST_CASE("format_double round trips") {
  for (double v : {0.1, 1.0 / 3.0, 2.745852664243279, 1e-300, 7.3}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("run_bench emits rows and summary lines") {
  ExperimentConfig c;
  c.algorithm_list = {"multiline_search", "kmls"};
  c.dims_list = {2, 4};
  c.epsilon_list = {0.1};
  c.seed_list = {1, 2, 3};
  std::ostringstream out;
  run_bench(c, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == csv_header());
  int rows = 0, summaries = 0, bound_failures = 0;
  while (std::getline(in, line)) {
    ++rows;
    if (line.find(",summary,") != std::string::npos) ++summaries;
    if (line.find(",false,") != std::string::npos) ++bound_failures;
  }
  CHECK(rows == 2 * 2 * (3 + 1));
  CHECK(summaries == 4);
  CHECK(bound_failures == 0);
}

TEST_CASE("run_bench rejects an empty grid") {
  ExperimentConfig c;
  c.trials = 1;
  c.seed_list = {};
  c.epsilon_list.clear();
  c.dims_list.clear();
  std::ostringstream out;
  c.trials = 0;
  CHECK_THROWS_AS(run_bench(c, out), std::invalid_argument);
}

TEST_CASE("run_verify selector filters suites") {
  std::ostringstream out;
  const int failures = run_verify("vertex-witness", out);
  CHECK(failures == 0);
  const std::string report = out.str();
  CHECK(report.find("vertex-witness") != std::string::npos);
  CHECK(report.find("hit-and-run") == std::string::npos);
  CHECK(report.find("subgradient") == std::string::npos);
}
