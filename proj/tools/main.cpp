#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "evasion/harness.hpp"

namespace {

evasion::ExperimentConfig load_base_config(const std::string& path) {
  if (path.empty()) return {};
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return evasion::parse_config(buf.str());
}

std::string resolve_output(const std::string& configured) {
  if (configured.empty()) return configured;
  if (const char* dir = std::getenv("EVASION_OUTPUT_DIR")) {
    const std::filesystem::path p(configured);
    return (std::filesystem::path(dir) / p.filename()).string();
  }
  return configured;
}

void add_common_flags(CLI::App* cmd, evasion::ExperimentConfig& cfg, std::string& config_path) {
  cmd->add_option("--config", config_path, "JSON config file; flags override its values");
  cmd->add_option("--algorithm", cfg.algorithm,
                  "convex_search | linear_search | multiline_search | kmls | set_search");
  cmd->add_option("--dims", cfg.dims, "feature-space dimension");
  cmd->add_option("--exponent", cfg.exponent, "cost exponent p (inf accepted)");
  cmd->add_option("--weights", cfg.weights, "per-feature cost weights");
  cmd->add_option("--target", cfg.target, "cost anchor point");
  cmd->add_option("--epsilon", cfg.epsilon, "multiplicative accuracy (or eta when additive)");
  cmd->add_option("--seed", cfg.seed, "base RNG seed");
  cmd->add_option("--trials", cfg.trials, "trial count per sweep cell");
  cmd->add_option("--query-budget", cfg.query_budget, "hard cap on oracle queries");
  cmd->add_option("--lower0", cfg.lower0, "initial certified lower bound");
  cmd->add_option("--negative-example", cfg.negative_example, "known negative point");
  cmd->add_option("--radius", cfg.radius, "body radius R for set_search");
  cmd->add_option("--samples-per-phase", cfg.samples_per_phase, "sampler N (0 = 10 D)");
  cmd->add_option("--walk-steps", cfg.walk_steps, "hit-and-run steps K (0 = 50 D)");
  cmd->add_option("--rounding-rounds", cfg.rounding_rounds, "covariance rounding rounds");
  cmd->add_option("--inner-radius-scale", cfg.inner_radius_scale, "r / R ratio for phase cap");
  cmd->add_option("--output", cfg.output_path, "CSV output path (bench)");
  cmd->add_flag("--trace", cfg.trace, "record per-iteration trace");
  cmd->add_option("--classifier-kind", cfg.classifier.kind,
                  "halfspace | random_halfspace | cost_ball | negative_halfspace");
  cmd->add_option("--classifier-normal", cfg.classifier.normal, "halfspace normal");
  cmd->add_option("--classifier-boundary", cfg.classifier.boundary_point,
                  "halfspace boundary point");
  cmd->add_option("--classifier-threshold", cfg.classifier.threshold, "cost-ball threshold");
  cmd->add_option("--classifier-level", cfg.classifier.level, "negative_halfspace level");
  cmd->add_option("--classifier-box", cfg.classifier.box_halfwidth, "bounding box halfwidth");
  cmd->add_option("--dims-list", cfg.dims_list, "sweep axis: dimensions");
  cmd->add_option("--epsilon-list", cfg.epsilon_list, "sweep axis: accuracies");
  cmd->add_option("--algorithm-list", cfg.algorithm_list, "sweep axis: algorithms");
  cmd->add_option("--seed-list", cfg.seed_list, "sweep axis: seeds");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"query-based evasion of convex-inducing classifiers"};
  app.require_subcommand(1);

  evasion::ExperimentConfig evade_cfg, bench_cfg;
  std::string evade_config_path, bench_config_path, verify_selector;

  CLI::App* evade = app.add_subcommand("evade", "run one configured evasion trial");
  add_common_flags(evade, evade_cfg, evade_config_path);

  CLI::App* bench = app.add_subcommand("bench", "run a sweep grid and emit CSV");
  add_common_flags(bench, bench_cfg, bench_config_path);

  CLI::App* verify = app.add_subcommand("verify", "run property suites");
  verify->add_option("suite", verify_selector,
                     "cost | vertex-witness | vertex-witness-mutant | subgradient | malicious | hitrun | "
                     "halfspace-mac (empty = all)");

  try {
    // Parse twice so a config file provides the base and flags override it.
    app.parse(argc, argv);
    if (evade->parsed() && !evade_config_path.empty()) {
      evade_cfg = load_base_config(evade_config_path);
      app.clear();
      app.parse(argc, argv);
    }
    if (bench->parsed() && !bench_config_path.empty()) {
      bench_cfg = load_base_config(bench_config_path);
      app.clear();
      app.parse(argc, argv);
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (evade->parsed()) {
      evasion::EvadeOutcome outcome = evasion::run_evade(evade_cfg);
      std::cout << evasion::csv_header() << '\n' << evasion::csv_row(outcome.record) << '\n';
      if (evade_cfg.trace)
        for (const auto& t : outcome.result.trace)
          std::cout << "trace iteration=" << t.iteration
                    << " lower=" << evasion::format_double(t.lower)
                    << " upper=" << evasion::format_double(t.upper) << " queries=" << t.queries
                    << " active=" << t.active_directions << '\n';
      return 0;
    }
    if (bench->parsed()) {
      const std::string out_path = resolve_output(bench_cfg.output_path);
      if (out_path.empty()) {
        evasion::run_bench(bench_cfg, std::cout);
      } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot open output file: " + out_path);
        evasion::run_bench(bench_cfg, out);
        std::cout << "wrote " << out_path << '\n';
      }
      return 0;
    }
    return evasion::run_verify(verify_selector, std::cout) == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
