// Command-line front end: simulate, sweep, verify, analyze.

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "tatonnement/scenario.hpp"

namespace sc = tatonnement::scenario;

namespace {

struct Options {
  std::string config;
  std::string economy;
  std::string out;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

int with_scenario(const Options& opt, int (*run)(const sc::ScenarioConfig&, std::ostream&)) {
  sc::ScenarioConfig cfg;
  try {
    cfg = sc::load_scenario(opt.config);
  } catch (const tatonnement::Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return sc::kConfigError;
  }
  if (!opt.out.empty()) cfg.output_dir = opt.out;
  if (opt.seed) cfg.seed = *opt.seed;
  const int code = run(cfg, std::cerr);
  if (!opt.quiet && code == sc::kSuccess) std::cout << "wrote " << cfg.output_dir.string() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classical and second-order tatonnement price dynamics"};
  app.require_subcommand(1);
  Options opt;

  const auto add_common = [&opt](CLI::App* cmd) {
    cmd->add_option("--out", opt.out, "Output directory (overrides the scenario's output_dir)");
    cmd->add_option("--seed", opt.seed, "Seed for random initial prices");
    cmd->add_flag("--quiet", opt.quiet, "Suppress progress output");
  };

  auto* simulate = app.add_subcommand("simulate", "Run one price-adjustment scenario");
  simulate->add_option("--config", opt.config, "Scenario JSON")->required();
  add_common(simulate);

  auto* sweep = app.add_subcommand("sweep", "Cycle-angle table over a list of gamma_hat values");
  sweep->add_option("--config", opt.config, "Scenario JSON")->required();
  add_common(sweep);

  auto* analyze = app.add_subcommand("analyze", "Stability report at the equilibrium");
  analyze->add_option("--config", opt.config, "Scenario JSON")->required();
  add_common(analyze);

  auto* verify = app.add_subcommand("verify", "Property battery for one economy");
  auto* verify_cfg = verify->add_option("--config", opt.config, "Scenario JSON");
  verify->add_option("--economy", opt.economy, "Economy JSON")->excludes(verify_cfg);
  add_common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : sc::kConfigError;
  }

  if (*simulate) return with_scenario(opt, sc::run_simulate);
  if (*sweep) return with_scenario(opt, sc::run_sweep);
  if (*analyze) return with_scenario(opt, sc::run_analyze);

  std::string economy = opt.economy;
  std::uint64_t seed = opt.seed.value_or(0);
  if (economy.empty()) {
    if (opt.config.empty()) {
      std::cerr << "config error: verify needs --economy or --config\n";
      return sc::kConfigError;
    }
    try {
      const auto cfg = sc::load_scenario(opt.config);
      economy = cfg.economy_path.string();
      if (!opt.seed) seed = cfg.seed;
    } catch (const tatonnement::Error& e) {
      std::cerr << "config error: " << e.what() << '\n';
      return sc::kConfigError;
    }
  }
  std::ostringstream report;
  const int code = sc::run_verify(economy, seed, report);
  if (!opt.quiet || code != sc::kSuccess) std::cout << report.str();
  return code;
}
