#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "hrcsyn/error.hpp"

int main(int argc, char** argv) {
  using namespace hrcsyn::cli;

  CLI::App app{"Learn task durations and human-robot synergy coefficients from execution traces"};
  app.require_subcommand(1);

  std::string config;
  std::string store = default_store_root().string();
  std::uint64_t seed = 0;
  int plans = 50;
  std::uint64_t budget = 2000;
  std::string out_dir = "report";

  auto* simulate = app.add_subcommand("simulate", "Simulate random plans and record task results");
  simulate->add_option("--config", config, "World config (YAML)")->check(CLI::ExistingFile);
  simulate->add_option("--store", store, "Store root directory")->capture_default_str();
  auto* sim_seed = simulate->add_option("--seed", seed, "Campaign seed (default: config seed)");
  simulate->add_option("--plans", plans, "Number of random plans")->capture_default_str()->check(CLI::PositiveNumber);

  auto* estimate = app.add_subcommand("estimate", "Estimate expected durations and synergy coefficients");
  estimate->add_option("--store", store, "Store root directory")->capture_default_str();

  auto* plan = app.add_subcommand("plan", "Search for the plan with the lowest predicted makespan");
  plan->add_option("--config", config, "World config (YAML)")->check(CLI::ExistingFile);
  plan->add_option("--store", store, "Store root directory")->capture_default_str();
  auto* plan_seed = plan->add_option("--seed", seed, "Search seed (default: config seed)");
  plan->add_option("--budget", budget, "Candidate evaluations")->capture_default_str()->check(CLI::PositiveNumber);

  auto* report = app.add_subcommand("report", "Write CSV tables and SVG heatmaps");
  report->add_option("--store", store, "Store root directory")->capture_default_str();
  report->add_option("--out", out_dir, "Output directory")->capture_default_str();

  // Usage errors exit with 2, failures while running a command with 1.
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  const auto config_path = [&]() -> std::optional<std::filesystem::path> {
    if (config.empty()) return std::nullopt;
    return std::filesystem::path(config);
  };

  try {
    if (simulate->parsed()) {
      SimulateOptions o{config_path(), store, std::nullopt, plans};
      if (*sim_seed) o.seed = seed;
      cmd_simulate(o, std::cout);
    } else if (estimate->parsed()) {
      cmd_estimate(store, std::cout);
    } else if (plan->parsed()) {
      PlanOptions o{config_path(), store, std::nullopt, budget};
      if (*plan_seed) o.seed = seed;
      cmd_plan(o, std::cout);
    } else if (report->parsed()) {
      cmd_report(store, out_dir, std::cout);
    }
  } catch (const hrcsyn::Error& e) {
    std::cerr << "hrcsyn: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "hrcsyn: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
