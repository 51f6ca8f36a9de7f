#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <vector>

#include "hrcsyn/planner.hpp"
#include "hrcsyn/report.hpp"

namespace hrcsyn::cli {

/// Store root used when --store is absent: $HRCSYN_STORE, else ./hrcsyn-store.
std::filesystem::path default_store_root();

struct SimulateOptions {
  std::optional<std::filesystem::path> config;
  std::filesystem::path store;
  std::optional<std::uint64_t> seed;  // falls back to the config seed
  int plans = 50;
};

struct SimulateSummary {
  std::vector<std::string> plan_ids;
  std::vector<double> makespans;
  std::size_t records = 0;
};

SimulateSummary cmd_simulate(const SimulateOptions& options, std::ostream& out);

struct EstimateSummary {
  std::size_t traces = 0;
  std::size_t duration_documents = 0;
  std::size_t synergy_documents = 0;
};

EstimateSummary cmd_estimate(const std::filesystem::path& store, std::ostream& out);

struct PlanOptions {
  std::optional<std::filesystem::path> config;
  std::filesystem::path store;
  std::optional<std::uint64_t> seed;
  std::uint64_t budget = 2000;
};

struct PlanSummary {
  std::string plan_id;
  CandidatePlan plan;
  double simulated_makespan = 0.0;
  bool exhaustive = false;
};

PlanSummary cmd_plan(const PlanOptions& options, std::ostream& out);

std::vector<std::filesystem::path> cmd_report(const std::filesystem::path& store, const std::filesystem::path& out_dir,
                                              std::ostream& out);

}  // namespace hrcsyn::cli
