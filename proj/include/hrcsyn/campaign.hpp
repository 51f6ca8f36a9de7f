#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hrcsyn/exec.hpp"
#include "hrcsyn/planner.hpp"
#include "hrcsyn/simulator.hpp"

namespace hrcsyn {

/// Pick/place jobs for the configured process goal. Each job may go to any
/// agent that has both a pick and a place task for the job's colour.
PlanningDomain make_workcell_domain(const WorldConfig& config);

AgentProgram to_program(const CandidatePlan& plan);

struct CampaignRun {
  std::string plan_id;
  std::uint64_t plan_seed = 0;
  std::uint64_t simulation_seed = 0;
  CandidatePlan plan;
  SimulationResult simulation;
};

/// Draws `plan_count` random plans and simulates each one. Run k uses seeds
/// derived from (seed, k) only, so the Serial and Parallel policies return
/// identical runs.
std::vector<CampaignRun> run_campaign(const WorldConfig& config, const PlanningDomain& domain, int plan_count,
                                      std::uint64_t seed, ExecPolicy policy = ExecPolicy::Serial);

std::vector<ExecutionTrace> campaign_traces(const std::vector<CampaignRun>& runs);

}  // namespace hrcsyn
