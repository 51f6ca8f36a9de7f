#include "hrcsyn/campaign.hpp"

#include <fmt/format.h>

#include "hrcsyn/error.hpp"
#include "hrcsyn/seeding.hpp"

namespace hrcsyn {

namespace {

const TaskModel* find_task(const WorldConfig& config, ActionKind kind, const std::string& object, Agent agent) {
  for (const auto& t : config.tasks) {
    if (t.spec.action_kind == kind && t.object == object && t.spec.eligible_agents.contains(agent)) return &t;
  }
  return nullptr;
}

}  // namespace

PlanningDomain make_workcell_domain(const WorldConfig& config) {
  PlanningDomain domain;
  domain.contiguous_pairs = true;
  const std::pair<const char*, int> goals[] = {
      {"white", config.process.white}, {"orange", config.process.orange}, {"blue", config.process.blue}};
  for (const auto& [colour, count] : goals) {
    for (int k = 1; k <= count; ++k) {
      TaskInstance pick{fmt::format("pick_{}_{}", colour, k), {}};
      TaskInstance place{fmt::format("place_{}_{}", colour, k), {}};
      for (Agent a : kAgents) {
        const auto* p = find_task(config, ActionKind::Pick, colour, a);
        const auto* q = find_task(config, ActionKind::Place, colour, a);
        if (p != nullptr && q != nullptr) {
          pick.task_for_agent[a] = p->spec.id;
          place.task_for_agent[a] = q->spec.id;
        }
      }
      if (pick.task_for_agent.empty()) {
        throw InfeasibleDomain(fmt::format("no agent can pick and place a {} cube", colour));
      }
      domain.tasks.push_back(std::move(pick));
      domain.tasks.push_back(std::move(place));
      domain.precedence.emplace_back(domain.tasks.size() - 2, domain.tasks.size() - 1);
    }
  }
  return domain;
}

AgentProgram to_program(const CandidatePlan& plan) {
  return AgentProgram{plan.lane_tasks(Agent::Human), plan.lane_tasks(Agent::Robot)};
}

std::vector<CampaignRun> run_campaign(const WorldConfig& config, const PlanningDomain& domain, int plan_count,
                                      std::uint64_t seed, ExecPolicy policy) {
  if (plan_count < 1) throw InvalidConfig("a campaign needs at least one plan");
  config.validate();
  domain.validate();
  std::vector<CampaignRun> runs(static_cast<std::size_t>(plan_count));
  for_each_index(runs.size(), policy, [&](std::size_t k) {
    auto& run = runs[k];
    run.plan_id = fmt::format("s{}-p{:03d}", seed, k + 1);
    run.plan_seed = derive_seed(seed, 2 * k);
    run.simulation_seed = derive_seed(seed, 2 * k + 1);
    run.plan = random_plan(domain, run.plan_seed);
    run.simulation = simulate_plan(to_program(run.plan), config, run.simulation_seed, run.plan_id);
  });
  return runs;
}

std::vector<ExecutionTrace> campaign_traces(const std::vector<CampaignRun>& runs) {
  std::vector<ExecutionTrace> out;
  out.reserve(runs.size());
  for (const auto& run : runs) out.push_back(run.simulation.trace);
  return out;
}

}  // namespace hrcsyn
