#include "hrcsyn/cost.hpp"

#include <algorithm>
#include <stdexcept>

namespace hrcsyn {

double nominal_agent_plan_duration(const Assignment& assignment, const DurationTable& stats, Agent agent) {
  double total = 0.0;
  for (const auto& item : assignment) {
    if (item.agent == agent) total += stats.mean(item.task_id);
  }
  return total;
}

double coupling_factor(const ScheduledTask& own, std::span<const ScheduledTask> counterpart_lane,
                       const SynergyMatrix& synergy) {
  double weighted = 0.0;
  double covered = 0.0;
  for (const auto& other : counterpart_lane) {
    const double delta = overlap_ratio(own.interval, other.interval);
    if (delta == 0.0) continue;
    weighted += synergy.coefficient(own.agent, own.task_id, other.task_id) * delta;
    covered += delta;
  }
  // Counterpart tasks run sequentially, so coverage can exceed 1 only by
  // rounding.
  covered = std::min(covered, 1.0);
  return weighted + (1.0 - covered);
}

double synergy_agent_plan_duration(const PlanSchedule& schedule, const DurationTable& stats,
                                   const SynergyMatrix& synergy, Agent agent) {
  const auto& own_lane = schedule.lane(agent);
  const auto& other_lane = schedule.lane(counterpart(agent));
  double total = 0.0;
  for (const auto& task : own_lane) {
    total += stats.mean(task.task_id) * coupling_factor(task, other_lane, synergy);
  }
  return total;
}

double plan_cost(double human_duration, double robot_duration) {
  if (human_duration < 0.0 || robot_duration < 0.0) {
    throw std::invalid_argument("plan durations must be non-negative");
  }
  return std::max(human_duration, robot_duration);
}

}  // namespace hrcsyn
