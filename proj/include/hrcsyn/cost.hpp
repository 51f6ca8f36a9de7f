#pragma once

#include <span>

#include "hrcsyn/model.hpp"

namespace hrcsyn {

/// Sum of expected durations of the instances assigned to `agent`.
/// Throws MissingDuration.
double nominal_agent_plan_duration(const Assignment& assignment, const DurationTable& stats, Agent agent);

/// Multiplier applied to the expected duration of one task: the
/// overlap-weighted synergy over concurrent counterpart tasks, with the
/// uncovered fraction of the task carrying coefficient 1.
double coupling_factor(const ScheduledTask& own, std::span<const ScheduledTask> counterpart_lane,
                       const SynergyMatrix& synergy);

/// Synergy-extended plan duration of one agent: the sum over its tasks of
/// expected duration times coupling_factor against the other lane.
double synergy_agent_plan_duration(const PlanSchedule& schedule, const DurationTable& stats,
                                   const SynergyMatrix& synergy, Agent agent);

/// Makespan: max of the two agents' plan durations.
double plan_cost(double human_duration, double robot_duration);

}  // namespace hrcsyn
