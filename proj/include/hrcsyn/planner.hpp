#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hrcsyn/exec.hpp"
#include "hrcsyn/model.hpp"

namespace hrcsyn {

/// One task to complete. The agents it may go to are the keys of
/// `task_for_agent`, each mapped to the task type executed by that agent.
struct TaskInstance {
  std::string instance_id;
  std::map<Agent, std::string> task_for_agent;

  AgentSet eligible() const;
};

/// Task instances plus precedence pairs (before, after) indexing `tasks`.
/// A pair is one object's pick and place: both go to the same agent and
/// each task belongs to at most one pair. With `contiguous_pairs` an agent
/// holds one object at a time, so a pair's second task directly follows
/// its first.
struct PlanningDomain {
  std::vector<TaskInstance> tasks;
  std::vector<std::pair<std::size_t, std::size_t>> precedence;
  bool contiguous_pairs = false;

  /// Throws InfeasibleDomain.
  void validate() const;
};

/// Assignment in domain order plus the execution order of each agent as
/// indices into the domain.
struct CandidatePlan {
  Assignment assignment;
  std::array<std::vector<std::size_t>, 2> order;
  std::optional<double> predicted_makespan;  // set by optimize_plan

  const std::vector<std::size_t>& lane(Agent a) const { return order[static_cast<std::size_t>(a)]; }
  std::vector<std::size_t>& lane(Agent a) { return order[static_cast<std::size_t>(a)]; }
  /// Task type ids of one agent, in execution order.
  std::vector<std::string> lane_tasks(Agent a) const;

  friend bool operator==(const CandidatePlan&, const CandidatePlan&) = default;
};

/// Every instance assigned exactly once to an eligible agent, lanes consistent
/// with the assignment, precedence pairs on one agent and in order.
/// Throws InvalidSchedule.
void validate_plan(const CandidatePlan& plan, const PlanningDomain& domain);

/// Uniform eligible agent per job, uniform precedence-consistent order per
/// agent. Deterministic per seed. Throws InfeasibleDomain.
CandidatePlan random_plan(const PlanningDomain& domain, std::uint64_t seed);

inline constexpr double kFixedPointTolerance = 1e-6;
inline constexpr int kFixedPointMaxIterations = 100;

struct PredictedSchedule {
  PlanSchedule schedule;
  int iterations = 0;
};

/// Serial dispatch of both lanes from t = 0 with every task's duration set to
/// d_hat times its coupling factor, iterated until no duration moves by more
/// than kFixedPointTolerance. Throws MissingDuration or NonConvergence.
PredictedSchedule predict_schedule(const CandidatePlan& plan, const DurationTable& stats,
                                   const SynergyMatrix& synergy);

double predict_makespan(const CandidatePlan& plan, const DurationTable& stats, const SynergyMatrix& synergy);

/// Number of distinct candidate plans, saturated at `cap`.
std::uint64_t candidate_space_size(const PlanningDomain& domain, std::uint64_t cap);

struct OptimizeOptions {
  std::uint64_t budget = 2000;
  std::uint64_t seed = 0;
  ExecPolicy policy = ExecPolicy::Serial;
};

struct OptimizeResult {
  CandidatePlan best;
  std::uint64_t evaluated = 0;
  std::uint64_t failed = 0;  // candidates rejected for NonConvergence
  bool exhaustive = false;
};

/// Minimum predicted makespan over all candidates when the space fits in the
/// budget, otherwise over `budget` seeded random plans. Ties go to the
/// lexicographically smallest (assignment vector, human order, robot order).
/// Throws InfeasibleDomain, MissingDuration, or NonConvergence when no
/// candidate converges.
OptimizeResult optimize_plan(const PlanningDomain& domain, const DurationTable& stats,
                             const SynergyMatrix& synergy, const OptimizeOptions& options = {});

/// Every candidate of the domain in the exhaustive enumeration order.
std::vector<CandidatePlan> enumerate_plans(const PlanningDomain& domain);

}  // namespace hrcsyn
