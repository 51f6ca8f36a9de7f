#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hrcsyn/interval.hpp"

namespace hrcsyn {

enum class Agent : std::uint8_t { Human = 0, Robot = 1 };

inline constexpr std::array<Agent, 2> kAgents{Agent::Human, Agent::Robot};

constexpr Agent counterpart(Agent a) noexcept {
  return a == Agent::Human ? Agent::Robot : Agent::Human;
}

std::string_view to_string(Agent a) noexcept;
/// Accepts "human" / "robot" (also "H" / "R"). Throws std::invalid_argument.
Agent parse_agent(std::string_view text);

/// Non-empty subset of {Human, Robot}.
class AgentSet {
 public:
  constexpr AgentSet() = default;
  constexpr AgentSet(std::initializer_list<Agent> agents) {
    for (Agent a : agents) insert(a);
  }

  constexpr void insert(Agent a) noexcept { bits_ |= bit(a); }
  constexpr bool contains(Agent a) const noexcept { return (bits_ & bit(a)) != 0; }
  constexpr bool empty() const noexcept { return bits_ == 0; }
  constexpr int size() const noexcept { return (bits_ & 1) + ((bits_ >> 1) & 1); }
  std::vector<Agent> members() const;

  friend constexpr bool operator==(AgentSet, AgentSet) = default;

 private:
  static constexpr std::uint8_t bit(Agent a) noexcept {
    return static_cast<std::uint8_t>(1u << static_cast<unsigned>(a));
  }
  std::uint8_t bits_ = 0;
};

enum class ActionKind : std::uint8_t { Pick, Place, Goto };

std::string_view to_string(ActionKind k) noexcept;
ActionKind parse_action_kind(std::string_view text);

/// Symbolic task type as stored in the task_properties collection.
struct TaskSpec {
  std::string id;
  ActionKind action_kind = ActionKind::Pick;
  AgentSet eligible_agents;
  std::string region;
  std::string description;

  friend bool operator==(const TaskSpec&, const TaskSpec&) = default;
};

/// Checks non-empty eligibility and id uniqueness. Throws InvalidConfig.
void validate_catalog(std::span<const TaskSpec> catalog);

/// One task instance of a plan bound to an agent. `task_id` names the task
/// type (catalog key); `instance_id` distinguishes repeated executions.
struct AssignedTask {
  std::string instance_id;
  std::string task_id;
  Agent agent = Agent::Human;

  friend bool operator==(const AssignedTask&, const AssignedTask&) = default;
};

using Assignment = std::vector<AssignedTask>;

/// Every instance appears once and its agent is eligible for its task type.
/// Throws InvalidSchedule naming the offending instance.
void validate_assignment(const Assignment& assignment, std::span<const TaskSpec> catalog);

struct ScheduledTask {
  std::string task_id;
  Agent agent = Agent::Human;
  TimeInterval interval;

  friend bool operator==(const ScheduledTask&, const ScheduledTask&) = default;
};

/// Per-agent timelines, each ordered by start time.
struct PlanSchedule {
  std::vector<ScheduledTask> human;
  std::vector<ScheduledTask> robot;

  const std::vector<ScheduledTask>& lane(Agent a) const { return a == Agent::Human ? human : robot; }
  std::vector<ScheduledTask>& lane(Agent a) { return a == Agent::Human ? human : robot; }

  /// Latest end over all scheduled tasks, 0 when nothing is scheduled.
  double horizon() const noexcept;

  /// Lane tags match, intervals non-empty, ordered, interiors disjoint.
  /// Throws InvalidSchedule.
  void validate() const;
};

struct DurationStats {
  std::string task_id;
  Agent agent = Agent::Human;
  double mean = 0.0;
  double std = 0.0;
  std::int64_t count = 0;

  friend bool operator==(const DurationStats&, const DurationStats&) = default;
};

/// Duration statistics keyed by task type id.
class DurationTable {
 public:
  DurationTable() = default;
  explicit DurationTable(std::span<const DurationStats> stats);

  void put(DurationStats stats);
  const DurationStats* find(std::string_view task_id) const;
  /// Throws MissingDuration.
  const DurationStats& require(std::string_view task_id) const;
  double mean(std::string_view task_id) const { return require(task_id).mean; }

  bool empty() const noexcept { return stats_.empty(); }
  std::size_t size() const noexcept { return stats_.size(); }
  auto begin() const { return stats_.begin(); }
  auto end() const { return stats_.end(); }

  friend bool operator==(const DurationTable&, const DurationTable&) = default;

 private:
  std::map<std::string, DurationStats, std::less<>> stats_;
};

struct SynergyEntry {
  double coefficient = 1.0;
  double std_error = 0.0;
  std::int64_t sample_count = 0;
  bool low_confidence = false;  // fewer than kMinConfidentSamples rows
  bool ridge = false;           // column touched by ridge damping
  bool clamped = false;         // raw estimate was not positive
  std::string diagnostic;       // error kind when the row could not be fitted

  friend bool operator==(const SynergyEntry&, const SynergyEntry&) = default;
};

inline constexpr std::int64_t kMinConfidentSamples = 3;

/// Coefficients s_{i,j} for both agents. Rows are the agent's own task
/// types, columns the counterpart agent's task types. Pairs never set read
/// back as the neutral entry (coefficient 1, sample_count 0).
class SynergyMatrix {
 public:
  using Key = std::pair<std::string, std::string>;

  void set_labels(Agent own, std::vector<std::string> rows, std::vector<std::string> cols);
  const std::vector<std::string>& rows(Agent own) const { return side(own).rows; }
  const std::vector<std::string>& cols(Agent own) const { return side(own).cols; }

  void set(Agent own, const std::string& own_task, const std::string& other_task, SynergyEntry entry);
  SynergyEntry get(Agent own, std::string_view own_task, std::string_view other_task) const;
  double coefficient(Agent own, std::string_view own_task, std::string_view other_task) const;

  const std::map<Key, SynergyEntry, std::less<>>& entries(Agent own) const { return side(own).entries; }

  friend bool operator==(const SynergyMatrix&, const SynergyMatrix&) = default;

 private:
  struct Side {
    std::vector<std::string> rows;
    std::vector<std::string> cols;
    std::map<Key, SynergyEntry, std::less<>> entries;
    friend bool operator==(const Side&, const Side&) = default;
  };
  const Side& side(Agent a) const { return sides_[static_cast<std::size_t>(a)]; }
  Side& side(Agent a) { return sides_[static_cast<std::size_t>(a)]; }

  std::array<Side, 2> sides_;
};

}  // namespace hrcsyn
