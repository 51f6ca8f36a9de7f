#include "hrcsyn/model.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "hrcsyn/error.hpp"

namespace hrcsyn {

std::string_view to_string(Agent a) noexcept { return a == Agent::Human ? "human" : "robot"; }

Agent parse_agent(std::string_view text) {
  if (text == "human" || text == "H") return Agent::Human;
  if (text == "robot" || text == "R") return Agent::Robot;
  throw std::invalid_argument("unknown agent '" + std::string(text) + "'");
}

std::vector<Agent> AgentSet::members() const {
  std::vector<Agent> out;
  for (Agent a : kAgents) {
    if (contains(a)) out.push_back(a);
  }
  return out;
}

std::string_view to_string(ActionKind k) noexcept {
  switch (k) {
    case ActionKind::Pick: return "pick";
    case ActionKind::Place: return "place";
    case ActionKind::Goto: return "goto";
  }
  return "pick";
}

ActionKind parse_action_kind(std::string_view text) {
  if (text == "pick") return ActionKind::Pick;
  if (text == "place") return ActionKind::Place;
  if (text == "goto") return ActionKind::Goto;
  throw std::invalid_argument("unknown action kind '" + std::string(text) + "'");
}

void validate_catalog(std::span<const TaskSpec> catalog) {
  std::set<std::string_view> seen;
  for (const auto& spec : catalog) {
    if (spec.id.empty()) throw InvalidConfig("task with empty id");
    if (spec.eligible_agents.empty()) throw InvalidConfig("task '" + spec.id + "' has no eligible agent");
    if (!seen.insert(spec.id).second) throw InvalidConfig("duplicate task id '" + spec.id + "'");
  }
}

void validate_assignment(const Assignment& assignment, std::span<const TaskSpec> catalog) {
  std::set<std::string_view> seen;
  for (const auto& item : assignment) {
    if (!seen.insert(item.instance_id).second) {
      throw InvalidSchedule("instance '" + item.instance_id + "' assigned more than once");
    }
    auto it = std::find_if(catalog.begin(), catalog.end(),
                           [&](const TaskSpec& s) { return s.id == item.task_id; });
    if (it == catalog.end()) {
      throw InvalidSchedule("instance '" + item.instance_id + "' has unknown task '" + item.task_id + "'");
    }
    if (!it->eligible_agents.contains(item.agent)) {
      throw InvalidSchedule("instance '" + item.instance_id + "' assigned to ineligible agent " +
                            std::string(to_string(item.agent)));
    }
  }
}

double PlanSchedule::horizon() const noexcept {
  double h = 0.0;
  for (const auto* lane : {&human, &robot}) {
    for (const auto& t : *lane) {
      if (!t.interval.is_empty()) h = std::max(h, t.interval.end());
    }
  }
  return h;
}

void PlanSchedule::validate() const {
  for (Agent a : kAgents) {
    const auto& tasks = lane(a);
    for (std::size_t k = 0; k < tasks.size(); ++k) {
      const auto& t = tasks[k];
      if (t.agent != a) {
        throw InvalidSchedule("task '" + t.task_id + "' filed under the wrong agent lane");
      }
      if (t.interval.is_empty()) throw InvalidSchedule("task '" + t.task_id + "' has an empty interval");
      if (k > 0 && t.interval.start() < tasks[k - 1].interval.end() - kTimeTolerance) {
        throw InvalidSchedule("tasks '" + tasks[k - 1].task_id + "' and '" + t.task_id +
                              "' overlap on the " + std::string(to_string(a)) + " lane");
      }
    }
  }
}

DurationTable::DurationTable(std::span<const DurationStats> stats) {
  for (const auto& s : stats) put(s);
}

void DurationTable::put(DurationStats stats) {
  auto key = stats.task_id;
  stats_.insert_or_assign(std::move(key), std::move(stats));
}

const DurationStats* DurationTable::find(std::string_view task_id) const {
  auto it = stats_.find(task_id);
  return it == stats_.end() ? nullptr : &it->second;
}

const DurationStats& DurationTable::require(std::string_view task_id) const {
  if (const auto* s = find(task_id)) return *s;
  throw MissingDuration("no expected duration for task '" + std::string(task_id) + "'");
}

void SynergyMatrix::set_labels(Agent own, std::vector<std::string> rows, std::vector<std::string> cols) {
  side(own).rows = std::move(rows);
  side(own).cols = std::move(cols);
}

void SynergyMatrix::set(Agent own, const std::string& own_task, const std::string& other_task,
                        SynergyEntry entry) {
  if (!(entry.coefficient > 0.0)) {
    throw std::invalid_argument("synergy coefficient must be positive for (" + own_task + ", " +
                                other_task + ")");
  }
  auto& s = side(own);
  if (std::find(s.rows.begin(), s.rows.end(), own_task) == s.rows.end()) s.rows.push_back(own_task);
  if (std::find(s.cols.begin(), s.cols.end(), other_task) == s.cols.end()) s.cols.push_back(other_task);
  s.entries.insert_or_assign(Key{own_task, other_task}, std::move(entry));
}

SynergyEntry SynergyMatrix::get(Agent own, std::string_view own_task, std::string_view other_task) const {
  const auto& entries = side(own).entries;
  auto it = entries.find(Key{std::string(own_task), std::string(other_task)});
  return it == entries.end() ? SynergyEntry{} : it->second;
}

double SynergyMatrix::coefficient(Agent own, std::string_view own_task, std::string_view other_task) const {
  const auto& entries = side(own).entries;
  auto it = entries.find(Key{std::string(own_task), std::string(other_task)});
  return it == entries.end() ? 1.0 : it->second.coefficient;
}

}  // namespace hrcsyn
