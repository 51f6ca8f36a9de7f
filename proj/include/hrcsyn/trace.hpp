#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hrcsyn/interval.hpp"
#include "hrcsyn/model.hpp"

namespace hrcsyn {

/// One measured task execution, as written to the task_results collection.
/// (plan_id, seq) identifies the record; `task_id` is the task type.
struct ExecutionRecord {
  std::string plan_id;
  std::int64_t seq = 0;
  std::string task_id;
  Agent agent = Agent::Human;
  TimeInterval measured_interval;
  bool success = true;

  friend bool operator==(const ExecutionRecord&, const ExecutionRecord&) = default;
};

/// All records of one plan run, both agents.
struct ExecutionTrace {
  std::string plan_id;
  std::vector<ExecutionRecord> records;

  /// Records of one agent with a non-empty interval, ordered by start.
  std::vector<ExecutionRecord> lane(Agent agent) const;

  /// Gaps between consecutive tasks of `agent` inside its busy horizon.
  std::vector<TimeInterval> idle_segments(Agent agent) const;

  /// Latest end over all records.
  double makespan() const noexcept;

  /// Successful records carry a non-empty interval; per-agent interiors are
  /// disjoint. Throws InvalidSchedule.
  void validate() const;

  friend bool operator==(const ExecutionTrace&, const ExecutionTrace&) = default;
};

}  // namespace hrcsyn
