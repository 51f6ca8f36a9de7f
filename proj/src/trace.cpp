#include "hrcsyn/trace.hpp"

#include <algorithm>

#include "hrcsyn/error.hpp"

namespace hrcsyn {

std::vector<ExecutionRecord> ExecutionTrace::lane(Agent agent) const {
  std::vector<ExecutionRecord> out;
  for (const auto& r : records) {
    if (r.agent == agent && !r.measured_interval.is_empty()) out.push_back(r);
  }
  std::stable_sort(out.begin(), out.end(), [](const ExecutionRecord& a, const ExecutionRecord& b) {
    return a.measured_interval.start() < b.measured_interval.start();
  });
  return out;
}

std::vector<TimeInterval> ExecutionTrace::idle_segments(Agent agent) const {
  std::vector<TimeInterval> gaps;
  const auto tasks = lane(agent);
  for (std::size_t k = 1; k < tasks.size(); ++k) {
    const double from = tasks[k - 1].measured_interval.end();
    const double to = tasks[k].measured_interval.start();
    if (to - from > kTimeTolerance) gaps.emplace_back(from, to);
  }
  return gaps;
}

double ExecutionTrace::makespan() const noexcept {
  double h = 0.0;
  for (const auto& r : records) {
    if (!r.measured_interval.is_empty()) h = std::max(h, r.measured_interval.end());
  }
  return h;
}

void ExecutionTrace::validate() const {
  for (const auto& r : records) {
    if (r.success && r.measured_interval.is_empty()) {
      throw InvalidSchedule("successful record " + plan_id + "/" + std::to_string(r.seq) +
                            " has no measured interval");
    }
  }
  for (Agent a : kAgents) {
    const auto tasks = lane(a);
    for (std::size_t k = 1; k < tasks.size(); ++k) {
      if (tasks[k].measured_interval.start() < tasks[k - 1].measured_interval.end() - kTimeTolerance) {
        throw InvalidSchedule("overlapping " + std::string(to_string(a)) + " records in plan " + plan_id);
      }
    }
  }
}

}  // namespace hrcsyn
