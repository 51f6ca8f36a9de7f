#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hrcsyn/model.hpp"
#include "hrcsyn/trace.hpp"

namespace hrcsyn {

enum class Zone { Red, Orange, Free };

/// Share of a human task spent in each safety zone. The human traverses the
/// phases in order red, orange, free.
struct ZoneExposureProfile {
  double red_frac = 0.0;
  double orange_frac = 0.0;
  double free_frac = 1.0;

  /// Fractions non-negative and summing to 1. Throws InvalidConfig.
  void validate() const;

  friend bool operator==(const ZoneExposureProfile&, const ZoneExposureProfile&) = default;
};

struct SpeedFactors {
  double red = 0.0;
  double orange = 0.5;
  double free = 1.0;

  friend bool operator==(const SpeedFactors&, const SpeedFactors&) = default;
};

/// A catalog task plus the simulation parameters attached to it.
struct TaskModel {
  TaskSpec spec;
  std::string object;  // object colour handled by the task
  double base_duration = 1.0;
  double cv = 0.0;

  friend bool operator==(const TaskModel&, const TaskModel&) = default;
};

/// Number of pick/place jobs per object colour the process has to complete.
struct ProcessGoal {
  int white = 4;  // human only
  int orange = 4; // robot only
  int blue = 4;   // either agent

  friend bool operator==(const ProcessGoal&, const ProcessGoal&) = default;
};

struct WorldConfig {
  std::vector<TaskModel> tasks;
  std::map<std::string, int> objects;                 // colour -> cubes on the table
  std::map<std::string, ZoneExposureProfile> zones;   // task region -> exposure
  SpeedFactors speed;
  ProcessGoal process;
  std::uint64_t seed = 1;

  const TaskModel& task(std::string_view id) const;
  std::vector<TaskSpec> catalog() const;
  std::vector<std::string> task_ids(Agent agent) const;
  /// Exposure of the region a task works in; free when the region is unmapped.
  ZoneExposureProfile exposure(std::string_view task_id) const;

  /// Throws InvalidConfig.
  void validate() const;

  friend bool operator==(const WorldConfig&, const WorldConfig&) = default;
};

/// The collaborative workcell: human white/blue, robot orange/blue, pick 8 s,
/// place 6 s, cv 0.1, blue tasks of the human in the collaborative region.
WorldConfig default_world_config();

/// Reads a YAML file; every key is optional and overrides the defaults.
/// Throws InvalidConfig.
WorldConfig load_world_config(const std::filesystem::path& path);
WorldConfig parse_world_config(const std::string& yaml_text);

/// Human activity as seen by the robot's safety system; nullopt = idle.
using HumanState = std::optional<Zone>;

double robot_speed_factor(const HumanState& human, const WorldConfig& config);

/// Normal(base, cv * base) truncated below at 0.2 * base by rejection.
/// cv == 0 returns base without consuming randomness.
double sample_task_duration(double base, double cv, std::mt19937_64& rng);

struct AgentProgram {
  std::vector<std::string> human;  // task type ids in execution order
  std::vector<std::string> robot;

  const std::vector<std::string>& lane(Agent a) const { return a == Agent::Human ? human : robot; }
};

/// Checks eligibility and that no agent places more objects of a colour
/// than it has picked. Throws InvalidProgram.
void validate_program(const AgentProgram& program, const WorldConfig& config);

struct SimulationResult {
  ExecutionTrace trace;
  /// Aligned with trace.records: realized duration for human tasks, work
  /// units (nominal seconds at full speed) for robot tasks.
  std::vector<double> work;
};

/// Runs both agents' programs back to back from t = 0. Human tasks follow
/// their own noisy duration; robot tasks consume their work at the speed
/// factor set by the human's current zone. Records are emitted human lane
/// first, then robot lane, with seq numbering in that order.
SimulationResult simulate_plan(const AgentProgram& program, const WorldConfig& config, std::uint64_t seed,
                               const std::string& plan_id = "plan");

}  // namespace hrcsyn
