#include "hrcsyn/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "hrcsyn/error.hpp"

namespace hrcsyn {

void ZoneExposureProfile::validate() const {
  if (red_frac < 0.0 || orange_frac < 0.0 || free_frac < 0.0) {
    throw InvalidConfig("zone fractions must be non-negative");
  }
  if (std::abs(red_frac + orange_frac + free_frac - 1.0) > 1e-9) {
    throw InvalidConfig("zone fractions must sum to 1");
  }
}

const TaskModel& WorldConfig::task(std::string_view id) const {
  auto it = std::find_if(tasks.begin(), tasks.end(), [&](const TaskModel& t) { return t.spec.id == id; });
  if (it == tasks.end()) throw InvalidConfig("unknown task '" + std::string(id) + "'");
  return *it;
}

std::vector<TaskSpec> WorldConfig::catalog() const {
  std::vector<TaskSpec> out;
  out.reserve(tasks.size());
  for (const auto& t : tasks) out.push_back(t.spec);
  return out;
}

std::vector<std::string> WorldConfig::task_ids(Agent agent) const {
  std::vector<std::string> out;
  for (const auto& t : tasks) {
    if (t.spec.eligible_agents.contains(agent)) out.push_back(t.spec.id);
  }
  return out;
}

ZoneExposureProfile WorldConfig::exposure(std::string_view task_id) const {
  auto it = zones.find(task(task_id).spec.region);
  return it == zones.end() ? ZoneExposureProfile{} : it->second;
}

void WorldConfig::validate() const {
  validate_catalog(catalog());
  for (const auto& t : tasks) {
    if (!(t.base_duration > 0.0)) throw InvalidConfig("task '" + t.spec.id + "' needs a positive base duration");
    if (!(t.cv >= 0.0)) throw InvalidConfig("task '" + t.spec.id + "' needs a non-negative cv");
  }
  for (const auto& [region, profile] : zones) {
    try {
      profile.validate();
    } catch (const InvalidConfig& e) {
      throw InvalidConfig("zone '" + region + "': " + e.what());
    }
  }
  if (speed.red != 0.0) throw InvalidConfig("red zone speed factor must be 0");
  if (speed.free != 1.0) throw InvalidConfig("free zone speed factor must be 1");
  if (speed.orange < 0.0 || speed.orange > 1.0) throw InvalidConfig("orange speed factor must lie in [0, 1]");
  const auto available = [&](const char* colour) {
    auto it = objects.find(colour);
    return it == objects.end() ? 0 : it->second;
  };
  if (process.white < 0 || process.orange < 0 || process.blue < 0) {
    throw InvalidConfig("process goal counts must be non-negative");
  }
  if (process.white > available("white") || process.orange > available("orange") ||
      process.blue > available("blue")) {
    throw InvalidConfig("process goal needs more cubes than the table holds");
  }
}

WorldConfig default_world_config() {
  WorldConfig c;
  const auto add = [&](std::string id, ActionKind kind, std::string object, Agent agent, std::string region,
                       double base, std::string description) {
    c.tasks.push_back(TaskModel{TaskSpec{std::move(id), kind, AgentSet{agent}, std::move(region), std::move(description)},
                                std::move(object), base, 0.1});
  };
  add("pick_white", ActionKind::Pick, "white", Agent::Human, "human_table", 8.0, "Pick a white cube from the human table");
  add("place_white", ActionKind::Place, "white", Agent::Human, "human_release", 6.0, "Place a white cube in the human release area");
  add("pick_blue_h", ActionKind::Pick, "blue", Agent::Human, "collaborative", 8.0, "Pick a blue cube from the shared area");
  add("place_blue_h", ActionKind::Place, "blue", Agent::Human, "collaborative", 6.0, "Place a blue cube, reaching across the shared area");
  add("pick_orange", ActionKind::Pick, "orange", Agent::Robot, "robot_table", 8.0, "Pick an orange cube from the robot table");
  add("place_orange", ActionKind::Place, "orange", Agent::Robot, "robot_release", 6.0, "Place an orange cube in the robot release area");
  add("pick_blue_r", ActionKind::Pick, "blue", Agent::Robot, "collaborative", 8.0, "Pick a blue cube from the shared area");
  add("place_blue_r", ActionKind::Place, "blue", Agent::Robot, "robot_release", 6.0, "Place a blue cube in the robot release area");
  c.objects = {{"white", 6}, {"orange", 6}, {"blue", 6}};
  c.zones = {
      {"collaborative", ZoneExposureProfile{0.3, 0.5, 0.2}},
      {"human_table", ZoneExposureProfile{0.0, 0.0, 1.0}},
      {"human_release", ZoneExposureProfile{0.0, 0.0, 1.0}},
  };
  return c;
}

namespace {

template <typename T>
T scalar(const YAML::Node& node, const std::string& where) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception& e) {
    throw InvalidConfig("bad value for '" + where + "': " + e.what());
  }
}

AgentSet parse_agents(const YAML::Node& node, const std::string& where) {
  if (!node.IsSequence()) throw InvalidConfig("'" + where + "' must be a list of agents");
  AgentSet set;
  for (const auto& a : node) {
    try {
      set.insert(parse_agent(scalar<std::string>(a, where)));
    } catch (const std::invalid_argument& e) {
      throw InvalidConfig(std::string(e.what()) + " in '" + where + "'");
    }
  }
  return set;
}

void apply_task(TaskModel& t, const YAML::Node& node, double default_cv) {
  const std::string where = "tasks." + t.spec.id;
  if (node["action"]) {
    try {
      t.spec.action_kind = parse_action_kind(scalar<std::string>(node["action"], where + ".action"));
    } catch (const std::invalid_argument& e) {
      throw InvalidConfig(std::string(e.what()) + " in '" + where + "'");
    }
  }
  if (node["object"]) t.object = scalar<std::string>(node["object"], where + ".object");
  if (node["agents"]) t.spec.eligible_agents = parse_agents(node["agents"], where + ".agents");
  if (node["region"]) t.spec.region = scalar<std::string>(node["region"], where + ".region");
  if (node["description"]) t.spec.description = scalar<std::string>(node["description"], where + ".description");
  if (node["base_duration"]) t.base_duration = scalar<double>(node["base_duration"], where + ".base_duration");
  t.cv = node["cv"] ? scalar<double>(node["cv"], where + ".cv") : default_cv;
}

}  // namespace

WorldConfig parse_world_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw InvalidConfig(std::string("malformed YAML: ") + e.what());
  }
  WorldConfig c = default_world_config();
  if (root.IsNull()) return c;
  if (!root.IsMap()) throw InvalidConfig("world config must be a mapping");

  if (root["seed"]) c.seed = scalar<std::uint64_t>(root["seed"], "seed");
  if (const auto s = root["speed_factors"]) {
    if (s["red"]) c.speed.red = scalar<double>(s["red"], "speed_factors.red");
    if (s["orange"]) c.speed.orange = scalar<double>(s["orange"], "speed_factors.orange");
    if (s["free"]) c.speed.free = scalar<double>(s["free"], "speed_factors.free");
  }
  if (const auto o = root["objects"]) {
    for (const auto& kv : o) c.objects[kv.first.as<std::string>()] = scalar<int>(kv.second, "objects");
  }
  if (const auto p = root["process"]) {
    if (p["white"]) c.process.white = scalar<int>(p["white"], "process.white");
    if (p["orange"]) c.process.orange = scalar<int>(p["orange"], "process.orange");
    if (p["blue"]) c.process.blue = scalar<int>(p["blue"], "process.blue");
  }
  std::optional<double> default_cv;
  if (root["defaults"] && root["defaults"]["cv"]) default_cv = scalar<double>(root["defaults"]["cv"], "defaults.cv");
  if (default_cv) {
    for (auto& t : c.tasks) t.cv = *default_cv;
  }
  if (const auto tasks = root["tasks"]) {
    if (!tasks.IsSequence()) throw InvalidConfig("'tasks' must be a list");
    for (const auto& node : tasks) {
      if (!node["id"]) throw InvalidConfig("task entry without 'id'");
      const auto id = scalar<std::string>(node["id"], "tasks.id");
      auto it = std::find_if(c.tasks.begin(), c.tasks.end(), [&](const TaskModel& t) { return t.spec.id == id; });
      if (it == c.tasks.end()) {
        TaskModel fresh;
        fresh.spec.id = id;
        fresh.cv = default_cv.value_or(0.1);
        c.tasks.push_back(fresh);
        it = std::prev(c.tasks.end());
      }
      apply_task(*it, node, it->cv);
    }
  }
  if (const auto zones = root["zones"]) {
    for (const auto& kv : zones) {
      const auto region = kv.first.as<std::string>();
      const std::string where = "zones." + region;
      ZoneExposureProfile z{0.0, 0.0, 0.0};
      if (kv.second["red"]) z.red_frac = scalar<double>(kv.second["red"], where + ".red");
      if (kv.second["orange"]) z.orange_frac = scalar<double>(kv.second["orange"], where + ".orange");
      if (kv.second["free"]) {
        z.free_frac = scalar<double>(kv.second["free"], where + ".free");
      } else {
        z.free_frac = 1.0 - z.red_frac - z.orange_frac;
      }
      c.zones[region] = z;
    }
  }
  c.validate();
  return c;
}

WorldConfig load_world_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidConfig("cannot read world config '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_world_config(text.str());
}

double robot_speed_factor(const HumanState& human, const WorldConfig& config) {
  if (!human) return config.speed.free;
  switch (*human) {
    case Zone::Red: return config.speed.red;
    case Zone::Orange: return config.speed.orange;
    case Zone::Free: return config.speed.free;
  }
  return config.speed.free;
}

double sample_task_duration(double base, double cv, std::mt19937_64& rng) {
  if (cv <= 0.0) return base;
  std::normal_distribution<double> dist(base, cv * base);
  const double floor = 0.2 * base;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const double x = dist(rng);
    if (x >= floor) return x;
  }
  return floor;
}

void validate_program(const AgentProgram& program, const WorldConfig& config) {
  for (Agent agent : kAgents) {
    std::map<std::string, int> holding;
    for (const auto& id : program.lane(agent)) {
      const TaskModel* model = nullptr;
      try {
        model = &config.task(id);
      } catch (const InvalidConfig&) {
        throw InvalidProgram("unknown task '" + id + "'");
      }
      if (!model->spec.eligible_agents.contains(agent)) {
        throw InvalidProgram("task '" + id + "' is not eligible for the " + std::string(to_string(agent)));
      }
      if (model->spec.action_kind == ActionKind::Pick) {
        ++holding[model->object];
      } else if (model->spec.action_kind == ActionKind::Place) {
        if (--holding[model->object] < 0) {
          throw InvalidProgram("the " + std::string(to_string(agent)) + " places a " + model->object +
                               " cube before picking one");
        }
      }
    }
  }
}

namespace {

struct Segment {
  double start;
  double end;
  double factor;
};

// Robot speed over the human's busy horizon; full speed afterwards.
std::vector<Segment> speed_profile(const std::vector<ExecutionRecord>& human_lane, const WorldConfig& config) {
  std::vector<Segment> out;
  for (const auto& r : human_lane) {
    const double t0 = r.measured_interval.start();
    const double d = interval_duration(r.measured_interval);
    const auto z = config.exposure(r.task_id);
    const double t1 = t0 + z.red_frac * d;
    const double t2 = t1 + z.orange_frac * d;
    const double t3 = r.measured_interval.end();
    const std::pair<double, Zone> phases[] = {{t1, Zone::Red}, {t2, Zone::Orange}, {t3, Zone::Free}};
    double from = t0;
    for (const auto& [to, zone] : phases) {
      if (to > from) out.push_back({from, to, robot_speed_factor(zone, config)});
      from = std::max(from, to);
    }
  }
  return out;
}

// Time at which `work` units are done when starting at `t`.
double integrate_work(const std::vector<Segment>& profile, double t, double work, const WorldConfig& config) {
  auto seg = std::upper_bound(profile.begin(), profile.end(), t,
                              [](double v, const Segment& s) { return v < s.end; });
  while (work > 0.0 && seg != profile.end()) {
    const double from = std::max(t, seg->start);
    if (from > t) {
      // Gap between human tasks: the human is idle.
      const double idle_speed = robot_speed_factor(std::nullopt, config);
      const double gap = from - t;
      if (idle_speed * gap >= work) return t + work / idle_speed;
      work -= idle_speed * gap;
      t = from;
    }
    const double span = seg->end - t;
    if (seg->factor > 0.0) {
      if (seg->factor * span >= work) return t + work / seg->factor;
      work -= seg->factor * span;
    }
    t = seg->end;
    ++seg;
  }
  return t + work / robot_speed_factor(std::nullopt, config);
}

}  // namespace

SimulationResult simulate_plan(const AgentProgram& program, const WorldConfig& config, std::uint64_t seed,
                               const std::string& plan_id) {
  validate_program(program, config);
  std::mt19937_64 rng(seed);
  SimulationResult result;
  result.trace.plan_id = plan_id;
  std::int64_t seq = 0;

  double t = 0.0;
  for (const auto& id : program.human) {
    const auto& model = config.task(id);
    const double d = sample_task_duration(model.base_duration, model.cv, rng);
    result.trace.records.push_back({plan_id, seq++, id, Agent::Human, TimeInterval(t, t + d), true});
    result.work.push_back(d);
    t += d;
  }

  const auto profile = speed_profile(result.trace.records, config);
  t = 0.0;
  for (const auto& id : program.robot) {
    const auto& model = config.task(id);
    const double work = sample_task_duration(model.base_duration, model.cv, rng);
    const double done = integrate_work(profile, t, work, config);
    result.trace.records.push_back({plan_id, seq++, id, Agent::Robot, TimeInterval(t, done), true});
    result.work.push_back(work);
    t = done;
  }
  return result;
}

}  // namespace hrcsyn
