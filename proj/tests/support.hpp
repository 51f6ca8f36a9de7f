#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hrcsyn/planner.hpp"
#include "hrcsyn/simulator.hpp"
#include "hrcsyn/store.hpp"

namespace hrcsyn::test {

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("hrcsyn-" + tag + "-" + std::to_string(rd()));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

/// Least-squares solution through the SVD pseudo-inverse, independent of
/// the normal-equation route used by solve_synergy.
inline Eigen::VectorXd pinv_solve(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
  const double cutoff = 1e-12 * sv(0);
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) > cutoff) inv(k) = 1.0 / sv(k);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose() * y;
}

/// Random back-to-back lane of `n` tasks drawn from `types`, with gaps.
inline std::vector<ScheduledTask> random_lane(std::mt19937_64& rng, Agent agent, const std::vector<std::string>& types,
                                              int n, bool gaps = true) {
  std::uniform_real_distribution<double> len(0.5, 12.0);
  std::uniform_real_distribution<double> gap(0.0, 4.0);
  std::uniform_int_distribution<std::size_t> pick(0, types.size() - 1);
  std::vector<ScheduledTask> lane;
  double t = gaps ? gap(rng) : 0.0;
  for (int k = 0; k < n; ++k) {
    const double d = len(rng);
    lane.push_back({types[pick(rng)], agent, TimeInterval(t, t + d)});
    t += d + (gaps ? gap(rng) : 0.0);
  }
  return lane;
}

// Integral of the robot speed factor over [a, b], built directly from the
// human lane and the zone profiles.
inline double integrated_speed(const ExecutionTrace& trace, const WorldConfig& config, double a, double b) {
  double busy = 0.0;
  double scaled = 0.0;
  for (const auto& h : trace.lane(Agent::Human)) {
    const double s = h.measured_interval.start();
    const double d = interval_duration(h.measured_interval);
    const auto z = config.exposure(h.task_id);
    const double cuts[4] = {s, s + z.red_frac * d, s + (z.red_frac + z.orange_frac) * d, s + d};
    const double factors[3] = {config.speed.red, config.speed.orange, config.speed.free};
    for (int p = 0; p < 3; ++p) {
      const double lo = std::max(a, cuts[p]);
      const double hi = std::min(b, cuts[p + 1]);
      if (hi > lo) {
        busy += hi - lo;
        scaled += factors[p] * (hi - lo);
      }
    }
  }
  return scaled + config.speed.free * ((b - a) - busy);
}

// Plan checks written against the domain definition only.
inline bool plan_is_valid(const CandidatePlan& plan, const PlanningDomain& domain) {
  if (plan.assignment.size() != domain.tasks.size()) return false;
  std::vector<int> count(domain.tasks.size(), 0);
  std::vector<std::size_t> pos(domain.tasks.size(), 0);
  std::vector<Agent> lane_of(domain.tasks.size(), Agent::Human);
  for (Agent a : kAgents) {
    for (std::size_t k = 0; k < plan.lane(a).size(); ++k) {
      const auto i = plan.lane(a)[k];
      if (i >= domain.tasks.size()) return false;
      ++count[i];
      pos[i] = k;
      lane_of[i] = a;
    }
  }
  for (std::size_t i = 0; i < domain.tasks.size(); ++i) {
    if (count[i] != 1) return false;
    const auto& item = plan.assignment[i];
    const auto& map = domain.tasks[i].task_for_agent;
    // Exactly one agent, eligible, matching the lane it sits on.
    if (item.agent != lane_of[i] || !map.contains(item.agent) || map.at(item.agent) != item.task_id) return false;
  }
  for (const auto& [a, b] : domain.precedence) {
    if (lane_of[a] != lane_of[b] || pos[a] >= pos[b]) return false;
    if (domain.contiguous_pairs && pos[b] != pos[a] + 1) return false;
  }
  return true;
}

// All valid plans, by assignment bitmask and lane permutations.
inline std::vector<CandidatePlan> brute_force_plans(const PlanningDomain& domain) {
  const std::size_t n = domain.tasks.size();
  std::vector<CandidatePlan> out;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    CandidatePlan plan;
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      const Agent a = (mask >> i) & 1u ? Agent::Robot : Agent::Human;
      auto it = domain.tasks[i].task_for_agent.find(a);
      if (it == domain.tasks[i].task_for_agent.end()) {
        ok = false;
        break;
      }
      plan.assignment.push_back({domain.tasks[i].instance_id, it->second, a});
      plan.lane(a).push_back(i);
    }
    if (!ok) continue;
    auto human = plan.lane(Agent::Human);
    do {
      auto robot = plan.lane(Agent::Robot);
      do {
        CandidatePlan c = plan;
        c.lane(Agent::Human) = human;
        c.lane(Agent::Robot) = robot;
        if (plan_is_valid(c, domain)) out.push_back(c);
      } while (std::next_permutation(robot.begin(), robot.end()));
    } while (std::next_permutation(human.begin(), human.end()));
  }
  return out;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Random identifiers exercise JSON escaping: quotes, backslashes, control
// characters and multi-byte UTF-8.
inline std::string random_text(std::mt19937_64& rng) {
  static const std::vector<std::string> pieces{"a", "b", "pick", "_", "7", "\"", "\\", "\n", "\t", "é", "→", " ", "{", ":"};
  std::uniform_int_distribution<std::size_t> len(1, 12), pick(0, pieces.size() - 1);
  std::string s;
  for (std::size_t k = len(rng); k > 0; --k) s += pieces[pick(rng)];
  return s;
}

inline double random_real(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> e(-6, 6);
  return u(rng) * std::pow(10.0, e(rng));
}

inline Agent random_agent(std::mt19937_64& rng) { return rng() % 2 ? Agent::Robot : Agent::Human; }

inline TaskSpec random_spec(std::mt19937_64& rng, int k) {
  TaskSpec s;
  s.id = "t" + std::to_string(k) + random_text(rng);
  s.action_kind = static_cast<ActionKind>(rng() % 3);
  s.eligible_agents = rng() % 3 == 0 ? AgentSet{Agent::Human, Agent::Robot} : AgentSet{random_agent(rng)};
  s.region = random_text(rng);
  s.description = random_text(rng);
  return s;
}

inline ExecutionRecord random_record(std::mt19937_64& rng, int k) {
  ExecutionRecord r;
  r.plan_id = "p" + std::to_string(k / 10);
  r.seq = k % 10;
  r.task_id = random_text(rng);
  r.agent = random_agent(rng);
  r.success = rng() % 5 != 0;
  if (r.success || rng() % 2) {
    const double a = random_real(rng);
    r.measured_interval = TimeInterval(a, a + random_real(rng));
  }
  return r;
}

inline DurationStats random_stats(std::mt19937_64& rng, int k) {
  return {"d" + std::to_string(k) + random_text(rng), random_agent(rng), random_real(rng) + 1e-3, random_real(rng),
          static_cast<std::int64_t>(rng() % 1000 + 1)};
}

inline SynergyDocument random_synergy(std::mt19937_64& rng, int k) {
  SynergyDocument s;
  s.agent = random_agent(rng);
  s.own_task = "o" + std::to_string(k) + random_text(rng);
  s.other_task = random_text(rng);
  s.entry = {random_real(rng) + 1e-3, random_real(rng), static_cast<std::int64_t>(rng() % 50),
             rng() % 2 == 0, rng() % 2 == 0, rng() % 2 == 0, rng() % 4 ? "" : "NoSamples"};
  return s;
}

inline PlanDocument random_plan_document(std::mt19937_64& rng, int k) {
  PlanningDomain d;
  const int n = static_cast<int>(rng() % 6);
  for (int i = 0; i < n; ++i) {
    TaskInstance t{"i" + std::to_string(i) + random_text(rng), {}};
    if (rng() % 2) t.task_for_agent[Agent::Human] = random_text(rng);
    if (rng() % 2 || t.task_for_agent.empty()) t.task_for_agent[Agent::Robot] = random_text(rng);
    d.tasks.push_back(t);
  }
  PlanDocument p;
  p.id = "plan" + std::to_string(k) + random_text(rng);
  p.kind = rng() % 2 ? "random" : "optimized";
  p.seed = rng();
  p.plan = random_plan(d, rng());
  if (rng() % 2) p.plan.predicted_makespan = random_real(rng);
  if (rng() % 2) p.simulated_makespan = random_real(rng);
  return p;
}

// Writes the documents, reads them back, rewrites them into a second store
// and checks both the typed round trip and byte stability.
template <typename T, typename Make, typename Back>
bool round_trip_ok(std::string_view collection, Make make, Back back, int count = 1000) {
  TempDir a("rt-a"), b("rt-b");
  std::mt19937_64 rng(std::hash<std::string_view>{}(collection));
  std::vector<T> values;
  std::vector<Document> docs;
  for (int k = 0; k < count; ++k) {
    values.push_back(make(rng, k));
    docs.push_back(to_document(values.back()));
  }
  Store first(a.path());
  first.upsert_many(collection, docs);
  const auto read = first.query(collection);
  if (read.size() != values.size()) return false;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!(back(read[k]) == values[k]) || read[k] != docs[k]) return false;
  }
  Store second(b.path());
  second.upsert_many(collection, read);
  const auto before = slurp(first.collection_path(collection));
  if (before != slurp(second.collection_path(collection))) return false;
  // Rewriting in place does not change the bytes either.
  first.upsert_many(collection, read);
  return slurp(first.collection_path(collection)) == before;
}

}  // namespace hrcsyn::test
