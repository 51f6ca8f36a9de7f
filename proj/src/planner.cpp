#include "hrcsyn/planner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <tuple>

#include "hrcsyn/cost.hpp"
#include "hrcsyn/error.hpp"
#include "hrcsyn/seeding.hpp"

namespace hrcsyn {

AgentSet TaskInstance::eligible() const {
  AgentSet set;
  for (const auto& [agent, task] : task_for_agent) set.insert(agent);
  return set;
}

namespace {

// Tasks that must go to the same agent: a precedence pair or a lone task.
struct Job {
  std::vector<std::size_t> members;  // ascending domain indices
  std::vector<Agent> choices;
};

std::vector<Job> make_jobs(const PlanningDomain& domain) {
  const std::size_t n = domain.tasks.size();
  std::vector<std::ptrdiff_t> partner(n, -1);
  for (const auto& [a, b] : domain.precedence) {
    partner[a] = static_cast<std::ptrdiff_t>(b);
    partner[b] = static_cast<std::ptrdiff_t>(a);
  }
  std::vector<Job> jobs;
  std::vector<bool> done(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (done[i]) continue;
    Job job;
    job.members.push_back(i);
    done[i] = true;
    AgentSet eligible = domain.tasks[i].eligible();
    if (partner[i] >= 0) {
      const auto j = static_cast<std::size_t>(partner[i]);
      job.members.push_back(j);
      done[j] = true;
      AgentSet both;
      for (Agent a : kAgents) {
        if (eligible.contains(a) && domain.tasks[j].eligible().contains(a)) both.insert(a);
      }
      eligible = both;
    }
    job.choices = eligible.members();
    if (job.choices.empty()) {
      throw InfeasibleDomain("no agent can execute '" + domain.tasks[i].instance_id + "'" +
                             (job.members.size() > 1 ? " together with its paired task" : ""));
    }
    jobs.push_back(std::move(job));
  }
  return jobs;
}

CandidatePlan plan_from_agents(const PlanningDomain& domain, const std::vector<Agent>& agents) {
  CandidatePlan plan;
  plan.assignment.reserve(domain.tasks.size());
  for (std::size_t i = 0; i < domain.tasks.size(); ++i) {
    const auto& task = domain.tasks[i];
    plan.assignment.push_back({task.instance_id, task.task_for_agent.at(agents[i]), agents[i]});
  }
  return plan;
}

// Swaps each precedence pair that ended up reversed in `order`. Applied to
// a uniform permutation this yields a uniform precedence-consistent order.
void repair_precedence(const PlanningDomain& domain, std::vector<std::size_t>& order) {
  std::vector<std::ptrdiff_t> pos(domain.tasks.size(), -1);
  for (std::size_t k = 0; k < order.size(); ++k) pos[order[k]] = static_cast<std::ptrdiff_t>(k);
  for (const auto& [before, after] : domain.precedence) {
    if (pos[before] < 0 || pos[after] < 0) continue;
    if (pos[before] > pos[after]) {
      std::swap(order[static_cast<std::size_t>(pos[before])], order[static_cast<std::size_t>(pos[after])]);
      std::swap(pos[before], pos[after]);
    }
  }
}

bool respects_precedence(const PlanningDomain& domain, const std::vector<std::size_t>& order) {
  std::vector<std::ptrdiff_t> pos(domain.tasks.size(), -1);
  for (std::size_t k = 0; k < order.size(); ++k) pos[order[k]] = static_cast<std::ptrdiff_t>(k);
  for (const auto& [before, after] : domain.precedence) {
    if (pos[before] < 0 || pos[after] < 0) continue;
    if (pos[before] > pos[after]) return false;
    if (domain.contiguous_pairs && pos[after] != pos[before] + 1) return false;
  }
  return true;
}

// Jobs of one agent in domain order.
std::vector<const Job*> lane_jobs(const std::vector<Job>& jobs, const std::vector<Agent>& agents, Agent a) {
  std::vector<const Job*> out;
  for (const auto& job : jobs) {
    if (agents[job.members.front()] == a) out.push_back(&job);
  }
  return out;
}

std::vector<std::size_t> flatten(const std::vector<const Job*>& units) {
  std::vector<std::size_t> out;
  for (const Job* job : units) out.insert(out.end(), job->members.begin(), job->members.end());
  return out;
}

// Every precedence-consistent order of one agent's tasks, lexicographic.
std::vector<std::vector<std::size_t>> lane_orders(const PlanningDomain& domain, const std::vector<Job>& jobs,
                                                  const std::vector<Agent>& agents, Agent a) {
  std::vector<std::vector<std::size_t>> out;
  if (domain.contiguous_pairs) {
    auto units = lane_jobs(jobs, agents, a);
    std::vector<std::size_t> perm(units.size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
      std::vector<const Job*> ordered;
      for (auto k : perm) ordered.push_back(units[k]);
      out.push_back(flatten(ordered));
    } while (std::next_permutation(perm.begin(), perm.end()));
    std::sort(out.begin(), out.end());
    return out;
  }
  std::vector<std::size_t> lane;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    if (agents[i] == a) lane.push_back(i);
  }
  do {
    if (respects_precedence(domain, lane)) out.push_back(lane);
  } while (std::next_permutation(lane.begin(), lane.end()));
  return out;
}

}  // namespace

void PlanningDomain::validate() const {
  std::vector<int> uses(tasks.size(), 0);
  for (const auto& [a, b] : precedence) {
    if (a >= tasks.size() || b >= tasks.size() || a == b) {
      throw InfeasibleDomain("precedence pair references an invalid task index");
    }
    for (auto i : {a, b}) {
      if (++uses[i] > 1) {
        throw InfeasibleDomain("task '" + tasks[i].instance_id + "' appears in more than one precedence pair");
      }
    }
  }
  for (const auto& t : tasks) {
    if (t.task_for_agent.empty()) throw InfeasibleDomain("task '" + t.instance_id + "' has no eligible agent");
  }
  (void)make_jobs(*this);
}

std::vector<std::string> CandidatePlan::lane_tasks(Agent a) const {
  std::vector<std::string> out;
  out.reserve(lane(a).size());
  for (auto i : lane(a)) out.push_back(assignment.at(i).task_id);
  return out;
}

void validate_plan(const CandidatePlan& plan, const PlanningDomain& domain) {
  if (plan.assignment.size() != domain.tasks.size()) {
    throw InvalidSchedule("assignment covers " + std::to_string(plan.assignment.size()) + " of " +
                          std::to_string(domain.tasks.size()) + " tasks");
  }
  std::vector<int> seen(domain.tasks.size(), 0);
  for (Agent a : kAgents) {
    for (auto i : plan.lane(a)) {
      if (i >= domain.tasks.size()) throw InvalidSchedule("lane references an invalid task index");
      if (plan.assignment[i].agent != a) {
        throw InvalidSchedule("task '" + domain.tasks[i].instance_id + "' is on the wrong lane");
      }
      ++seen[i];
    }
  }
  for (std::size_t i = 0; i < domain.tasks.size(); ++i) {
    const auto& item = plan.assignment[i];
    const auto& task = domain.tasks[i];
    if (seen[i] != 1) throw InvalidSchedule("task '" + task.instance_id + "' is not scheduled exactly once");
    auto it = task.task_for_agent.find(item.agent);
    if (it == task.task_for_agent.end() || it->second != item.task_id || item.instance_id != task.instance_id) {
      throw InvalidSchedule("task '" + task.instance_id + "' has an ineligible assignment");
    }
  }
  for (const auto& [before, after] : domain.precedence) {
    if (plan.assignment[before].agent != plan.assignment[after].agent) {
      throw InvalidSchedule("paired tasks '" + domain.tasks[before].instance_id + "' and '" +
                            domain.tasks[after].instance_id + "' split across agents");
    }
  }
  for (Agent a : kAgents) {
    if (!respects_precedence(domain, plan.lane(a))) {
      throw InvalidSchedule("precedence violated on the " + std::string(to_string(a)) + " lane");
    }
  }
}

CandidatePlan random_plan(const PlanningDomain& domain, std::uint64_t seed) {
  domain.validate();
  std::mt19937_64 rng(seed);
  std::vector<Agent> agents(domain.tasks.size(), Agent::Human);
  const auto jobs = make_jobs(domain);
  for (const auto& job : jobs) {
    Agent pick = job.choices.front();
    if (job.choices.size() > 1) {
      std::uniform_int_distribution<std::size_t> choose(0, job.choices.size() - 1);
      pick = job.choices[choose(rng)];
    }
    for (auto i : job.members) agents[i] = pick;
  }
  CandidatePlan plan = plan_from_agents(domain, agents);
  for (Agent a : kAgents) {
    auto& lane = plan.lane(a);
    if (domain.contiguous_pairs) {
      auto units = lane_jobs(jobs, agents, a);
      std::shuffle(units.begin(), units.end(), rng);
      lane = flatten(units);
      continue;
    }
    for (std::size_t i = 0; i < agents.size(); ++i) {
      if (agents[i] == a) lane.push_back(i);
    }
    std::shuffle(lane.begin(), lane.end(), rng);
    repair_precedence(domain, lane);
  }
  return plan;
}

namespace {

PlanSchedule dispatch(const std::array<std::vector<std::string>, 2>& tasks,
                      const std::array<std::vector<double>, 2>& durations) {
  PlanSchedule schedule;
  for (Agent a : kAgents) {
    const auto ai = static_cast<std::size_t>(a);
    double t = 0.0;
    auto& lane = schedule.lane(a);
    lane.reserve(tasks[ai].size());
    for (std::size_t k = 0; k < tasks[ai].size(); ++k) {
      lane.push_back({tasks[ai][k], a, TimeInterval(t, t + durations[ai][k])});
      t += durations[ai][k];
    }
  }
  return schedule;
}

// Plain fixed-point steps first, then under-relaxed steps to damp oscillation.
constexpr int kUndampedIterations = 50;
constexpr double kRelaxation = 0.5;

}  // namespace

PredictedSchedule predict_schedule(const CandidatePlan& plan, const DurationTable& stats,
                                   const SynergyMatrix& synergy) {
  std::array<std::vector<std::string>, 2> tasks;
  std::array<std::vector<double>, 2> nominal;
  for (Agent a : kAgents) {
    const auto ai = static_cast<std::size_t>(a);
    tasks[ai] = plan.lane_tasks(a);
    for (const auto& id : tasks[ai]) nominal[ai].push_back(stats.mean(id));
  }
  auto durations = nominal;
  for (int iteration = 1; iteration <= kFixedPointMaxIterations; ++iteration) {
    const PlanSchedule schedule = dispatch(tasks, durations);
    double change = 0.0;
    for (Agent a : kAgents) {
      const auto ai = static_cast<std::size_t>(a);
      const auto& own = schedule.lane(a);
      const auto& other = schedule.lane(counterpart(a));
      for (std::size_t k = 0; k < own.size(); ++k) {
        double next = nominal[ai][k] * coupling_factor(own[k], other, synergy);
        if (iteration > kUndampedIterations) next = kRelaxation * next + (1.0 - kRelaxation) * durations[ai][k];
        change = std::max(change, std::abs(next - durations[ai][k]));
        durations[ai][k] = next;
      }
    }
    if (change < kFixedPointTolerance) return {dispatch(tasks, durations), iteration};
  }
  throw NonConvergence("coupled durations did not settle within " + std::to_string(kFixedPointMaxIterations) +
                       " iterations");
}

double predict_makespan(const CandidatePlan& plan, const DurationTable& stats, const SynergyMatrix& synergy) {
  const auto predicted = predict_schedule(plan, stats, synergy);
  double finish[2] = {0.0, 0.0};
  for (Agent a : kAgents) {
    const auto& lane = predicted.schedule.lane(a);
    if (!lane.empty()) finish[static_cast<std::size_t>(a)] = lane.back().interval.end();
  }
  return plan_cost(finish[0], finish[1]);
}

std::uint64_t candidate_space_size(const PlanningDomain& domain, std::uint64_t cap) {
  domain.validate();
  const auto jobs = make_jobs(domain);
  // ways[(human tasks, human pairs)] = number of assignments reaching it.
  std::map<std::pair<std::size_t, std::size_t>, long double> ways{{{0, 0}, 1.0L}};
  std::size_t total_tasks = 0;
  std::size_t total_pairs = 0;
  for (const auto& job : jobs) {
    const std::size_t size = job.members.size();
    const std::size_t pairs = size > 1 ? 1 : 0;
    total_tasks += size;
    total_pairs += pairs;
    std::map<std::pair<std::size_t, std::size_t>, long double> next;
    for (const auto& [state, count] : ways) {
      for (Agent a : job.choices) {
        auto key = a == Agent::Human ? std::pair{state.first + size, state.second + pairs} : state;
        next[key] += count;
      }
    }
    ways = std::move(next);
  }
  // A lane of n tasks with p disjoint pairs has n! / 2^p valid orders, or
  // (n - p)! when every pair is contiguous.
  const bool contiguous = domain.contiguous_pairs;
  const auto orders = [contiguous](std::size_t n, std::size_t p) {
    if (contiguous) return std::exp(std::lgamma(static_cast<long double>(n - p) + 1.0L));
    return std::exp(std::lgamma(static_cast<long double>(n) + 1.0L)) / std::pow(2.0L, static_cast<long double>(p));
  };
  long double total = 0.0L;
  for (const auto& [state, count] : ways) {
    total += count * orders(state.first, state.second) *
             orders(total_tasks - state.first, total_pairs - state.second);
  }
  total = std::round(total);
  return total >= static_cast<long double>(cap) ? cap : static_cast<std::uint64_t>(total);
}

std::vector<CandidatePlan> enumerate_plans(const PlanningDomain& domain) {
  domain.validate();
  const auto jobs = make_jobs(domain);
  std::vector<CandidatePlan> out;
  std::vector<std::size_t> digit(jobs.size(), 0);
  std::vector<Agent> agents(domain.tasks.size(), Agent::Human);
  while (true) {
    for (std::size_t g = 0; g < jobs.size(); ++g) {
      for (auto i : jobs[g].members) agents[i] = jobs[g].choices[digit[g]];
    }
    std::array<std::vector<std::vector<std::size_t>>, 2> orders;
    for (Agent a : kAgents) orders[static_cast<std::size_t>(a)] = lane_orders(domain, jobs, agents, a);
    const CandidatePlan base = plan_from_agents(domain, agents);
    for (const auto& human : orders[0]) {
      for (const auto& robot : orders[1]) {
        CandidatePlan plan = base;
        plan.lane(Agent::Human) = human;
        plan.lane(Agent::Robot) = robot;
        out.push_back(std::move(plan));
      }
    }
    // Odometer over job choices, last job fastest: lexicographic in the
    // assignment vector since jobs are ordered by their first task.
    std::size_t g = jobs.size();
    while (g > 0) {
      --g;
      if (++digit[g] < jobs[g].choices.size()) break;
      digit[g] = 0;
      if (g == 0) return out;
    }
    if (jobs.empty()) return out;
  }
}

namespace {

auto tie_key(const CandidatePlan& plan) {
  std::vector<int> agents;
  agents.reserve(plan.assignment.size());
  for (const auto& item : plan.assignment) agents.push_back(static_cast<int>(item.agent));
  return std::make_tuple(std::move(agents), plan.lane(Agent::Human), plan.lane(Agent::Robot));
}

}  // namespace

OptimizeResult optimize_plan(const PlanningDomain& domain, const DurationTable& stats,
                             const SynergyMatrix& synergy, const OptimizeOptions& options) {
  if (options.budget < 1) throw InfeasibleDomain("search budget must be at least 1");
  domain.validate();

  OptimizeResult result;
  std::vector<CandidatePlan> candidates;
  if (candidate_space_size(domain, options.budget + 1) <= options.budget) {
    candidates = enumerate_plans(domain);
    result.exhaustive = true;
  } else {
    candidates.reserve(options.budget);
    for (std::uint64_t k = 0; k < options.budget; ++k) {
      candidates.push_back(random_plan(domain, derive_seed(options.seed, k)));
    }
  }

  std::vector<char> converged(candidates.size(), 0);
  for_each_index(candidates.size(), options.policy, [&](std::size_t k) {
    try {
      candidates[k].predicted_makespan = predict_makespan(candidates[k], stats, synergy);
      converged[k] = 1;
    } catch (const NonConvergence&) {
    }
  });

  const CandidatePlan* best = nullptr;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    ++result.evaluated;
    if (!converged[k]) {
      ++result.failed;
      continue;
    }
    const auto& c = candidates[k];
    if (best == nullptr || *c.predicted_makespan < *best->predicted_makespan ||
        (*c.predicted_makespan == *best->predicted_makespan && tie_key(c) < tie_key(*best))) {
      best = &c;
    }
  }
  if (best == nullptr) throw NonConvergence("no candidate plan reached a stable predicted schedule");
  result.best = *best;
  return result;
}

}  // namespace hrcsyn
