// Serial reference vs OpenMP kernels on the workcell campaign.

#include <benchmark/benchmark.h>

#include "hrcsyn/campaign.hpp"
#include "hrcsyn/estimator.hpp"
#include "hrcsyn/planner.hpp"

using namespace hrcsyn;

namespace {

ExecPolicy policy_of(const benchmark::State& state) {
  return state.range(0) == 0 ? ExecPolicy::Serial : ExecPolicy::Parallel;
}

struct Fixture {
  WorldConfig config = default_world_config();
  PlanningDomain domain = make_workcell_domain(config);
  std::vector<ExecutionTrace> traces = campaign_traces(run_campaign(config, domain, 200, 1));
  DurationTable stats = estimate_durations(traces);
  SynergyMatrix synergy =
      estimate_synergy_matrix(traces, stats, config.task_ids(Agent::Human), config.task_ids(Agent::Robot));
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

void BM_Campaign(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_campaign(f.config, f.domain, 200, 7, policy_of(state)));
  }
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}

void BM_SynergyMatrix(benchmark::State& state) {
  const auto& f = fixture();
  EstimationOptions options;
  options.policy = policy_of(state);
  const auto human = f.config.task_ids(Agent::Human);
  const auto robot = f.config.task_ids(Agent::Robot);
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_synergy_matrix(f.traces, f.stats, human, robot, options));
  }
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}

void BM_Optimize(benchmark::State& state) {
  const auto& f = fixture();
  OptimizeOptions options;
  options.budget = 2000;
  options.seed = 3;
  options.policy = policy_of(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(optimize_plan(f.domain, f.stats, f.synergy, options));
  }
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}

}  // namespace

BENCHMARK(BM_Campaign)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SynergyMatrix)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Optimize)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
