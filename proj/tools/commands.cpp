#include "commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>

#include <fmt/ostream.h>

#include "hrcsyn/campaign.hpp"
#include "hrcsyn/error.hpp"
#include "hrcsyn/estimator.hpp"
#include "hrcsyn/simulator.hpp"
#include "hrcsyn/store.hpp"

namespace hrcsyn::cli {

namespace {

WorldConfig load_config(const std::optional<std::filesystem::path>& path) {
  return path ? load_world_config(*path) : default_world_config();
}

DurationTable load_durations(const Store& store) {
  DurationTable table;
  for (const auto& d : store.query(collection::kTaskDuration)) table.put(duration_stats_from(d));
  return table;
}

SynergyMatrix load_synergy(const Store& store) {
  const auto docs = store.query(collection::kTaskSynergy);
  return synergy_matrix_from(docs);
}

}  // namespace

std::filesystem::path default_store_root() {
  if (const char* env = std::getenv("HRCSYN_STORE"); env != nullptr && *env != '\0') return env;
  return "hrcsyn-store";
}

SimulateSummary cmd_simulate(const SimulateOptions& options, std::ostream& out) {
  const WorldConfig config = load_config(options.config);
  const std::uint64_t seed = options.seed.value_or(config.seed);
  const PlanningDomain domain = make_workcell_domain(config);
  const auto runs = run_campaign(config, domain, options.plans, seed, ExecPolicy::Parallel);

  Store store(options.store);
  std::vector<Document> properties;
  for (const auto& spec : config.catalog()) properties.push_back(to_document(spec));
  store.upsert_many(collection::kTaskProperties, properties);

  SimulateSummary summary;
  std::vector<Document> results;
  std::vector<Document> plans;
  for (const auto& run : runs) {
    for (const auto& r : run.simulation.trace.records) results.push_back(to_document(r));
    const double makespan = run.simulation.trace.makespan();
    plans.push_back(to_document(PlanDocument{run.plan_id, "random", run.plan_seed, run.plan, makespan}));
    summary.plan_ids.push_back(run.plan_id);
    summary.makespans.push_back(makespan);
    fmt::print(out, "{}  makespan {:9.3f} s  (human {} tasks, robot {} tasks)\n", run.plan_id, makespan,
               run.plan.lane(Agent::Human).size(), run.plan.lane(Agent::Robot).size());
  }
  summary.records = results.size();
  store.upsert_many(collection::kTaskResults, results);
  store.upsert_many(collection::kPlans, plans);
  fmt::print(out, "simulated {} plans, {} task records -> {}\n", runs.size(), summary.records, options.store.string());
  return summary;
}

EstimateSummary cmd_estimate(const std::filesystem::path& store_root, std::ostream& out) {
  Store store(store_root);
  const auto traces = store.export_traces();
  if (traces.empty()) throw EmptyStore("task_results in '" + store_root.string() + "' is empty; run `simulate` first");

  const DurationTable durations = estimate_durations(traces);

  std::array<std::vector<std::string>, 2> ids;
  const auto add_id = [&](Agent a, const std::string& id) {
    auto& list = ids[static_cast<std::size_t>(a)];
    if (std::find(list.begin(), list.end(), id) == list.end()) list.push_back(id);
  };
  for (const auto& d : store.query(collection::kTaskProperties)) {
    const auto spec = task_spec_from(d);
    for (Agent a : spec.eligible_agents.members()) add_id(a, spec.id);
  }
  for (const auto& trace : traces) {
    for (const auto& r : trace.records) add_id(r.agent, r.task_id);
  }

  EstimationOptions options;
  options.policy = ExecPolicy::Parallel;
  const SynergyMatrix synergy = estimate_synergy_matrix(traces, durations, ids[0], ids[1], options);

  std::vector<Document> duration_docs;
  for (const auto& [id, s] : durations) duration_docs.push_back(to_document(s));
  const auto synergy_docs = synergy_documents(synergy);
  store.clear(collection::kTaskDuration);
  store.clear(collection::kTaskSynergy);
  store.upsert_many(collection::kTaskDuration, duration_docs);
  store.upsert_many(collection::kTaskSynergy, synergy_docs);

  fmt::print(out, "{} traces\n", traces.size());
  fmt::print(out, "{:<14} {:<6} {:>9} {:>8} {:>6}\n", "task", "agent", "mean[s]", "std[s]", "n");
  for (const auto& [id, s] : durations) {
    fmt::print(out, "{:<14} {:<6} {:9.3f} {:8.3f} {:6}\n", id, to_string(s.agent), s.mean, s.std, s.count);
  }
  for (Agent a : kAgents) {
    fmt::print(out, "\n{} synergy (rows own, columns {})\n{:<14}", to_string(a), to_string(counterpart(a)), "");
    for (const auto& c : synergy.cols(a)) fmt::print(out, " {:>13}", c);
    fmt::print(out, "\n");
    for (const auto& r : synergy.rows(a)) {
      fmt::print(out, "{:<14}", r);
      for (const auto& c : synergy.cols(a)) fmt::print(out, " {:13.3f}", synergy.coefficient(a, r, c));
      fmt::print(out, "\n");
    }
  }
  return EstimateSummary{traces.size(), duration_docs.size(), synergy_docs.size()};
}

PlanSummary cmd_plan(const PlanOptions& options, std::ostream& out) {
  const WorldConfig config = load_config(options.config);
  Store store(options.store);
  const DurationTable durations = load_durations(store);
  const SynergyMatrix synergy = load_synergy(store);
  if (durations.empty() || (synergy.entries(Agent::Human).empty() && synergy.entries(Agent::Robot).empty())) {
    throw MissingEstimates("no duration/synergy estimates in '" + options.store.string() + "'; run `estimate` first");
  }
  const std::uint64_t seed = options.seed.value_or(config.seed);
  const PlanningDomain domain = make_workcell_domain(config);

  OptimizeOptions search;
  search.budget = options.budget;
  search.seed = seed;
  search.policy = ExecPolicy::Parallel;
  const auto result = optimize_plan(domain, durations, synergy, search);

  PlanSummary summary;
  summary.plan_id = fmt::format("optimized-s{}-b{}", seed, options.budget);
  summary.plan = result.best;
  summary.exhaustive = result.exhaustive;
  const auto sim = simulate_plan(to_program(result.best), config, seed, summary.plan_id);
  summary.simulated_makespan = sim.trace.makespan();
  store.upsert(collection::kPlans, to_document(PlanDocument{summary.plan_id, "optimized", seed, result.best,
                                                             summary.simulated_makespan}));

  fmt::print(out, "{} search over {} candidates ({} without a stable schedule)\n",
             result.exhaustive ? "exhaustive" : "random", result.evaluated, result.failed);
  for (Agent a : kAgents) {
    fmt::print(out, "{}:", to_string(a));
    for (auto i : result.best.lane(a)) fmt::print(out, " {}", result.best.assignment[i].task_id);
    fmt::print(out, "\n");
  }
  fmt::print(out, "predicted makespan {:.3f} s\n", *result.best.predicted_makespan);
  fmt::print(out, "simulated makespan {:.3f} s (seed {})\n", summary.simulated_makespan, seed);
  fmt::print(out, "saved as {}\n", summary.plan_id);
  return summary;
}

std::vector<std::filesystem::path> cmd_report(const std::filesystem::path& store_root,
                                              const std::filesystem::path& out_dir, std::ostream& out) {
  Store store(store_root);
  const DurationTable durations = load_durations(store);
  const SynergyMatrix synergy = load_synergy(store);
  if (durations.empty() && synergy.entries(Agent::Human).empty() && synergy.entries(Agent::Robot).empty()) {
    throw MissingEstimates("no estimates in '" + store_root.string() + "'; run `estimate` first");
  }
  const auto written = write_report(build_report(durations, synergy), out_dir);
  for (const auto& p : written) fmt::print(out, "wrote {}\n", p.string());
  return written;
}

}  // namespace hrcsyn::cli
