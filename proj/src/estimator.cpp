#include "hrcsyn/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/Eigenvalues>

#include "hrcsyn/error.hpp"

namespace hrcsyn {

SampleStats expected_duration(std::span<const double> samples) {
  if (samples.empty()) throw EmptySampleSet("no duration samples");
  double sum = 0.0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    if (!(samples[k] > 0.0)) {
      throw NonPositiveSample("sample " + std::to_string(k) + " is " + std::to_string(samples[k]));
    }
    sum += samples[k];
  }
  SampleStats out;
  out.count = static_cast<std::int64_t>(samples.size());
  out.mean = sum / static_cast<double>(samples.size());
  if (samples.size() > 1) {
    double ss = 0.0;
    for (double x : samples) ss += (x - out.mean) * (x - out.mean);
    out.std = std::sqrt(ss / static_cast<double>(samples.size() - 1));
  }
  return out;
}

namespace {

double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

OutlierReport filter_outliers(std::span<const double> samples, OutlierStrategy strategy) {
  if (samples.empty()) throw EmptySampleSet("no samples to filter");
  OutlierReport report;
  if (strategy == OutlierStrategy::None) {
    report.strategy = "none";
    report.lower_fence = -HUGE_VAL;
    report.upper_fence = HUGE_VAL;
    for (std::size_t k = 0; k < samples.size(); ++k) report.kept.push_back(k);
    return report;
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double q1 = quantile_sorted(sorted, 0.25);
  const double q3 = quantile_sorted(sorted, 0.75);
  const double iqr = q3 - q1;
  report.strategy = "iqr";
  report.lower_fence = q1 - 1.5 * iqr;
  report.upper_fence = q3 + 1.5 * iqr;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const bool inside = samples[k] >= report.lower_fence && samples[k] <= report.upper_fence;
    (inside ? report.kept : report.removed).push_back(k);
  }
  return report;
}

OutlierFilter make_outlier_filter(OutlierStrategy strategy) {
  return [strategy](std::span<const double> samples) { return filter_outliers(samples, strategy); };
}

RegressionProblem build_regression(std::span<const ExecutionTrace> traces, const std::string& own_task_id,
                                   Agent own_agent, const DurationTable& stats,
                                   std::span<const std::string> counterpart_tasks,
                                   const std::set<RecordKey>& excluded) {
  const double own_mean = stats.mean(own_task_id);
  const Agent other_agent = counterpart(own_agent);
  std::map<std::string_view, Eigen::Index> column_of;
  for (std::size_t j = 0; j < counterpart_tasks.size(); ++j) {
    column_of.emplace(counterpart_tasks[j], static_cast<Eigen::Index>(j));
  }
  const auto m = static_cast<Eigen::Index>(counterpart_tasks.size());

  std::vector<Eigen::VectorXd> rows;
  std::vector<double> response;
  std::vector<RecordKey> keys;
  for (const auto& trace : traces) {
    for (const auto& own : trace.records) {
      if (own.task_id != own_task_id || own.agent != own_agent || !own.success) continue;
      if (excluded.contains(RecordKey{own.plan_id, own.seq})) continue;
      Eigen::VectorXd deltas = Eigen::VectorXd::Zero(m);
      for (const auto& other : trace.records) {
        if (other.agent != other_agent || other.measured_interval.is_empty()) continue;
        auto col = column_of.find(other.task_id);
        if (col == column_of.end()) continue;
        deltas(col->second) += overlap_ratio(own.measured_interval, other.measured_interval);
      }
      const double covered = std::min(deltas.sum(), 1.0);
      response.push_back(interval_duration(own.measured_interval) - own_mean * (1.0 - covered));
      rows.push_back(own_mean * deltas);
      keys.emplace_back(own.plan_id, own.seq);
    }
  }
  if (rows.empty()) throw NoSamples("no successful executions of task '" + own_task_id + "'");

  RegressionProblem problem;
  problem.own_task_id = own_task_id;
  problem.own_agent = own_agent;
  problem.own_mean = own_mean;
  problem.column_labels.assign(counterpart_tasks.begin(), counterpart_tasks.end());
  problem.row_keys = std::move(keys);
  const auto n = static_cast<Eigen::Index>(rows.size());
  problem.design.resize(n, m);
  problem.response.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    problem.design.row(k) = rows[static_cast<std::size_t>(k)].transpose();
    problem.response(k) = response[static_cast<std::size_t>(k)];
  }
  return problem;
}

namespace {

// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
// Returns false when a pivot is not positive.
bool cholesky(const Eigen::MatrixXd& a, Eigen::MatrixXd& l) {
  const Eigen::Index p = a.rows();
  l = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    double diag = a(j, j);
    for (Eigen::Index k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
    if (!(diag > 0.0)) return false;
    l(j, j) = std::sqrt(diag);
    for (Eigen::Index i = j + 1; i < p; ++i) {
      double v = a(i, j);
      for (Eigen::Index k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
      l(i, j) = v / l(j, j);
    }
  }
  return true;
}

// Solves L L^T x = b.
Eigen::VectorXd cholesky_solve(const Eigen::MatrixXd& l, const Eigen::VectorXd& b) {
  const Eigen::Index p = l.rows();
  Eigen::VectorXd z(p);
  for (Eigen::Index i = 0; i < p; ++i) {
    double v = b(i);
    for (Eigen::Index k = 0; k < i; ++k) v -= l(i, k) * z(k);
    z(i) = v / l(i, i);
  }
  Eigen::VectorXd x(p);
  for (Eigen::Index i = p - 1; i >= 0; --i) {
    double v = z(i);
    for (Eigen::Index k = i + 1; k < p; ++k) v -= l(k, i) * x(k);
    x(i) = v / l(i, i);
  }
  return x;
}

}  // namespace

SynergySolution solve_synergy(const RegressionProblem& problem) {
  const Eigen::Index n = problem.design.rows();
  const Eigen::Index m = problem.design.cols();
  if (n == 0) throw EmptyProblem("regression for '" + problem.own_task_id + "' has no rows");

  SynergySolution out;
  out.coefficients.assign(static_cast<std::size_t>(m), 1.0);
  out.std_errors.assign(static_cast<std::size_t>(m), 0.0);
  out.sample_counts.assign(static_cast<std::size_t>(m), 0);
  out.ridge_columns.assign(static_cast<std::size_t>(m), false);

  std::vector<Eigen::Index> observed;
  for (Eigen::Index j = 0; j < m; ++j) {
    const auto count = (problem.design.col(j).array() != 0.0).count();
    out.sample_counts[static_cast<std::size_t>(j)] = static_cast<std::int64_t>(count);
    if (count > 0) observed.push_back(j);
  }
  const auto p = static_cast<Eigen::Index>(observed.size());
  if (p == 0) return out;

  Eigen::MatrixXd x(n, p);
  for (Eigen::Index c = 0; c < p; ++c) x.col(c) = problem.design.col(observed[static_cast<std::size_t>(c)]);
  const Eigen::VectorXd& y = problem.response;

  Eigen::MatrixXd normal = x.transpose() * x;
  const Eigen::VectorXd rhs = x.transpose() * y;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(normal);
  const Eigen::VectorXd& evals = eig.eigenvalues();
  const double lmax = evals(p - 1);
  const double lmin = evals(0);
  out.condition = lmin > 0.0 ? lmax / lmin : HUGE_VAL;

  if (out.condition > kMaxCondition) {
    out.ridge_applied = true;
    const double lambda = kRidgeScale * normal.trace() / static_cast<double>(p);
    normal.diagonal().array() += lambda;
    for (Eigen::Index k = 0; k < p; ++k) {
      if (evals(k) > lmax / kMaxCondition) break;
      for (Eigen::Index c = 0; c < p; ++c) {
        if (std::abs(eig.eigenvectors()(c, k)) > 0.1) {
          out.ridge_columns[static_cast<std::size_t>(observed[static_cast<std::size_t>(c)])] = true;
        }
      }
    }
  }

  Eigen::MatrixXd l;
  if (!cholesky(normal, l)) {
    throw EmptyProblem("normal matrix for '" + problem.own_task_id + "' is not positive definite");
  }
  const Eigen::VectorXd s = cholesky_solve(l, rhs);

  const Eigen::VectorXd residual = y - x * s;
  const double dof = static_cast<double>(std::max<Eigen::Index>(n - p, 1));
  const double sigma2 = residual.squaredNorm() / dof;
  for (Eigen::Index c = 0; c < p; ++c) {
    Eigen::VectorXd unit = Eigen::VectorXd::Zero(p);
    unit(c) = 1.0;
    const double inv_diag = cholesky_solve(l, unit)(c);
    const auto j = static_cast<std::size_t>(observed[static_cast<std::size_t>(c)]);
    out.coefficients[j] = s(c);
    out.std_errors[j] = std::sqrt(std::max(0.0, sigma2 * inv_diag));
  }
  return out;
}

namespace {

struct TaskSamples {
  Agent agent = Agent::Human;
  std::vector<double> durations;
  std::vector<RecordKey> keys;
};

// Successful executions per task type, in trace order.
std::map<std::string, TaskSamples> collect_samples(std::span<const ExecutionTrace> traces) {
  std::map<std::string, TaskSamples> out;
  for (const auto& trace : traces) {
    for (const auto& r : trace.records) {
      if (!r.success) continue;
      auto [it, inserted] = out.try_emplace(r.task_id);
      if (inserted) {
        it->second.agent = r.agent;
      } else if (it->second.agent != r.agent) {
        throw InvalidSchedule("task '" + r.task_id + "' recorded for both agents");
      }
      it->second.durations.push_back(interval_duration(r.measured_interval));
      it->second.keys.emplace_back(r.plan_id, r.seq);
    }
  }
  return out;
}

}  // namespace

DurationTable estimate_durations(std::span<const ExecutionTrace> traces, const EstimationOptions& options) {
  DurationTable table;
  for (const auto& [task_id, samples] : collect_samples(traces)) {
    const auto report = options.outlier_filter(samples.durations);
    std::vector<double> kept;
    kept.reserve(report.kept.size());
    for (auto k : report.kept) kept.push_back(samples.durations[k]);
    const auto stats = expected_duration(kept);
    table.put(DurationStats{task_id, samples.agent, stats.mean, stats.std, stats.count});
  }
  return table;
}

SynergyMatrix estimate_synergy_matrix(std::span<const ExecutionTrace> traces, const DurationTable& stats,
                                      std::span<const std::string> human_task_ids,
                                      std::span<const std::string> robot_task_ids,
                                      const EstimationOptions& options) {
  struct Job {
    Agent agent;
    std::string task_id;
    std::span<const std::string> columns;
  };
  std::vector<Job> jobs;
  for (const auto& id : human_task_ids) jobs.push_back({Agent::Human, id, robot_task_ids});
  for (const auto& id : robot_task_ids) jobs.push_back({Agent::Robot, id, human_task_ids});

  const auto samples = collect_samples(traces);
  std::vector<std::vector<SynergyEntry>> rows(jobs.size());

  for_each_index(jobs.size(), options.policy, [&](std::size_t index) {
    const Job& job = jobs[index];
    auto& row = rows[index];
    row.assign(job.columns.size(), SynergyEntry{});
    try {
      std::set<RecordKey> excluded;
      if (auto it = samples.find(job.task_id); it != samples.end() && it->second.agent == job.agent) {
        const auto report = options.outlier_filter(it->second.durations);
        for (auto k : report.removed) excluded.insert(it->second.keys[k]);
      }
      const auto problem = build_regression(traces, job.task_id, job.agent, stats, job.columns, excluded);
      const auto solution = solve_synergy(problem);
      for (std::size_t j = 0; j < row.size(); ++j) {
        auto& entry = row[j];
        entry.sample_count = solution.sample_counts[j];
        entry.low_confidence = entry.sample_count < kMinConfidentSamples;
        entry.ridge = solution.ridge_columns[j];
        if (entry.sample_count == 0) continue;
        entry.coefficient = solution.coefficients[j];
        entry.std_error = solution.std_errors[j];
        if (!(entry.coefficient > 0.0)) {
          entry.coefficient = kMinCoefficient;
          entry.clamped = true;
        }
      }
    } catch (const Error& e) {
      for (auto& entry : row) {
        entry = SynergyEntry{};
        entry.low_confidence = true;
        entry.diagnostic = e.kind();
      }
    }
  });

  SynergyMatrix matrix;
  matrix.set_labels(Agent::Human, {human_task_ids.begin(), human_task_ids.end()},
                    {robot_task_ids.begin(), robot_task_ids.end()});
  matrix.set_labels(Agent::Robot, {robot_task_ids.begin(), robot_task_ids.end()},
                    {human_task_ids.begin(), human_task_ids.end()});
  for (std::size_t index = 0; index < jobs.size(); ++index) {
    const Job& job = jobs[index];
    for (std::size_t j = 0; j < job.columns.size(); ++j) {
      matrix.set(job.agent, job.task_id, job.columns[j], rows[index][j]);
    }
  }
  return matrix;
}

}  // namespace hrcsyn
