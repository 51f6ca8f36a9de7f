#pragma once

#include <cstdint>
#include <functional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "hrcsyn/exec.hpp"
#include "hrcsyn/model.hpp"
#include "hrcsyn/trace.hpp"

namespace hrcsyn {

struct SampleStats {
  double mean = 0.0;
  double std = 0.0;  // n - 1 denominator, 0 for a single sample
  std::int64_t count = 0;
};

/// Throws EmptySampleSet or NonPositiveSample.
SampleStats expected_duration(std::span<const double> samples);

enum class OutlierStrategy { Iqr, None };

struct OutlierReport {
  std::vector<std::size_t> kept;     // ascending sample indices
  std::vector<std::size_t> removed;  // ascending sample indices
  std::string strategy;
  double lower_fence = 0.0;
  double upper_fence = 0.0;
};

/// IQR keeps samples inside [Q1 - 1.5 IQR, Q3 + 1.5 IQR] with linearly
/// interpolated quartiles. Throws EmptySampleSet.
OutlierReport filter_outliers(std::span<const double> samples, OutlierStrategy strategy);

/// Pluggable filter; the built-in strategies are wrapped by make_outlier_filter.
using OutlierFilter = std::function<OutlierReport(std::span<const double>)>;
OutlierFilter make_outlier_filter(OutlierStrategy strategy);

/// (plan_id, seq) of an execution record.
using RecordKey = std::pair<std::string, std::int64_t>;

/// Linear model for one own task: response = design * s, one row per
/// successful execution, one column per counterpart task type.
struct RegressionProblem {
  std::string own_task_id;
  Agent own_agent = Agent::Robot;
  double own_mean = 0.0;
  Eigen::VectorXd response;
  Eigen::MatrixXd design;
  std::vector<std::string> column_labels;
  std::vector<RecordKey> row_keys;
};

/// Row k: design(k, j) = d_hat * delta_{i,j}|k, with delta summed over every
/// instance of counterpart type j in the run; response(k) = D|k minus the
/// idle share d_hat * (1 - sum_j delta_{i,j}|k). Executions listed in
/// `excluded` are skipped. Throws MissingDuration or NoSamples.
RegressionProblem build_regression(std::span<const ExecutionTrace> traces, const std::string& own_task_id,
                                   Agent own_agent, const DurationTable& stats,
                                   std::span<const std::string> counterpart_tasks,
                                   const std::set<RecordKey>& excluded = {});

struct SynergySolution {
  std::vector<double> coefficients;
  std::vector<double> std_errors;
  std::vector<std::int64_t> sample_counts;  // rows with a non-zero entry in the column
  std::vector<bool> ridge_columns;
  bool ridge_applied = false;
  double condition = 1.0;  // of the normal matrix over observed columns
};

/// Above this condition estimate the normal equations are ridge damped.
inline constexpr double kMaxCondition = 1e10;
/// Ridge strength relative to the mean diagonal of the normal matrix.
inline constexpr double kRidgeScale = 1e-8;

/// Least-squares solution of the normal equations. Columns that are zero in
/// every row come back as 1.0 with sample_count 0. Standard errors use
/// sigma^2 = RSS / max(n - p, 1) over the p observed columns. Throws
/// EmptyProblem when there are no rows.
SynergySolution solve_synergy(const RegressionProblem& problem);

/// Floor applied to non-positive fitted coefficients (flagged `clamped`).
inline constexpr double kMinCoefficient = 1e-3;

struct EstimationOptions {
  OutlierFilter outlier_filter = make_outlier_filter(OutlierStrategy::Iqr);
  ExecPolicy policy = ExecPolicy::Serial;
};

/// Expected durations per task type from the successful records, after the
/// outlier filter. Task types are visited in sorted order.
DurationTable estimate_durations(std::span<const ExecutionTrace> traces, const EstimationOptions& options = {});

/// Fits every row of both agents' matrices. A row that cannot be fitted is
/// filled with neutral entries whose `diagnostic` names the error.
SynergyMatrix estimate_synergy_matrix(std::span<const ExecutionTrace> traces, const DurationTable& stats,
                                      std::span<const std::string> human_task_ids,
                                      std::span<const std::string> robot_task_ids,
                                      const EstimationOptions& options = {});

}  // namespace hrcsyn
