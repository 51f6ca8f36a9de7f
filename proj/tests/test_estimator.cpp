#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "hrcsyn/campaign.hpp"
#include "hrcsyn/error.hpp"
#include "hrcsyn/estimator.hpp"
#include "support.hpp"

using namespace hrcsyn;

namespace {

ExecutionRecord rec(const std::string& plan, std::int64_t seq, const std::string& task, Agent a, double s, double e,
                    bool ok = true) {
  return {plan, seq, task, a, TimeInterval(s, e), ok};
}

DurationTable one_stat(const std::string& id, Agent a, double mean) {
  DurationTable t;
  t.put({id, a, mean, 0.0, 1});
  return t;
}

}  // namespace

TEST_CASE("expected_duration") {
  const std::vector<double> constant{10, 10, 10};
  auto s = expected_duration(constant);
  CHECK(s.mean == 10.0);
  CHECK(s.std == 0.0);
  CHECK(s.count == 3);

  const std::vector<double> pair{8, 12};
  s = expected_duration(pair);
  CHECK(s.mean == 10.0);
  CHECK(s.std == doctest::Approx(std::sqrt(8.0)).epsilon(1e-12));

  const std::vector<double> single{5};
  s = expected_duration(single);
  CHECK(s.mean == 5.0);
  CHECK(s.std == 0.0);
  CHECK(s.count == 1);

  CHECK_THROWS_AS(expected_duration(std::vector<double>{}), EmptySampleSet);
  CHECK_THROWS_AS(expected_duration(std::vector<double>{3, 0, 4}), NonPositiveSample);
}

TEST_CASE("filter_outliers IQR fences") {
  // Sorted: 9 10 10 11 100. Q1 = 10, Q3 = 11, fences [8.5, 12.5].
  const std::vector<double> samples{10, 11, 9, 10, 100};
  const auto r = filter_outliers(samples, OutlierStrategy::Iqr);
  CHECK(r.removed == std::vector<std::size_t>{4});
  CHECK(r.kept == std::vector<std::size_t>{0, 1, 2, 3});
  CHECK(r.lower_fence == 8.5);
  CHECK(r.upper_fence == 12.5);
  CHECK(r.strategy == "iqr");

  CHECK(filter_outliers(std::vector<double>{10, 10, 10}, OutlierStrategy::Iqr).removed.empty());
  const auto none = filter_outliers(samples, OutlierStrategy::None);
  CHECK(none.removed.empty());
  CHECK(none.kept.size() == samples.size());
  CHECK_THROWS_AS(filter_outliers(std::vector<double>{}, OutlierStrategy::Iqr), EmptySampleSet);
}

TEST_CASE("filter_outliers is permutation invariant and partitions the samples") {
  std::mt19937_64 rng(3);
  std::lognormal_distribution<double> dist(2.0, 0.6);
  for (int round = 0; round < 100; ++round) {
    std::vector<double> samples(20 + round % 17);
    for (auto& x : samples) x = dist(rng);
    auto removed_values = [](const std::vector<double>& xs) {
      const auto r = filter_outliers(xs, OutlierStrategy::Iqr);
      CHECK(r.kept.size() + r.removed.size() == xs.size());
      std::vector<double> out;
      for (auto k : r.removed) out.push_back(xs[k]);
      std::sort(out.begin(), out.end());
      return out;
    };
    const auto before = removed_values(samples);
    std::shuffle(samples.begin(), samples.end(), rng);
    CHECK(removed_values(samples) == before);
  }
}

TEST_CASE("build_regression examples") {
  const auto stats = one_stat("r", Agent::Robot, 10.0);
  const std::vector<std::string> cols{"h1", "h2"};

  SUBCASE("single overlapping counterpart") {
    std::vector<ExecutionTrace> traces{{"p", {rec("p", 0, "h1", Agent::Human, 0, 8), rec("p", 1, "r", Agent::Robot, 0, 14)}}};
    const auto prob = build_regression(traces, "r", Agent::Robot, stats, std::span(cols).first(1));
    REQUIRE(prob.design.rows() == 1);
    REQUIRE(prob.design.cols() == 1);
    CHECK(prob.design(0, 0) == doctest::Approx(10.0 * 8.0 / 14.0).epsilon(1e-14));
    CHECK(prob.response(0) == doctest::Approx(14.0 - 10.0 * (1.0 - 8.0 / 14.0)).epsilon(1e-14));
    CHECK(prob.row_keys == std::vector<RecordKey>{{"p", 1}});
  }
  SUBCASE("no concurrency gives a zero row") {
    std::vector<ExecutionTrace> traces{{"p", {rec("p", 0, "h1", Agent::Human, 20, 28), rec("p", 1, "r", Agent::Robot, 0, 12)}}};
    const auto prob = build_regression(traces, "r", Agent::Robot, stats, cols);
    CHECK(prob.design.row(0).isZero());
    CHECK(prob.response(0) == doctest::Approx(2.0));
  }
  SUBCASE("repeated counterpart instances sum into one column") {
    std::vector<ExecutionTrace> traces{{"p",
                                        {rec("p", 0, "h1", Agent::Human, 0, 3), rec("p", 1, "h2", Agent::Human, 3, 5),
                                         rec("p", 2, "h1", Agent::Human, 5, 9), rec("p", 3, "r", Agent::Robot, 0, 10)}}};
    const auto prob = build_regression(traces, "r", Agent::Robot, stats, cols);
    CHECK(prob.design(0, 0) == doctest::Approx(10.0 * 0.7));
    CHECK(prob.design(0, 1) == doctest::Approx(10.0 * 0.2));
    CHECK(prob.response(0) == doctest::Approx(10.0 - 10.0 * 0.1));
  }
  SUBCASE("failed and excluded executions are skipped") {
    std::vector<ExecutionTrace> traces{{"p",
                                        {rec("p", 0, "r", Agent::Robot, 0, 10, false), rec("p", 1, "r", Agent::Robot, 10, 20),
                                         rec("p", 2, "r", Agent::Robot, 20, 31)}}};
    const auto prob = build_regression(traces, "r", Agent::Robot, stats, cols, {{"p", 2}});
    CHECK(prob.row_keys == std::vector<RecordKey>{{"p", 1}});
  }
  SUBCASE("errors") {
    std::vector<ExecutionTrace> traces{{"p", {rec("p", 0, "h1", Agent::Human, 0, 8)}}};
    CHECK_THROWS_AS(build_regression(traces, "r", Agent::Robot, stats, cols), NoSamples);
    CHECK_THROWS_AS(build_regression(traces, "zz", Agent::Robot, stats, cols), MissingDuration);
  }
}

TEST_CASE("solve_synergy examples") {
  SUBCASE("noise-free recovery") {
    RegressionProblem p;
    p.own_task_id = "r";
    p.design.resize(6, 2);
    p.design << 4, 1, 2, 5, 7, 0.5, 1, 1, 3, 6, 0, 2;
    const Eigen::Vector2d truth(1.5, 0.8);
    p.response = p.design * truth;
    const auto s = solve_synergy(p);
    CHECK(std::abs(s.coefficients[0] - 1.5) <= 1e-9);
    CHECK(std::abs(s.coefficients[1] - 0.8) <= 1e-9);
    CHECK_FALSE(s.ridge_applied);
    CHECK(s.sample_counts == std::vector<std::int64_t>{5, 6});
  }
  SUBCASE("unobserved column stays neutral") {
    RegressionProblem p;
    p.design.resize(3, 2);
    p.design << 2, 0, 3, 0, 5, 0;
    p.response = Eigen::Vector3d(4, 6, 10);
    const auto s = solve_synergy(p);
    CHECK(s.coefficients[0] == doctest::Approx(2.0));
    CHECK(s.coefficients[1] == 1.0);
    CHECK(s.sample_counts[1] == 0);
    CHECK(s.std_errors[1] == 0.0);
  }
  SUBCASE("one by one") {
    RegressionProblem p;
    p.design = Eigen::MatrixXd::Constant(1, 1, 5.0);
    p.response = Eigen::VectorXd::Constant(1, 7.5);
    const auto s = solve_synergy(p);
    CHECK(s.coefficients[0] == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(s.std_errors[0] == 0.0);
  }
  SUBCASE("collinear columns trigger ridge") {
    RegressionProblem p;
    p.design.resize(4, 2);
    p.design << 1, 2, 2, 4, 3, 6, 4, 8;
    p.response = Eigen::Vector4d(5, 10, 15, 20);
    const auto s = solve_synergy(p);
    CHECK(s.ridge_applied);
    CHECK(s.ridge_columns[0]);
    CHECK(s.ridge_columns[1]);
    // Any ridge solution still fits the consistent data.
    const Eigen::Vector2d x(s.coefficients[0], s.coefficients[1]);
    CHECK((p.design * x - p.response).norm() <= 1e-6 * p.response.norm());
  }
  SUBCASE("no rows") {
    RegressionProblem p;
    p.design.resize(0, 2);
    p.response.resize(0);
    CHECK_THROWS_AS(solve_synergy(p), EmptyProblem);
  }
}

TEST_CASE("solve_synergy agrees with the pseudo-inverse and satisfies the normal equations") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> mdist(1, 5);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::normal_distribution<double> noise(0.0, 1.0);
  int checked = 0;
  while (checked < 200) {
    const int m = mdist(rng);
    const int n = std::uniform_int_distribution<int>(m, 20)(rng);
    RegressionProblem p;
    p.design.resize(n, m);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) p.design(i, j) = u(rng);
    p.response.resize(n);
    for (int i = 0; i < n; ++i) p.response(i) = p.design.row(i).sum() * 1.2 + noise(rng);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(p.design);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) < 1e-3 * sv(0)) continue;
    ++checked;

    const auto s = solve_synergy(p);
    Eigen::VectorXd x(m);
    for (int j = 0; j < m; ++j) x(j) = s.coefficients[static_cast<std::size_t>(j)];
    const Eigen::VectorXd oracle = test::pinv_solve(p.design, p.response);
    for (int j = 0; j < m; ++j) CHECK(std::abs(x(j) - oracle(j)) <= 1e-6);

    const Eigen::MatrixXd xtx = p.design.transpose() * p.design;
    const Eigen::VectorXd xty = p.design.transpose() * p.response;
    CHECK((xtx * x - xty).norm() <= 1e-8 * xty.norm());
    const Eigen::VectorXd resid = p.response - p.design * x;
    for (int j = 0; j < m; ++j) {
      CHECK(std::abs(p.design.col(j).dot(resid)) <= 1e-8 * p.design.col(j).norm() * p.response.norm());
    }
    // Standard errors follow sigma^2 (X'X)^-1 with n - m residual dof.
    const double sigma2 = resid.squaredNorm() / std::max(n - m, 1);
    const Eigen::MatrixXd cov = sigma2 * xtx.inverse();
    for (int j = 0; j < m; ++j) {
      CHECK(s.std_errors[static_cast<std::size_t>(j)] == doctest::Approx(std::sqrt(cov(j, j))).epsilon(1e-6));
    }
  }
}

TEST_CASE("estimate_durations groups by task and drops outliers") {
  std::vector<ExecutionTrace> traces;
  const std::vector<double> lengths{10, 11, 9, 10, 100};
  for (std::size_t k = 0; k < lengths.size(); ++k) {
    const std::string plan = "p" + std::to_string(k);
    traces.push_back({plan, {rec(plan, 0, "r", Agent::Robot, 0, lengths[k]), rec(plan, 1, "h", Agent::Human, 0, 4),
                             rec(plan, 2, "h", Agent::Human, 4, 7, false)}});
  }
  const auto table = estimate_durations(traces);
  REQUIRE(table.size() == 2);
  CHECK(table.require("r").mean == 10.0);
  CHECK(table.require("r").count == 4);
  CHECK(table.require("r").agent == Agent::Robot);
  CHECK(table.require("h").mean == 4.0);
  CHECK(table.require("h").count == 5);

  EstimationOptions keep_all;
  keep_all.outlier_filter = make_outlier_filter(OutlierStrategy::None);
  CHECK(estimate_durations(traces, keep_all).require("r").count == 5);
}

namespace {

// Campaign in which every human blue-box task keeps the robot at half speed.
std::vector<ExecutionTrace> slowdown_traces(ExecPolicy policy) {
  auto config = default_world_config();
  config.zones["collaborative"] = {0.0, 1.0, 0.0};
  const auto domain = make_workcell_domain(config);
  return campaign_traces(run_campaign(config, domain, 200, 5, policy));
}

}  // namespace

TEST_CASE("estimate_synergy_matrix on a half-speed campaign") {
  const auto config = default_world_config();
  const auto traces = slowdown_traces(ExecPolicy::Serial);
  const auto stats = estimate_durations(traces);
  const auto human = config.task_ids(Agent::Human);
  const auto robot = config.task_ids(Agent::Robot);
  const auto m = estimate_synergy_matrix(traces, stats, human, robot);
  for (const auto& r : robot) {
    for (const auto& h : human) {
      const auto e = m.get(Agent::Robot, r, h);
      CAPTURE(r);
      CAPTURE(h);
      CHECK(e.sample_count > 0);
      if (h.find("blue") != std::string::npos) {
        CHECK(e.coefficient > 1.3);
      } else {
        CHECK(std::abs(e.coefficient - 1.0) < 0.15);
      }
    }
  }
  // The robot never slows the human.
  for (const auto& h : human) {
    for (const auto& r : robot) {
      const auto e = m.get(Agent::Human, h, r);
      if (e.sample_count > 0) CHECK(std::abs(e.coefficient - 1.0) < 0.15);
    }
  }

  SUBCASE("deterministic and independent of the execution policy") {
    CHECK(estimate_synergy_matrix(traces, stats, human, robot) == m);
    EstimationOptions parallel;
    parallel.policy = ExecPolicy::Parallel;
    CHECK(estimate_synergy_matrix(traces, stats, human, robot, parallel) == m);
    CHECK(estimate_durations(traces, parallel) == stats);
  }
}

TEST_CASE("estimate_synergy_matrix bookkeeping") {
  const std::vector<std::string> human{"h1", "h2"};
  const std::vector<std::string> robot{"r1", "r2"};
  DurationTable stats;
  for (const auto& id : human) stats.put({id, Agent::Human, 5, 0, 1});
  for (const auto& id : robot) stats.put({id, Agent::Robot, 5, 0, 1});

  SUBCASE("no concurrency anywhere") {
    std::vector<ExecutionTrace> traces{{"p",
                                        {rec("p", 0, "h1", Agent::Human, 0, 5), rec("p", 1, "h2", Agent::Human, 5, 10),
                                         rec("p", 2, "r1", Agent::Robot, 10, 15), rec("p", 3, "r2", Agent::Robot, 15, 20)}}};
    const auto m = estimate_synergy_matrix(traces, stats, human, robot);
    for (Agent a : kAgents) {
      CHECK(m.entries(a).size() == 4);
      for (const auto& [key, e] : m.entries(a)) {
        CHECK(e.coefficient == 1.0);
        CHECK(e.sample_count == 0);
      }
    }
  }
  SUBCASE("single overlapping pair") {
    std::vector<ExecutionTrace> traces{{"p", {rec("p", 0, "h1", Agent::Human, 0, 6), rec("p", 1, "r1", Agent::Robot, 0, 6)}}};
    const auto m = estimate_synergy_matrix(traces, stats, human, robot);
    int observed = 0;
    for (Agent a : kAgents) {
      for (const auto& [key, e] : m.entries(a)) {
        if (e.sample_count > 0) {
          ++observed;
          CHECK(e.sample_count == 1);
          CHECK(e.low_confidence);
          CHECK(e.coefficient == doctest::Approx(1.2));
        }
      }
    }
    CHECK(observed == 2);
    // Rows with no executions are reported as diagnostics, not failures.
    CHECK(m.get(Agent::Human, "h2", "r1").diagnostic == "NoSamples");
    CHECK(m.get(Agent::Human, "h2", "r1").coefficient == 1.0);
  }
  SUBCASE("non-positive estimates are clamped") {
    std::vector<ExecutionTrace> traces{{"p", {rec("p", 0, "h1", Agent::Human, 0, 1), rec("p", 1, "r1", Agent::Robot, 0, 10)}}};
    DurationTable big = stats;
    big.put({"r1", Agent::Robot, 20, 0, 1});
    const auto m = estimate_synergy_matrix(traces, big, human, robot);
    const auto e = m.get(Agent::Robot, "r1", "h1");
    CHECK(e.clamped);
    CHECK(e.coefficient == kMinCoefficient);
  }
}
