#include <gtest/gtest.h>

#include <cmath>

#include "hjmad/baselines.hpp"
#include "hjmad/objectives.hpp"

using namespace hjmad;

TEST(GdFd, QuadraticLinearDynamics) {
  auto obj = make_objective("quadratic", 1);
  BaselineConfig cfg;
  cfg.method = BaselineMethod::gd_fd;
  cfg.step_size = 0.5;
  cfg.budget = 1000;
  cfg.target_tolerance = std::nullopt;
  const Trace trace = run_gd_fd(obj, {2.0}, cfg);
  double expected = 2.0;
  for (const auto& r : trace.records) {
    ASSERT_NEAR(r.x[0], expected, 1e-8) << "k=" << r.k;
    expected *= 0.5;
    EXPECT_EQ(r.cum_evals, 2ll * r.k);  // 2n evaluations per step
  }
  EXPECT_EQ(trace.stop_reason, StopReason::grad_small_at_T);
}

TEST(GdFd, MonotoneDecreaseOnConvexQuadratic) {
  auto obj = make_objective("quadratic", 2);
  BaselineConfig cfg;
  cfg.step_size = 0.8;  // < 2/L with L = 1
  cfg.budget = 500;
  cfg.target_tolerance = std::nullopt;
  const Trace trace = run_gd_fd(obj, {3.0, -4.0}, cfg);
  for (std::size_t k = 1; k < trace.records.size(); ++k) {
    EXPECT_LE(trace.records[k].f_x, trace.records[k - 1].f_x + 1e-10);
  }
}

TEST(GdFd, BudgetExhaustionStopsRun) {
  auto obj = make_objective("griewank", 2);
  BaselineConfig cfg;
  cfg.step_size = 0.5;
  cfg.budget = 10;  // 4 evals per step in 2-D
  cfg.target_tolerance = std::nullopt;
  const Trace trace = run_gd_fd(obj, {50.0, 50.0}, cfg);
  EXPECT_EQ(trace.stop_reason, StopReason::max_iters);
  EXPECT_EQ(trace.records.size(), 2u);
  EXPECT_LE(trace.records.back().cum_evals, 10);
}

// From a basin whose local minimum exceeds the benchmark tolerance, GD stays
// trapped (the acceptance suite runs the full jittered-start protocol).
TEST(GdFd, TrapsInNonGlobalGriewankBasin) {
  auto obj = make_objective("griewank", 2);
  BaselineConfig cfg;
  cfg.step_size = 0.5;
  cfg.budget = 200000;
  cfg.target_tolerance = 5e-2;
  const Trace trace = run_gd_fd(obj, {18.85, 0.0}, cfg);
  EXPECT_GT(trace.best_f, 5e-2);
  // converged to the local minimum near (6 pi, 0), value ~0.0888
  EXPECT_NEAR(trace.best_f, 0.08878204825740377, 1e-6);
}

TEST(GdFd, NonFiniteValueFails) {
  Objective bad("bad", 1, [](const Vec& y) {
    return y[0] < 0.0 ? std::numeric_limits<double>::infinity() : y[0];
  });
  BaselineConfig cfg;
  cfg.step_size = 10.0;
  cfg.budget = 100;
  cfg.target_tolerance = std::nullopt;
  EXPECT_THROW(run_gd_fd(bad, {0.5}, cfg), SolverFailure);
}

TEST(Prs, BudgetOneHasExactlyOneRecord) {
  auto obj = make_objective("griewank", 2);
  BaselineConfig cfg;
  cfg.budget = 1;
  cfg.seed = 42;
  const Trace trace = run_prs(obj, cfg);
  EXPECT_EQ(trace.records.size(), 1u);
  EXPECT_EQ(trace.records.back().cum_evals, 1);
}

TEST(Prs, DeterministicUnderFixedSeed) {
  auto obj1 = make_objective("rastrigin", 2);
  auto obj2 = make_objective("rastrigin", 2);
  BaselineConfig cfg;
  cfg.budget = 5000;
  cfg.seed = 7;
  cfg.target_tolerance = std::nullopt;
  const Trace a = run_prs(obj1, cfg);
  const Trace b = run_prs(obj2, cfg);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].x, b.records[i].x);
    EXPECT_EQ(a.records[i].f_x, b.records[i].f_x);
  }
}

TEST(Prs, IncumbentIsStrictlyDecreasing) {
  auto obj = make_objective("ackley", 2);
  BaselineConfig cfg;
  cfg.budget = 20000;
  cfg.seed = 3;
  cfg.target_tolerance = std::nullopt;
  const Trace trace = run_prs(obj, cfg);
  for (std::size_t i = 1; i < trace.records.size(); ++i) {
    EXPECT_LT(trace.records[i].f_x, trace.records[i - 1].f_x);
  }
  EXPECT_EQ(trace.best_f, trace.records.back().f_x);
}

// Success frequency over a fixed budget matches the analytic sublevel-set
// volume: for f = |x|^2/2 <= 0.05 on [-10,10]^2 the per-sample hit rate is
// pi * 0.1 / 400, so P(success in 500 draws) = 1 - (1-p)^500 = 0.32487.
TEST(Prs, SuccessRateMatchesSublevelVolume) {
  const double p_hit = M_PI * 0.1 / 400.0;
  const double p_success = 1.0 - std::pow(1.0 - p_hit, 500.0);
  const int n_seeds = 400;
  int successes = 0;
  for (int s = 0; s < n_seeds; ++s) {
    auto obj = make_objective("quadratic", 2);
    BaselineConfig cfg;
    cfg.budget = 500;
    cfg.seed = 1000 + s;
    cfg.target_tolerance = 5e-2;
    const Trace trace = run_prs(obj, cfg);
    if (trace.stop_reason == StopReason::target_reached) ++successes;
  }
  const double sigma = std::sqrt(n_seeds * p_success * (1.0 - p_success));
  EXPECT_NEAR(successes, n_seeds * p_success, 3.5 * sigma);
}

TEST(Prs, RequiresDomain) {
  Objective anon("anon", 2, [](const Vec& y) { return squared_norm(y); });
  BaselineConfig cfg;
  cfg.budget = 10;
  EXPECT_THROW(run_prs(anon, cfg), std::invalid_argument);
  cfg.domain = symmetric_box(2, 1.0);
  EXPECT_NO_THROW(run_prs(anon, cfg));
}

TEST(Prs, ConfigValidation) {
  auto obj = make_objective("quadratic", 1);
  BaselineConfig cfg;
  cfg.budget = 0;
  EXPECT_THROW(run_prs(obj, cfg), std::invalid_argument);
  cfg.budget = 10;
  cfg.fd_step = 0.0;
  EXPECT_THROW(run_gd_fd(obj, {1.0}, cfg), std::invalid_argument);
}
