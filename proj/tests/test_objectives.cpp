#include <gtest/gtest.h>

#include <thread>

#include "hjmad/objectives.hpp"
#include "hjmad/rng.hpp"

using namespace hjmad;

TEST(Objectives, GriewankValues) {
  auto gw = make_objective("griewank", 2);
  EXPECT_EQ(gw.eval({0.0, 0.0}), 0.0);
  // 1 + 100^2/4000 - cos(100), evaluated independently with 30-digit arithmetic.
  EXPECT_NEAR(gw.eval({100.0, 0.0}), 2.6376811277123161, 1e-12);
  auto gw1 = make_objective("griewank", 1);
  EXPECT_NEAR(gw1.eval({100.0}), 2.6376811277123161, 1e-12);
}

TEST(Objectives, QuadraticValue) {
  auto q = make_objective("quadratic", 1);
  EXPECT_DOUBLE_EQ(q.eval({2.0}), 2.0);
}

TEST(Objectives, KnownOptima) {
  for (const auto& id : objective_ids()) {
    auto obj = make_objective(id);
    ASSERT_TRUE(obj.optimum().has_value()) << id;
    const auto& opt = *obj.optimum();
    EXPECT_NEAR(obj.eval(opt.x), opt.f, 1e-12) << id;
    ASSERT_TRUE(obj.domain().has_value()) << id;
    EXPECT_TRUE(obj.domain()->contains(opt.x)) << id;
  }
  auto rast = make_objective("rastrigin", 2);
  EXPECT_EQ(rast.optimum()->x, Vec({0.0, 0.0}));
  EXPECT_EQ(rast.optimum()->f, 0.0);
  auto levy = make_objective("levy", 2);
  EXPECT_EQ(levy.optimum()->x, Vec({1.0, 1.0}));
}

TEST(Objectives, DefaultDomains) {
  EXPECT_DOUBLE_EQ(make_objective("griewank").domain()->upper[0], 600.0);
  EXPECT_DOUBLE_EQ(make_objective("rastrigin").domain()->upper[0], 5.12);
  EXPECT_DOUBLE_EQ(make_objective("ackley").domain()->upper[0], 32.768);
  EXPECT_DOUBLE_EQ(make_objective("quadratic").domain()->upper[0], 10.0);
}

TEST(Objectives, OptimumIsLowerBoundOverRandomPoints) {
  Rng rng(7);
  for (const auto& id : objective_ids()) {
    auto obj = make_objective(id);
    const double fstar = obj.optimum()->f;
    for (int i = 0; i < 1000; ++i) {
      const Vec x = rng.uniform_in(*obj.domain());
      EXPECT_GE(obj.eval(x), fstar - 1e-9) << id;
    }
  }
}

TEST(Objectives, CounterCountsEveryEval) {
  auto obj = make_objective("griewank", 2);
  EXPECT_EQ(obj.evals(), 0);
  obj.eval({1.0, 2.0});
  obj.eval({3.0, 4.0});
  EXPECT_EQ(obj.evals(), 2);
  obj.eval_uncounted({1.0, 1.0});
  EXPECT_EQ(obj.evals(), 2);
  obj.reset_evals();
  EXPECT_EQ(obj.evals(), 0);
}

TEST(Objectives, CounterExactUnderConcurrentEvaluation) {
  auto obj = make_objective("rastrigin", 2);
  std::vector<std::thread> pool;
  for (int w = 0; w < 4; ++w) {
    pool.emplace_back([&obj, w] {
      Rng rng(100 + w);
      for (int i = 0; i < 2500; ++i) obj.eval(rng.uniform_in(*obj.domain()));
    });
  }
  for (auto& th : pool) th.join();
  EXPECT_EQ(obj.evals(), 10000);
}

TEST(Objectives, EvalIsDeterministic) {
  auto obj = make_objective("ackley", 2);
  const Vec x = {1.234567, -9.87654};
  const double a = obj.eval(x);
  const double b = obj.eval(x);
  EXPECT_EQ(a, b);
}

TEST(Objectives, DimensionMismatchThrows) {
  auto obj = make_objective("griewank", 2);
  EXPECT_THROW(obj.eval({1.0}), std::invalid_argument);
  EXPECT_THROW(obj.eval({1.0, 2.0, 3.0}), std::invalid_argument);
}

TEST(Objectives, UnknownIdAndBadDims) {
  EXPECT_THROW(make_objective("foo"), std::invalid_argument);
  EXPECT_THROW(make_objective("doublewell", 2), std::invalid_argument);
  EXPECT_NO_THROW(make_objective("griewank", 5));
}

TEST(Objectives, DefaultDims) {
  EXPECT_EQ(make_objective("griewank").dim(), 2);
  EXPECT_EQ(make_objective("quadratic").dim(), 1);
  EXPECT_EQ(make_objective("doublewell").dim(), 1);
}

TEST(Objectives, GammaSpecValidation) {
  EXPECT_NO_THROW(GammaSpec{0.5}.validate());
  EXPECT_THROW(GammaSpec{0.0}.validate(), std::invalid_argument);
  EXPECT_THROW(GammaSpec{-1.0}.validate(), std::invalid_argument);
}
