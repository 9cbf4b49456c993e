#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "trdecomp/als.hpp"
#include "trdecomp/constructions.hpp"
#include "trdecomp/errors.hpp"
#include "trdecomp/experiments.hpp"

using namespace trdecomp;

TEST(Objective, BasicValues) {
  const TRCores u = random_cores(3, 2, Shape{3, 3, 3}, 1);
  const DenseTensor t = tau(u);
  EXPECT_EQ(objective(t, u), 0.0);
  EXPECT_DOUBLE_EQ(objective(t, zero_cores(Shape{3, 3, 3}, 2)), 0.5 * inner(t, t));
  EXPECT_THROW((void)objective(DenseTensor(Shape{3, 3, 4}), u), DomainError);
  const auto inst = build_spurious_instance(3, 2, 5);
  EXPECT_EQ(objective(inst.target, inst.local_min), 0.5);
}

TEST(AlsConfig, Validation) {
  AlsConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.max_loops = 0;
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg = AlsConfig{};
  cfg.conv_tol = -1.0;
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg = AlsConfig{};
  cfg.rank_tol = -1.0;
  EXPECT_THROW(cfg.validate(), DomainError);
}

TEST(Descent, SlackIsRelative) {
  EXPECT_TRUE(is_descent(1.0, 1.0));
  EXPECT_TRUE(is_descent(1.0, 1.0 + 1.5e-10));
  EXPECT_FALSE(is_descent(1.0, 1.0 + 3e-10));
  EXPECT_TRUE(is_descent(0.0, 1e-10));
}

TEST(Microstep, OptimalPointUnchanged) {
  const TRCores u = random_cores(3, 2, Shape{5, 5, 5}, 3);
  const DenseTensor t = tau(u);
  for (std::size_t i = 1; i <= 3; ++i) {
    const MicrostepResult res = solve_microstep(t, u, Mode(i));
    EXPECT_FALSE(res.rank_deficient);
    EXPECT_LE(max_abs_diff(res.core, u.core(i - 1)), 1e-9);
    EXPECT_LE(res.objective_after, 1e-18);
  }
}

TEST(Microstep, RankOneClosedForm) {
  // m = 1 on a 2x2x2 target: the core of mode i is a vector y with
  // tau = y (x) a, so the best y(x) is <a, B(:, x)> / <a, a>.
  const Eigen::MatrixXd g = oracle::gaussian(8, 1, 5);
  const DenseTensor t(Shape{2, 2, 2}, std::vector<double>(g.data(), g.data() + 8));
  const TRCores u = random_cores(3, 1, Shape{2, 2, 2}, 6);
  for (std::size_t i = 1; i <= 3; ++i) {
    const Eigen::MatrixXd b = oracle::unfold(t, i);
    const Eigen::VectorXd a = oracle::alpha(u, i).col(0);
    double best = 0.5 * b.squaredNorm();
    for (Eigen::Index x = 0; x < 2; ++x) best -= 0.5 * std::pow(a.dot(b.col(x)), 2) / a.squaredNorm();
    const MicrostepResult res = solve_microstep(t, u, Mode(i));
    EXPECT_NEAR(res.objective_after, best, 1e-12);
    TRCores next = u;
    next.set_core(i - 1, res.core);
    EXPECT_NEAR(objective(t, next), best, 1e-12);
  }
}

TEST(Microstep, MinimumNormOnRankDeficiency) {
  // n = 2, m = 3: A_i has 4 rows and 9 columns.
  const TRCores u = random_cores(3, 3, Shape{2, 2, 2}, 7);
  const DenseTensor t = tau(random_cores(3, 2, Shape{2, 2, 2}, 8));
  for (std::size_t i = 1; i <= 3; ++i) {
    const MicrostepResult res = solve_microstep(t, u, Mode(i));
    EXPECT_TRUE(res.rank_deficient);
    const Eigen::MatrixXd ref = oracle::min_norm_lstsq(oracle::alpha(u, i), oracle::unfold(t, i));
    EXPECT_LE((gamma(res.core) - ref).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Microstep, FirstOrderStationaryInItsBlock) {
  const DenseTensor t = tau(random_cores(3, 3, Shape{4, 4, 4}, 9));
  const TRCores u = random_cores(3, 2, Shape{4, 4, 4}, 10);
  for (std::size_t i = 1; i <= 3; ++i) {
    const MicrostepResult res = solve_microstep(t, u, Mode(i));
    TRCores at = u;
    at.set_core(i - 1, res.core);
    const double f = objective(t, at);
    EXPECT_NEAR(f, res.objective_after, 1e-10 * (1 + f));
    for (unsigned dir = 0; dir < 50; ++dir) {
      const Eigen::MatrixXd g = oracle::gaussian(res.core.size(), 1, 100 * i + dir);
      DenseTensor moved = res.core;
      for (std::size_t k = 0; k < moved.size(); ++k) moved[k] += 1e-4 * g(k);
      TRCores v = at;
      v.set_core(i - 1, moved);
      EXPECT_GE(objective(t, v), f - 1e-12);
    }
  }
}

TEST(Microstep, SpuriousMinimumIsFixed) {
  const auto inst = build_spurious_instance(3, 2, 5);
  const DenseTensor before = tau(inst.local_min);
  for (std::size_t i = 1; i <= 3; ++i) {
    const MicrostepResult res = solve_microstep(inst.target, inst.local_min, Mode(i));
    EXPECT_NEAR(res.objective_after, 0.5, 1e-12);
    TRCores next = inst.local_min;
    next.set_core(i - 1, res.core);
    EXPECT_LE(max_abs_diff(tau(next), before), 1e-12);
  }
}

TEST(Microstep, GaugeCovariantImage) {
  const DenseTensor t = tau(random_cores(3, 3, Shape{4, 4, 4}, 11));
  for (unsigned trial = 0; trial < 10; ++trial) {
    const TRCores u = random_cores(3, 2, Shape{4, 4, 4}, 20 + trial);
    GaugeTuple g;
    for (unsigned i = 0; i < 3; ++i) g.matrices.push_back(oracle::well_conditioned(2, 7 * trial + i));
    const TRCores v = gauge_transform(u, g);
    for (std::size_t i = 1; i <= 3; ++i) {
      TRCores a = u, b = v;
      a.set_core(i - 1, solve_microstep(t, u, Mode(i)).core);
      b.set_core(i - 1, solve_microstep(t, v, Mode(i)).core);
      const DenseTensor ta = tau(a);
      EXPECT_LE(fnorm(tau(b) - ta), 1e-6 * std::max(1.0, fnorm(ta)));
    }
  }
}

TEST(AlsLoop, OptimalStartStopsAfterOneLoop) {
  const TRCores u = random_cores(3, 2, Shape{4, 4, 4}, 12);
  const AlsTrace trace = als_loop(tau(u), u, AlsConfig{});
  EXPECT_EQ(trace.loops_run, 1u);
  EXPECT_TRUE(trace.converged);
  EXPECT_LE(trace.final_objective(), 1e-9);
  EXPECT_EQ(trace.objectives.size(), 3u);
  EXPECT_EQ(trace.sigma_mins.size(), 3u);
  EXPECT_EQ(trace.loop_max_norms.size(), 1u);
}

TEST(AlsLoop, TraceBookkeeping) {
  AlsConfig cfg;
  cfg.max_loops = 4;
  cfg.conv_tol = 0.0;
  const DenseTensor t = tau(random_cores(4, 3, Shape(4, 3), 13));
  const AlsTrace trace = als_loop(t, random_cores(4, 2, Shape(4, 3), 14), cfg);
  EXPECT_EQ(trace.loops_run, 4u);
  EXPECT_FALSE(trace.converged);
  EXPECT_EQ(trace.objectives.size(), 16u);
  EXPECT_EQ(trace.rank_deficient.size(), 16u);
  EXPECT_EQ(trace.loop_max_norms.size(), 4u);
  EXPECT_DOUBLE_EQ(trace.final_objective(), objective(t, trace.final_cores));
  EXPECT_DOUBLE_EQ(trace.loop_max_norms.back(), max_norm(trace.final_cores));
}

TEST(AlsLoop, MonotoneDescentOnRandomInstances) {
  std::size_t violations = 0;
  AlsConfig cfg;
  cfg.max_loops = 30;
  for (unsigned trial = 0; trial < 100; ++trial) {
    const std::size_t d = 3 + trial % 2;
    const std::size_t m = 1 + trial % 4;
    const Shape dims(d, 3);
    const DenseTensor t = tau(random_cores(d, 3, dims, 500 + trial));
    const AlsTrace trace = als_loop(t, random_cores(d, m, dims, 900 + trial), cfg);
    double prev = trace.initial_objective;
    for (double f : trace.objectives) {
      if (f > prev + 1e-10 * (1 + prev)) ++violations;
      prev = f;
    }
    EXPECT_EQ(trace.descent_violations, 0u);
  }
  EXPECT_EQ(violations, 0u);
}

TEST(AlsLoop, SmallPerturbationTrapsLargerEscapes) {
  const auto inst = build_spurious_instance(3, 3, 10);
  const AlsTrace trapped = als_loop(inst.target, perturb(inst.local_min, 0.1, 1), AlsConfig{});
  EXPECT_GE(trapped.final_objective(), 0.5 - 1e-6);
  std::size_t escaped = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const AlsTrace run = als_loop(inst.target, perturb(inst.local_min, 0.2, seed), AlsConfig{});
    if (run.final_objective() < 0.5 - 0.1) ++escaped;
  }
  EXPECT_GE(escaped, 1u);
}

TEST(OneLoop, ExactlyOneSweep) {
  AlsConfig cfg;
  cfg.max_loops = 50;
  const DenseTensor t = tau(random_cores(3, 2, Shape(3, 4), 15));
  const OneLoopResult res = one_loop(t, random_cores(3, 2, Shape(3, 4), 16), cfg);
  EXPECT_EQ(res.trace.loops_run, 1u);
  EXPECT_EQ(res.trace.objectives.size(), 3u);
  EXPECT_EQ(res.f_after, res.trace.final_objective());
}

TEST(OneLoop, ZeroTargetIsReachedInOneSweep) {
  const OneLoopResult res =
      one_loop(DenseTensor(Shape{4, 4, 4}), random_cores(3, 2, Shape(3, 4), 17), AlsConfig{});
  EXPECT_EQ(res.f_after, 0.0);
}

TEST(OneLoop, OverParameterizedConvergesSmallCase) {
  const DenseTensor t = tau(random_w_cores(3, 2, Shape(3, 4), 18));
  const OneLoopResult res = one_loop(t, random_cores(3, 4, Shape(3, 4), 19), AlsConfig{});
  EXPECT_LE(res.f_after, 1e-12);
}
