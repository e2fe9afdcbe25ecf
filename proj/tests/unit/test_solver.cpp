#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "instances.hpp"
#include "manna/audit.hpp"
#include "manna/solver.hpp"

namespace manna {
namespace {

using testing::near;

TEST(PositiveSolver, LambdaFourClosedForm) {
  const Problem p = testing::lambda_problem(4);
  const Division d = solve_positive(p);
  EXPECT_EQ(d.budget, 1);
  EXPECT_TRUE(near(utility_profile(p, d.allocation), {1, 1}, 1e-7));
  EXPECT_TRUE(near(d.price, {-1, -1, 4}, 1e-6));
}

TEST(PositiveSolver, FootnoteProblem) {
  const Problem p = testing::footnote_problem();
  const Division d = solve_positive(p);
  EXPECT_TRUE(near(utility_profile(p, d.allocation), {8, 0}, 1e-7));
  EXPECT_NEAR(d.allocation(0, 0), 1, 1e-7);
  EXPECT_NEAR(d.allocation(0, 1), 1, 1e-7);
  EXPECT_TRUE(near(d.price, {0.75, 0.25}, 1e-6));
}

// Oracle: maximize log U_1 + log U_2 over a 1e-3 grid of (z_1a, z_1b).
std::vector<double> grid_nash(const Problem& p) {
  double best = -1e300;
  std::vector<double> arg;
  for (int x = 0; x <= 1000; ++x)
    for (int y = 0; y <= 1000; ++y) {
      const double a = x / 1000.0, b = y / 1000.0;
      const double u1 = p.u(0, 0) * a + p.u(0, 1) * b;
      const double u2 = p.u(1, 0) * (1 - a) + p.u(1, 1) * (1 - b);
      if (u1 <= 0 || u2 <= 0) continue;
      const double v = std::log(u1) + std::log(u2);
      if (v > best) best = v, arg = {u1, u2};
    }
  return arg;
}

TEST(PositiveSolver, TwoGoodsMatchesGridOracle) {
  const Problem p = make_problem<double>({{2, 1}, {1, 2}});
  const Division d = solve_positive(p);
  EXPECT_TRUE(near(utility_profile(p, d.allocation), {2, 2}, 1e-7));
  EXPECT_TRUE(near(d.price, {1, 1}, 1e-6));
  EXPECT_TRUE(near(grid_nash(p), {2, 2}, 1e-9));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.1, 3);
  for (int t = 0; t < 20; ++t) {
    const Problem q = make_problem<double>({{u(rng), u(rng)}, {u(rng), u(rng)}});
    const UtilityProfile got = utility_profile(q, solve_positive(q).allocation);
    const std::vector<double> oracle = grid_nash(q);
    // The grid optimum is within one step of the true one.
    EXPECT_GE(std::log(got[0]) + std::log(got[1]), std::log(oracle[0]) + std::log(oracle[1]) - 1e-9) << t;
    EXPECT_TRUE(near(got, oracle, 1e-2)) << t;
  }
}

TEST(PositiveSolver, WeightedBudgets) {
  const Problem p = make_problem<double>({{2, 1}, {1, 2}});
  const Weights w = {1, 3};
  const Division d = solve_positive(p, w);
  EXPECT_TRUE(kkt_verify(p, d, kKktTol, std::span<const double>(w)).passed);
  for (std::size_t i = 0; i < 2; ++i) {
    double spent = 0;
    for (std::size_t a = 0; a < 2; ++a) spent += d.price[a] * d.allocation(i, a);
    EXPECT_NEAR(spent, w[i], 1e-7);
  }
}

TEST(PositiveSolver, RejectsOtherKinds) {
  EXPECT_THROW(solve_positive(testing::lambda_problem(-1)), PreconditionError);
  EXPECT_THROW(solve_null(testing::lambda_problem(4)), PreconditionError);
}

// Property: restarts agree, KKT holds, and the division passes the fairness audit.
TEST(PositiveSolver, RestartsAgreeAndAuditPasses) {
  std::mt19937_64 rng(21);
  RandomProblemSpec spec;
  spec.max_agents = 5;
  spec.max_items = 5;
  for (int t = 0; t < 60; ++t) {
    const Problem p = random_problem(rng, spec, ProblemKind::Positive);
    const Division a = solve_positive(p);
    PositiveOptions restart;
    restart.seed = 1000 + t;
    const Division b = solve_positive(p, {}, restart);
    ASSERT_TRUE(near(utility_profile(p, a.allocation), utility_profile(p, b.allocation), 1e-6)) << t;
    EXPECT_TRUE(kkt_verify(p, a).passed) << t;
    EXPECT_TRUE(audit_allocation(p, a.allocation).all_passed()) << t;
  }
}

TEST(NullSolver, LambdaTwo) {
  const Problem p = testing::lambda_problem(2);
  const Division d = solve_null(p);
  EXPECT_EQ(d.budget, 0);
  EXPECT_TRUE(near(utility_profile(p, d.allocation), {0, 0}, 1e-12));
  EXPECT_TRUE(kkt_verify(p, d, 1e-9).passed);
  ASSERT_EQ(d.multipliers.size(), 2u);
  for (double l : d.multipliers) EXPECT_GE(l, 1.0 - 1e-12);
  // p_a = max_j λ_j u_ja.
  for (std::size_t a = 0; a < 3; ++a)
    EXPECT_NEAR(d.price[a], std::max(d.multipliers[0] * p.u(0, a), d.multipliers[1] * p.u(1, a)), 1e-12);
}

TEST(NullSolver, NoAttractedAgents) {
  const Problem p = make_problem<double>({{0, -1}, {-1, 0}});
  const Division d = solve_null(p);
  EXPECT_TRUE(near(d.price, {0, 0}, 1e-12));
  EXPECT_NEAR(d.allocation(0, 0), 1, 1e-12);
  EXPECT_NEAR(d.allocation(1, 1), 1, 1e-12);
}

TEST(NullSolver, AllZeroUtilities) {
  const Problem p = make_problem<double>({{0, 0}, {0, 0}});
  const Division d = solve_null(p);
  EXPECT_TRUE(check_feasible(p, d.allocation));
  EXPECT_TRUE(near(d.price, {0, 0}, 1e-12));
}

}  // namespace
}  // namespace manna
