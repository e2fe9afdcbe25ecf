#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>

#include "manna/lp.hpp"

namespace manna {
namespace {

TEST(Lp, TextbookMaximum) {
  // max 3x + 5y, x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 → (2, 6), 36.
  LpSpec lp(2);
  lp.objective = {3, 5};
  lp.add({1, 0}, Relation::LessEqual, 4);
  lp.add({0, 2}, Relation::LessEqual, 12);
  lp.add({3, 2}, Relation::LessEqual, 18);
  const LpSolution s = solve_lp(lp);
  ASSERT_TRUE(s.optimal());
  EXPECT_NEAR(s.value, 36, 1e-9);
  EXPECT_NEAR(s.point[0], 2, 1e-9);
  EXPECT_NEAR(s.point[1], 6, 1e-9);
  EXPECT_NEAR(s.dual_value, 36, 1e-7);
}

TEST(Lp, EqualityGreaterEqualAndFreeVariables) {
  // max −|x − 3| written as max t, t ≤ x − 3, t ≤ 3 − x, x free, t free → 0.
  LpSpec lp(2);
  lp.objective = {0, 1};
  lp.make_free(0);
  lp.make_free(1);
  lp.add({-1, 1}, Relation::LessEqual, -3);
  lp.add({1, 1}, Relation::LessEqual, 3);
  lp.add({1, 0}, Relation::GreaterEqual, -10);
  const LpSolution s = solve_lp(lp);
  ASSERT_TRUE(s.optimal());
  EXPECT_NEAR(s.value, 0, 1e-9);
  EXPECT_NEAR(s.point[0], 3, 1e-9);

  LpSpec eq(2);
  eq.objective = {1, 1};
  eq.add({1, 2}, Relation::Equal, 4);
  eq.upper = {1, kInfinity};
  const LpSolution t = solve_lp(eq);
  ASSERT_TRUE(t.optimal());
  EXPECT_NEAR(t.value, 2.5, 1e-9);
}

TEST(Lp, InfeasibleAndUnbounded) {
  LpSpec inf(1);
  inf.objective = {1};
  inf.add({1}, Relation::GreaterEqual, 2);
  inf.add({1}, Relation::LessEqual, 1);
  EXPECT_EQ(solve_lp(inf).status, LpStatus::Infeasible);

  LpSpec unb(2);
  unb.objective = {1, 0};
  unb.add({1, -1}, Relation::LessEqual, 1);
  EXPECT_EQ(solve_lp(unb).status, LpStatus::Unbounded);
}

// Oracle: a 2-variable LP in a box attains its optimum at a vertex of the
// arrangement; enumerate every pairwise line intersection.
double vertex_oracle(const LpSpec& lp) {
  std::vector<std::array<double, 3>> lines;  // a·x = b
  for (const auto& c : lp.constraints) lines.push_back({c.coefficients[0], c.coefficients[1], c.rhs});
  lines.push_back({1, 0, lp.lower[0]});
  lines.push_back({1, 0, lp.upper[0]});
  lines.push_back({0, 1, lp.lower[1]});
  lines.push_back({0, 1, lp.upper[1]});
  double best = -kInfinity;
  for (std::size_t i = 0; i < lines.size(); ++i)
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      const double det = lines[i][0] * lines[j][1] - lines[i][1] * lines[j][0];
      if (std::fabs(det) < 1e-12) continue;
      const double x = (lines[i][2] * lines[j][1] - lines[i][1] * lines[j][2]) / det;
      const double y = (lines[i][0] * lines[j][2] - lines[i][2] * lines[j][0]) / det;
      bool ok = x >= lp.lower[0] - 1e-9 && x <= lp.upper[0] + 1e-9 && y >= lp.lower[1] - 1e-9 && y <= lp.upper[1] + 1e-9;
      for (const auto& c : lp.constraints) ok = ok && c.coefficients[0] * x + c.coefficients[1] * y <= c.rhs + 1e-9;
      if (ok) best = std::max(best, lp.objective[0] * x + lp.objective[1] * y);
    }
  return best;
}

TEST(Lp, MatchesVertexOracleOnRandomBoxedPrograms) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coef(-3, 3), rhs(0.5, 4);
  for (int trial = 0; trial < 200; ++trial) {
    LpSpec lp(2);
    lp.objective = {coef(rng), coef(rng)};
    lp.lower = {-2, -2};
    lp.upper = {3, 3};
    for (int k = 0; k < 4; ++k) lp.add({coef(rng), coef(rng)}, Relation::LessEqual, rhs(rng));
    const LpSolution s = solve_lp(lp);
    ASSERT_TRUE(s.optimal()) << trial;  // 0 is always feasible
    EXPECT_NEAR(s.value, vertex_oracle(lp), 1e-7) << trial;
  }
}

}  // namespace
}  // namespace manna
