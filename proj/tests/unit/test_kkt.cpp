#include <gtest/gtest.h>

#include "instances.hpp"
#include "manna/kkt.hpp"

namespace manna {
namespace {

template <class T>
BasicDivision<T> division(const std::vector<std::vector<T>>& z, std::vector<T> p, int beta,
                          std::vector<T> multipliers = {}) {
  BasicDivision<T> d;
  d.allocation = BasicAllocation<T>::from_rows(z);
  d.price = std::move(p);
  d.budget = beta;
  d.multipliers = std::move(multipliers);
  return d;
}

Rational R(long long p, long long q = 1) { return Rational(p, q); }

TEST(Kkt, FootnoteDivisionUsesDerivedPrice) {
  const Problem p = testing::footnote_problem();
  EXPECT_TRUE(kkt_verify(p, division<double>({{1, 1}, {0, 0}}, {0.75, 0.25}, 1)).passed);
  // The printed price (1/2, 1/2) lets agent 1 afford two units of a.
  const KktReport bad = kkt_verify(p, division<double>({{1, 1}, {0, 0}}, {0.5, 0.5}, 1));
  EXPECT_FALSE(bad.passed);
  EXPECT_GT(bad.max_demand_residual(), 0.1);
}

TEST(Kkt, PositiveAndNullLambdaDivisions) {
  const Problem four = testing::lambda_problem(4);
  EXPECT_TRUE(kkt_verify(four, division<double>({{1, 0, 0.5}, {0, 1, 0.5}}, {-1, -1, 4}, 1)).passed);
  const Problem two = testing::lambda_problem(2);
  EXPECT_TRUE(kkt_verify(two, division<double>({{1, 0, 0.5}, {0, 1, 0.5}}, {-1, -1, 2}, 0, {1, 1}), 1e-9).passed);
  // N_+ empty: each agent eats its zero-utility item at price 0.
  const Problem zero = make_problem<double>({{0, -1}, {-1, 0}});
  EXPECT_TRUE(kkt_verify(zero, division<double>({{1, 0}, {0, 1}}, {0, 0}, 0)).passed);
}

TEST(Kkt, TwoAgentCutExactly) {
  const ExactProblem p = testing::two_agent_instance<Rational>();
  const auto d = division<Rational>({{R(1), R(1), R(0), R(0), R(0), R(0)}, {R(0), R(0), R(1), R(1), R(1), R(1)}},
                                    {R(-1, 2), R(-1, 2), R(-1, 2), R(-1, 4), R(-1, 8), R(-1, 8)}, -1);
  const KktReport r = kkt_verify(p, d, 0.0);
  EXPECT_TRUE(r.passed) << r.summary();
  EXPECT_EQ(r.max_budget_residual(), 0.0);
}

TEST(Kkt, TwoItemSplitAndBrokenBudget) {
  const ExactProblem p = testing::two_item_instance<Rational>();
  const std::vector<std::vector<Rational>> z = {{R(5, 12), R(0)}, {R(5, 12), R(0)},    {R(1, 6), R(1, 6)},
                                                {R(0), R(5, 18)}, {R(0), R(5, 18)}, {R(0), R(5, 18)}};
  EXPECT_TRUE(kkt_verify(p, division<Rational>(z, {R(-12, 5), R(-18, 5)}, -1), 0.0).passed);

  const KktReport broken = kkt_verify(p, division<Rational>(z, {R(-12, 5), R(-19, 5)}, -1), 0.0);
  EXPECT_FALSE(broken.passed);
  // p_b drops by 1/5 on 5/18 of b: each of agents 4–6 overspends by 1/18.
  for (std::size_t i = 3; i < 6; ++i) EXPECT_NEAR(broken.budget_residuals[i], 1.0 / 18.0, 1e-15) << i;
  EXPECT_NEAR(broken.budget_residuals[2], 1.0 / 30.0, 1e-15);
  EXPECT_EQ(broken.budget_residuals[0], 0.0);
}

TEST(Kkt, PriceSignViolationIsReported) {
  const Problem p = testing::lambda_problem(-1);
  const KktReport r = kkt_verify(p, division<double>({{1, 0, 0.5}, {0, 1, 0.5}}, {-2.0 / 3, -2.0 / 3, 2.0 / 3}, -1));
  EXPECT_FALSE(r.passed);
  EXPECT_EQ(r.price_sign_violations, std::vector<std::size_t>{2});
}

TEST(Kkt, Criticality) {
  const Problem p = testing::lambda_problem(-1);
  EXPECT_TRUE(verify_criticality(p, {-1.5, -1.5}));
  EXPECT_TRUE(verify_criticality(p, {-2.5, -5.0 / 6.0}));
  EXPECT_FALSE(verify_criticality(p, {-1.2, -1.8}));
  EXPECT_TRUE(verify_criticality(make_problem<double>({{-1}}), {-1}));
}

}  // namespace
}  // namespace manna
