#include <gtest/gtest.h>

#include "manna/model.hpp"

namespace manna {
namespace {

Problem mixed() { return make_problem<double>({{3, -1, 0}, {-2, -1, 0}}, {1, 2, 1}); }

TEST(Model, DefaultNamesAndShapes) {
  const Problem p = mixed();
  EXPECT_EQ(p.agents, (std::vector<std::string>{"1", "2"}));
  EXPECT_EQ(p.items, (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(p.endowment, (std::vector<double>{1, 2, 1}));
  EXPECT_NO_THROW(p.validate());
}

TEST(Model, ValidateRejectsBrokenInvariants) {
  Problem p = mixed();
  p.endowment[1] = 0;
  EXPECT_THROW(p.validate(), InputError);
  p = mixed();
  p.utilities(0, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(p.validate(), InputError);
  p = mixed();
  p.agents.pop_back();
  EXPECT_THROW(p.validate(), InputError);
}

TEST(Model, ItemAndAgentPartitions) {
  const Problem p = mixed();
  const ItemPartition items = partition_items(p);
  EXPECT_EQ(items.a_plus, std::vector<std::size_t>{0});
  EXPECT_EQ(items.a_minus, std::vector<std::size_t>{1});
  EXPECT_EQ(items.a_zero, std::vector<std::size_t>{2});
  const AgentPartition agents = partition_agents(p);
  EXPECT_EQ(agents.n_plus, std::vector<std::size_t>{0});
  EXPECT_EQ(agents.n_minus, std::vector<std::size_t>{1});
}

TEST(Model, ProfileOfEqualSplit) {
  const Problem p = mixed();
  const Allocation z = equal_split(p);
  EXPECT_TRUE(check_feasible(p, z));
  const UtilityProfile u = utility_profile(p, z);
  EXPECT_DOUBLE_EQ(u[0], 0.5 * (3 - 2));
  EXPECT_DOUBLE_EQ(u[1], 0.5 * (-2 - 2));
}

TEST(Model, FeasibilityChecksBalanceAndSign) {
  const Problem p = mixed();
  Allocation z = equal_split(p);
  z(0, 1) += 1e-3;
  EXPECT_FALSE(check_feasible(p, z));
  z = equal_split(p);
  z(0, 0) = -0.1;
  z(1, 0) = 1.1;
  EXPECT_FALSE(check_feasible(p, z));
}

TEST(Model, ExactConversionRoundTrips) {
  const ExactProblem e = make_problem<Rational>({{Rational(1, 3), Rational(-2)}}, {Rational(1), Rational(5, 2)});
  const Problem d = to_double(e);
  EXPECT_DOUBLE_EQ(d.u(0, 0), 1.0 / 3.0);
  EXPECT_EQ(to_exact(d).endowment[1], Rational(5, 2));
}

TEST(Model, RescaleAgents) {
  const Problem p = rescale_agents(mixed(), std::vector<double>{2.0, 0.5});
  EXPECT_DOUBLE_EQ(p.u(0, 0), 6.0);
  EXPECT_DOUBLE_EQ(p.u(1, 1), -0.5);
}

}  // namespace
}  // namespace manna
