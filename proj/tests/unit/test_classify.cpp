#include <gtest/gtest.h>

#include <random>

#include "instances.hpp"
#include "manna/audit.hpp"
#include "manna/classify.hpp"

namespace manna {
namespace {

using testing::lambda_problem;

TEST(Classify, LambdaFamily) {
  const ProblemKind expected[] = {ProblemKind::Positive, ProblemKind::Positive, ProblemKind::Null,
                                  ProblemKind::Negative, ProblemKind::Negative, ProblemKind::Negative,
                                  ProblemKind::Negative, ProblemKind::Negative};
  for (int lambda = 4, k = 0; lambda >= -3; --lambda, ++k) {
    EXPECT_EQ(classify(lambda_problem(lambda)).kind, expected[k]) << lambda;
    EXPECT_EQ(classify(lambda_problem<Rational>(lambda)).kind, expected[k]) << lambda;
  }
}

TEST(Classify, NullWitnessIsZeroProfile) {
  const Problem p = lambda_problem(2);
  const Classification c = classify(p);
  EXPECT_NEAR(c.margin, 0.0, kClassifyEpsilon);
  EXPECT_TRUE(check_feasible(p, c.witness));
  EXPECT_TRUE(testing::near(utility_profile(p, c.witness), {0, 0}, 1e-9));
}

TEST(Classify, ItemAndAgentPartitionsOfSpecExamples) {
  EXPECT_EQ(partition_items(lambda_problem(-1)).a_minus, (std::vector<std::size_t>{0, 1, 2}));
  const ItemPartition one = partition_items(lambda_problem(1));
  EXPECT_EQ(one.a_plus, std::vector<std::size_t>{2});
  EXPECT_EQ(one.a_minus, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(partition_items(testing::footnote_problem()).a_plus, (std::vector<std::size_t>{0, 1}));

  EXPECT_TRUE(partition_agents(lambda_problem(-1)).n_plus.empty());
  EXPECT_EQ(partition_agents(lambda_problem(4)).n_plus, (std::vector<std::size_t>{0, 1}));
  const AgentPartition f = partition_agents(testing::footnote_problem());
  EXPECT_EQ(f.n_plus, std::vector<std::size_t>{0});
  EXPECT_EQ(f.n_minus, std::vector<std::size_t>{1});
}

TEST(Classify, EfficiencyExampleIsPositive) {
  // u_1 = z_a − 2 z_b, u_2 = −2 z_a + z_b.
  EXPECT_EQ(classify(make_problem<double>({{1, -2}, {-2, 1}})).kind, ProblemKind::Positive);
}

// Property: the witness is feasible and certifies the kind.
TEST(Classify, WitnessCertifiesKindOnRandomProblems) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 300; ++t) {
    const std::optional<ProblemKind> target =
        t % 3 == 0 ? ProblemKind::Positive : (t % 3 == 1 ? ProblemKind::Negative : ProblemKind::Null);
    const Problem p = random_problem(rng, {}, target);
    const Classification c = classify(p);
    ASSERT_EQ(c.kind, *target) << t;
    ASSERT_TRUE(check_feasible(p, c.witness)) << t;
    const UtilityProfile u = utility_profile(p, c.witness);
    const AgentPartition agents = partition_agents(p);
    if (c.kind == ProblemKind::Positive) {
      for (std::size_t i : agents.n_plus) EXPECT_GT(u[i], 0) << t;
      for (std::size_t i : agents.n_minus) EXPECT_NEAR(u[i], 0, 1e-12) << t;
    } else if (c.kind == ProblemKind::Null) {
      for (double v : u) EXPECT_NEAR(v, 0, 1e-9) << t;
    }
  }
}

TEST(Classify, ExactAgreesWithDouble) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 60; ++t) {
    const Problem p = random_problem(rng);
    EXPECT_EQ(classify(to_exact(p)).kind, classify(p).kind) << t;
  }
}

}  // namespace
}  // namespace manna
