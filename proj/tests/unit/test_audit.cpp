#include <gtest/gtest.h>

#include <random>

#include "instances.hpp"
#include "manna/audit.hpp"
#include "manna/rules.hpp"

namespace manna {
namespace {

TEST(Audit, CompetitiveSplitPassesWeakCore) {
  // Two agents like a, the third dislikes it; the competitive split is (½, ½, 0).
  const Problem p = make_problem<double>({{1}, {1}, {-1}});
  const Allocation z = Allocation::from_rows({{0.5}, {0.5}, {0}});
  const FairnessReport f = audit_allocation(p, z);
  EXPECT_TRUE(f.all_passed());
  EXPECT_EQ(f.weak_core, CoreStatus::Holds);
  EXPECT_NEAR(f.fair_share_margin, 1.0 / 6, 1e-12);
  EXPECT_EQ(f.fair_share_agent, 0u);
  EXPECT_NEAR(f.envy_margin, 0, 1e-12);
  EXPECT_NEAR(f.efficiency_gain, 0, 1e-9);
}

TEST(Audit, EqualSplitIsEnvyFreeAndFairShare) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 30; ++t) {
    const Problem p = random_problem(rng);
    const FairnessReport f = audit_allocation(p, equal_split(p));
    EXPECT_TRUE(f.envy_free) << t;
    EXPECT_TRUE(f.fair_share) << t;
    EXPECT_NEAR(f.fair_share_margin, 0, 1e-9) << t;
  }
}

TEST(Audit, SplitDivisionSitsExactlyOnFairShare) {
  // Agent 1 takes a..e and 1/34 of f: exactly half the value of the endowment.
  const Problem p = testing::two_agent_instance();
  const Allocation z = Allocation::from_rows({{1, 1, 1, 1, 1, 1.0 / 34}, {0, 0, 0, 0, 0, 33.0 / 34}});
  const FairnessReport f = audit_allocation(p, z);
  EXPECT_TRUE(f.fair_share);
  EXPECT_NEAR(f.fair_share_margin, 0, 1e-9);
  EXPECT_EQ(f.fair_share_agent, 0u);
}

TEST(Audit, Violations) {
  const Problem p = make_problem<double>({{1, 1}, {1, 1}});
  const FairnessReport f = audit_allocation(p, Allocation::from_rows({{1, 1}, {0, 0}}));
  EXPECT_FALSE(f.envy_free);
  EXPECT_EQ(f.envy_agent, 1u);
  EXPECT_EQ(f.envied_agent, 0u);
  EXPECT_NEAR(f.envy_margin, -2, 1e-12);
  EXPECT_FALSE(f.fair_share);
  EXPECT_NEAR(f.fair_share_margin, -1, 1e-12);
  // Agent 2 alone, endowed with ω/2, does strictly better.
  EXPECT_EQ(f.weak_core, CoreStatus::Blocked);
  EXPECT_EQ(f.blocking_coalition, std::vector<std::size_t>{1});
  EXPECT_TRUE(f.efficient);

  const FairnessReport g = audit_allocation(make_problem<double>({{2, 1}, {1, 2}}),
                                            Allocation::from_rows({{0, 1}, {1, 0}}));
  EXPECT_FALSE(g.efficient);
  EXPECT_NEAR(g.efficiency_gain, 2, 1e-9);
  EXPECT_THROW(audit_allocation(p, Allocation::from_rows({{1, 1}, {1, 0}})), InputError);
}

TEST(Audit, TwoAgentsEnvyFreeIffFairShare) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> unit(0, 1);
  RandomProblemSpec spec;
  spec.min_agents = spec.max_agents = 2;
  for (int t = 0; t < 200; ++t) {
    const Problem p = random_problem(rng, spec);
    Allocation z(2, p.num_items());
    for (std::size_t a = 0; a < p.num_items(); ++a) {
      z(0, a) = unit(rng) * p.endowment[a];
      z(1, a) = p.endowment[a] - z(0, a);
    }
    const FairnessReport f = audit_allocation(p, z);
    EXPECT_EQ(f.envy_free, f.fair_share) << t;
  }
}

TEST(Audit, CompetitiveDivisionsPassOnNegativeProblems) {
  std::mt19937_64 rng(9);
  RandomProblemSpec spec;
  spec.max_agents = 3;
  spec.max_items = 3;
  for (int t = 0; t < 30; ++t) {
    const Problem p = random_problem(rng, spec, ProblemKind::Negative);
    const RuleOutput r = competitive_rule(p);
    for (const Allocation& z : r.allocations) {
      const FairnessReport f = audit_allocation(p, z);
      EXPECT_TRUE(f.all_passed()) << t;
    }
  }
}

TEST(Axioms, CompetitiveRuleSmallRun) {
  std::mt19937_64 rng(13);
  std::vector<Problem> problems;
  RandomProblemSpec spec;
  spec.max_agents = 3;
  spec.max_items = 3;
  for (ProblemKind k : {ProblemKind::Positive, ProblemKind::Negative, ProblemKind::Null})
    for (int t = 0; t < 4; ++t) problems.push_back(random_problem(rng, spec, k));
  const AxiomReport rep = check_rule_axioms(Rule::Competitive, problems, 2, 7);
  EXPECT_TRUE(rep.passed());
  EXPECT_EQ(rep.problems, problems.size());
  for (const AxiomResult* r : rep.results()) EXPECT_GT(r->checks, 0u) << r->name;

  const AxiomReport again = check_rule_axioms(Rule::Competitive, problems, 2, 7);
  for (std::size_t k = 0; k < rep.results().size(); ++k)
    EXPECT_EQ(rep.results()[k]->checks, again.results()[k]->checks);
}

TEST(Axioms, EqualSplitKeepsEteAndScaleInvariance) {
  std::mt19937_64 rng(17);
  std::vector<Problem> problems;
  for (int t = 0; t < 6; ++t) problems.push_back(random_problem(rng));
  const AxiomReport rep = check_rule_axioms(Rule::EqualSplit, problems, 2, 3);
  EXPECT_TRUE(rep.ete.passed());
  EXPECT_TRUE(rep.scale_invariance.passed());
}

TEST(Axioms, LoweringLosingBidsKeepsPositiveDivision) {
  // Agent 2 gets nothing of b at price 1/4; lowering u_2b keeps the division competitive.
  const Problem p = testing::footnote_problem();
  const RuleOutput r = competitive_rule(p);
  const Division& d = r.divisions.at(0);
  const Problem lowered = make_problem<double>({{6, 2}, {0, -5}});
  EXPECT_TRUE(kkt_verify(lowered, d).passed);
}

TEST(RmDemo, CanonicalPair) {
  const ExactProblem base = testing::rm_problem<Rational>();
  ExactProblem improved = base;
  improved.endowment[0] = Rational(1, 9);
  const RmReport rep = rm_demo(base, improved, Rule::Competitive);
  EXPECT_TRUE(rep.exact);
  ASSERT_EQ(rep.item, std::optional<std::size_t>(0));
  EXPECT_EQ(rep.before, (std::vector<Rational>{Rational(-5, 8), Rational(-5, 2)}));
  EXPECT_EQ(rep.after[0], Rational(-37, 18));
  EXPECT_EQ(rep.delta, (std::vector<Rational>{Rational(-103, 72), Rational(143, 72)}));
  EXPECT_FALSE(rep.monotone);
  EXPECT_EQ(rep.worse_off, std::vector<std::size_t>{0});
  ASSERT_EQ(rep.bounds.size(), 2u);
  EXPECT_EQ(rep.bounds[0].other_fair_share, Rational(-13, 18));
  EXPECT_EQ(rep.bounds[0].cap, Rational(-10, 9));
  EXPECT_TRUE(rep.bounds[0].violated);
  EXPECT_FALSE(rm_demo(base, improved, Rule::Egalitarian).monotone);
}

TEST(RmDemo, IdenticalProblemsAndBadInput) {
  const ExactProblem base = testing::rm_problem<Rational>();
  const RmReport same = rm_demo(base, base, Rule::Competitive);
  EXPECT_FALSE(same.item.has_value());
  EXPECT_TRUE(same.monotone);
  for (const Rational& d : same.delta) EXPECT_EQ(d, 0);

  ExactProblem worse = base;
  worse.endowment[0] = 2;
  EXPECT_THROW(rm_demo(base, worse, Rule::Competitive), InputError);
}

TEST(RmDemo, GoodsAreResourceMonotonic) {
  std::mt19937_64 rng(23);
  RandomProblemSpec spec;
  spec.max_agents = 3;
  spec.max_items = 3;
  std::uniform_real_distribution<double> grow(1.1, 2);
  for (int t = 0; t < 20; ++t) {
    Problem p = random_problem(rng, spec, ProblemKind::Positive);
    for (std::size_t i = 0; i < p.num_agents(); ++i)
      for (std::size_t a = 0; a < p.num_items(); ++a) p.utilities(i, a) = std::fabs(p.u(i, a)) + 0.1;
    Problem more = p;
    more.endowment[t % p.num_items()] *= grow(rng);
    EXPECT_TRUE(rm_demo(to_exact(p), to_exact(more), Rule::Competitive).monotone) << t;
  }
}

}  // namespace
}  // namespace manna
