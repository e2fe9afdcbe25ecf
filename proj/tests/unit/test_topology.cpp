#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "manna/classify.hpp"
#include "manna/topology.hpp"

namespace manna {
namespace {

using Idx = std::vector<std::size_t>;

// Cut i gives a to the i lowest-ratio agents and b to the rest, equally
// shared; with u_k = (−r_k, −1) it is envy-free iff r_i ≤ i/(n−i) ≤ r_{i+1}.
Idx ef_cuts_oracle(std::vector<double> r) {
  std::sort(r.begin(), r.end());
  const std::size_t n = r.size();
  Idx out;
  for (std::size_t i = 1; i < n; ++i) {
    bool ok = true;
    for (std::size_t k = 0; k < n; ++k) {
      const double own = k < i ? -r[k] / i : -1.0 / (n - i);
      const double other = k < i ? -1.0 / (n - i) : -r[k] / i;
      ok = ok && own >= other - 1e-12;
    }
    if (ok) out.push_back(i);
  }
  return out;
}

TEST(Components, Witnesses) {
  const ComponentReport three = ef_components_two_bads(two_bads_from_ratios({0.2, 0.3, 3.5, 4}));
  EXPECT_EQ(three.count, 3u);
  EXPECT_EQ(three.ef_cuts, Idx{2});
  EXPECT_EQ(three.interior_splits, (Idx{1, 4}));
  EXPECT_EQ(three.ratio_order, (std::vector<double>{0.2, 0.3, 3.5, 4}));

  const ComponentReport one = ef_components_two_bads(two_bads_from_ratios({0.2, 0.3, 0.5, 0.9}));
  EXPECT_EQ(one.count, 1u);
  EXPECT_TRUE(one.ef_cuts.empty());
  EXPECT_EQ(one.interior_splits, Idx{1});
}

TEST(Components, SmallCases) {
  EXPECT_EQ(ef_components_two_bads(two_bads_from_ratios({0.5, 2})).count, 1u);
  EXPECT_EQ(ef_components_two_bads(two_bads_from_ratios({1, 1, 1, 1})).count, 1u);
  const Problem p = two_bads_from_ratios({0.1, 0.2, 1.6, 1.7, 1.8});
  const ComponentReport c = ef_components_two_bads(p);
  EXPECT_EQ(c.count, brute_force_components(p, 200));
  EXPECT_EQ(c.count, 3u);
}

TEST(Components, EqualRatiosMerge) {
  const ComponentReport c = ef_components_two_bads(two_bads_from_ratios({0.2, 0.2, 3.5, 3.5}));
  EXPECT_EQ(c.ratio_order.size(), 2u);
  EXPECT_EQ(c.agent_order, (Idx{0, 2}));
}

TEST(Components, Preconditions) {
  EXPECT_THROW(ef_components_two_bads(make_problem<double>({{-1, 1}, {-1, -1}})), PreconditionError);
  EXPECT_THROW(ef_components_two_bads(make_problem<double>({{-1, -1, -1}, {-1, -2, -1}})), PreconditionError);
  EXPECT_THROW(brute_force_components(two_bads_from_ratios({1, 2}), 1), PreconditionError);
}

TEST(Components, EfCutsMatchClosedForm) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> logr(std::log(0.05), std::log(20));
  for (int t = 0; t < 200; ++t) {
    std::vector<double> r(2 + t % 7);
    for (double& x : r) x = std::exp(logr(rng));
    EXPECT_EQ(ef_components_two_bads(two_bads_from_ratios(r)).ef_cuts, ef_cuts_oracle(r)) << t;
  }
}

TEST(Components, FormulaMatchesGridOracle) {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> logr(std::log(0.05), std::log(20));
  for (int t = 0; t < 25; ++t) {
    std::vector<double> r(2 + t % 4);
    for (double& x : r) x = std::exp(logr(rng));
    const Problem p = two_bads_from_ratios(r);
    EXPECT_EQ(ef_components_two_bads(p).count, brute_force_components(p, 200)) << t;
  }
}

TEST(Components, PatternCounts) {
  for (std::size_t n = 1; n <= 12; ++n) {
    const Problem p = two_bads_from_ratios(pattern_ratios(n));
    EXPECT_EQ(ef_components_two_bads(p).count, (2 * n + 1) / 3) << n;
  }
  for (std::size_t n = 3; n <= 6; ++n)
    EXPECT_EQ(brute_force_components(two_bads_from_ratios(pattern_ratios(n)), 200), (2 * n + 1) / 3) << n;
}

TEST(Components, CloningKeepsCount) {
  const Problem p = two_bads_from_ratios({0.2, 0.3, 3.5, 4});
  for (std::size_t m = 3; m <= 5; ++m) {
    const Problem c = clone_bads(p, m);
    ASSERT_EQ(c.num_items(), m);
    for (std::size_t i = 0; i < c.num_agents(); ++i) {
      double sum = 0;
      for (std::size_t k = 1; k < m; ++k) sum += c.u(i, k);
      EXPECT_DOUBLE_EQ(sum, p.u(i, 1));
      EXPECT_EQ(c.u(i, 0), p.u(i, 0));
    }
    const Problem merged = merge_parallel_items(c);
    EXPECT_EQ(merged.num_items(), 2u);
    EXPECT_EQ(ef_components_two_bads(merged).count, 3u);
  }
  EXPECT_EQ(ef_components_two_bads(merge_parallel_items(clone_bads(two_bads_from_ratios({0.5, 2}), 4))).count, 1u);
}

TEST(Components, DiscontinuityPath) {
  const DiscontinuityReport d = discontinuity_demo({0.2, 0.3, 3.5, 4}, {0.2, 0.3, 0.5, 0.9}, 20);
  ASSERT_EQ(d.samples.size(), 21u);
  EXPECT_EQ(d.samples.front().components, 3u);
  EXPECT_EQ(d.samples.back().components, 1u);
  EXPECT_GT(d.max_jump, 0);
}

}  // namespace
}  // namespace manna
