#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "manna/model.hpp"

namespace manna {

struct SupportEdge {
  std::size_t agent = 0;
  std::size_t item = 0;
  friend bool operator==(const SupportEdge&, const SupportEdge&) = default;
};

/// Pairs (i, a) allowed to carry z_ia > 0. Neutral items need no edges: they
/// are handed to a zero-utility agent at price 0.
struct SupportGraph {
  std::vector<SupportEdge> edges;
};

/// Solves the equilibrium equations on a fixed support. On every edge
/// p_a = θ_i·u_ia/|U_i|; each connected component has one free scale, pinned by
/// Σ_{a∈C} p_a ω_a = sign·Σ_{i∈C} θ_i. Shares follow from item balance and the
/// budgets p·z_i = sign·θ_i (leaf peeling on forests, an LP on cyclic supports
/// for doubles). `sign` is +1 or −1. Agents listed in `required` must touch an
/// edge; every non-neutral item must. Returns nullopt when the support admits
/// no solution with positive scales and nonnegative shares. Off-support demand
/// conditions are not checked here.
template <class T>
std::optional<BasicDivision<T>> solve_on_support(const BasicProblem<T>& problem, const SupportGraph& support,
                                                 int sign, std::span<const std::size_t> required,
                                                 std::span<const T> weights = {});

}  // namespace manna
