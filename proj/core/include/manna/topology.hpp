#pragma once

#include <cstddef>
#include <vector>

#include "manna/model.hpp"

namespace manna {

/// Connected components of the efficient envy-free set of a two-bads problem.
/// Indices are 1-based positions in the ratio order.
struct ComponentReport {
  std::size_t count = 0;
  /// i such that the cut z^{i/i+1} is envy-free.
  std::vector<std::size_t> ef_cuts;
  /// i whose split rectangle holds a component touching no cut.
  std::vector<std::size_t> interior_splits;
  /// Distinct r_i = u_ia/u_ib in increasing order.
  std::vector<double> ratio_order;
  /// agent_order[k] is the first agent with ratio ratio_order[k].
  std::vector<std::size_t> agent_order;
};

/// Closed-form count. Requires two items and u_ia < 0 everywhere. Agents with
/// equal ratios (relative 1e-12) are merged into one first, and n below is the
/// merged count; t_i = i/(n−i).
ComponentReport ef_components_two_bads(const Problem& problem);

/// Grid oracle on the merged instance: cuts each split rectangle into grid²
/// cells, keeps cells whose clip by the envy half-planes is nonempty, joins
/// 8-neighbours, and joins neighbouring rectangles through a shared cut corner
/// when that corner is envy-free. Requires n ≤ 10 and 2 ≤ grid ≤ 400.
std::size_t brute_force_components(const Problem& problem, std::size_t grid = 200);

/// Items {a, b_1..b_{m−1}} with ũ_ib_k = u_ib/(m−1), unit endowments. Requires a
/// two-item all-bads problem and m ≥ 3.
Problem clone_bads(const Problem& problem, std::size_t m);

/// Replaces every group of items whose columns are positive multiples of one
/// another by a single unit item worth Σ_k u_ik·ω_k.
Problem merge_parallel_items(const Problem& problem);

/// Unit two-bads problem u_i = (−r_i, −1) for any positive ratios.
Problem two_bads_from_ratios(const std::vector<double>& ratios);

/// Ratios following the chain r_1 < r_2 < t_1 < t_3 < r_3 < r_4 < r_5 < t_4 < ...
/// whose count is ⌊(2n+1)/3⌋. Requires n ≥ 1.
std::vector<double> pattern_ratios(std::size_t n);

struct PathSample {
  double s = 0.0;
  std::size_t components = 0;
  UtilityProfile selected;
};

struct DiscontinuityReport {
  std::vector<PathSample> samples;
  /// Largest max-norm change of the selected profile between neighbours.
  double max_jump = 0.0;
  std::size_t jump_index = 0;
};

/// Walks r(s) = (1−s)·from + s·to over `steps` + 1 points, recording the
/// component count and the selected competitive profile at each point.
DiscontinuityReport discontinuity_demo(const std::vector<double>& from, const std::vector<double>& to,
                                       std::size_t steps = 100);

}  // namespace manna
