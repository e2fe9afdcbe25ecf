#pragma once

#include <cstdint>
#include <vector>

#include "manna/cancel.hpp"
#include "manna/kkt.hpp"
#include "manna/model.hpp"

namespace manna {

/// Income shares θ_i > 0; empty means all ones.
using Weights = std::vector<double>;

struct PositiveOptions {
  /// 0 starts from the classifier witness; any other seed mixes in a random
  /// feasible allocation.
  std::uint64_t seed = 0;
  std::size_t max_iterations = 100000;
  double tolerance = kKktTol;
};

/// Maximizes Σ_{N_+} θ_i log U_i with N_− agents held at zero utility and
/// returns the division (z, p, +1) with p_a = max_{j∈N_+} θ_j u_ja/U_j.
/// Throws PreconditionError unless the problem is positive and SolverError if
/// no division passes kkt_verify within the iteration cap.
Division solve_positive(const Problem& problem, const Weights& weights = {}, const PositiveOptions& options = {},
                        const CancelToken* cancel = nullptr);

/// Returns (z, p, 0) with a zero profile and multipliers λ ≥ 1 on N_+ such that
/// p_a = max_{j∈N_+} λ_j u_ja. Throws PreconditionError unless the problem is null.
Division solve_null(const Problem& problem);

}  // namespace manna
