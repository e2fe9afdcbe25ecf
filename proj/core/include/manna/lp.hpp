#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace manna {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Relation { LessEqual, Equal, GreaterEqual };

struct LpConstraint {
  std::vector<double> coefficients;
  Relation relation = Relation::LessEqual;
  double rhs = 0.0;
};

/// maximize objective·x subject to the constraints and lower ≤ x ≤ upper.
/// Bounds may be infinite. Defaults: 0 ≤ x < ∞.
struct LpSpec {
  std::vector<double> objective;
  std::vector<LpConstraint> constraints;
  std::vector<double> lower;
  std::vector<double> upper;

  LpSpec() = default;
  explicit LpSpec(std::size_t num_vars)
      : objective(num_vars, 0.0), lower(num_vars, 0.0), upper(num_vars, kInfinity) {}

  std::size_t num_vars() const { return objective.size(); }

  LpConstraint& add(std::vector<double> coefficients, Relation relation, double rhs) {
    constraints.push_back({std::move(coefficients), relation, rhs});
    return constraints.back();
  }
  void make_free(std::size_t var) {
    lower[var] = -kInfinity;
    upper[var] = kInfinity;
  }
};

enum class LpStatus { Optimal, Infeasible, Unbounded, NumericFailure };

std::string to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::NumericFailure;
  std::vector<double> point;
  double value = 0.0;
  /// One multiplier per constraint, ∂value/∂rhs.
  std::vector<double> dual;
  /// Dual objective at `dual`; equals `value` up to round-off when Optimal.
  double dual_value = 0.0;
  std::size_t iterations = 0;

  bool optimal() const { return status == LpStatus::Optimal; }
};

/// Dense two-phase primal simplex with Bland's rule. Deterministic for a fixed
/// spec. Every Optimal answer is re-checked for primal feasibility (1e-8) and
/// strong duality (1e-7 relative); failures come back as NumericFailure.
LpSolution solve_lp(const LpSpec& spec);

}  // namespace manna
