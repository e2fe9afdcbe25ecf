#pragma once

#include <span>
#include <string>
#include <vector>

#include "manna/model.hpp"

namespace manna {

inline constexpr double kKktTol = 1e-7;

/// Residuals of the first-order characterization of competitive divisions
/// under additive utilities, evaluated for the regime named by the division's
/// budget (+1 positive, −1 negative, 0 null).
struct KktReport {
  bool passed = false;
  bool feasible = false;
  /// |p·z_i − target_i| / max(1, |target_i|): target θ_i (or 1) on N_+ and 0 on
  /// N_− when positive, −1 when negative, 0 when null.
  std::vector<double> budget_residuals;
  /// Stationarity / maximum-condition violation per (agent, item), relative to
  /// max(1, |p_a|). Zero where the condition holds.
  Matrix<double> demand_residuals;
  std::vector<std::size_t> price_sign_violations;
  std::vector<std::size_t> parsimony_violations;
  /// Agents whose utility has the wrong sign for the regime (U_i ≤ 0 on N_+
  /// when positive, U_i ≥ 0 when negative, U_i ≠ 0 when null).
  std::vector<std::size_t> utility_sign_violations;
  /// Null regime only: the positive multipliers λ used for the check.
  std::vector<double> multipliers;
  double tolerance = kKktTol;

  double max_budget_residual() const;
  double max_demand_residual() const;
  /// One-line human summary ("passed" or the first failing condition).
  std::string summary() const;
};

/// Checks the division against the price-sign rule, budgets, stationarity with
/// the maximum condition, and parsimony. `weights` (income shares) apply to
/// the positive regime; empty means unit weights. For exact scalars a tolerance
/// of 0 makes every comparison exact.
template <class T>
KktReport kkt_verify(const BasicProblem<T>& problem, const BasicDivision<T>& division, double tol = kKktTol,
                     std::span<const T> weights = {});

/// True iff `profile` is feasible and Σ_i U'_i/|U_i| ≤ −|N| for every feasible
/// U' (checked by LP to 1e-7), i.e. a critical point of Π|U_i| on the efficient
/// frontier. Requires a negative problem and a strictly negative profile.
bool verify_criticality(const Problem& problem, const UtilityProfile& profile);

}  // namespace manna
