#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "manna/matrix.hpp"
#include "manna/scalar.hpp"

namespace manna {

/// Per-item balance tolerance, scaled by max(1, endowment).
inline constexpr double kFeasibilityTol = 1e-9;
/// Shares above -kNegativityCutoff count as nonnegative and are clamped to 0.
inline constexpr double kNegativityCutoff = 1e-12;

/// Malformed problem, allocation, or argument shape.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A division problem: agents N, items A, endowment ω (> 0) and the additive
/// utility matrix u (agents × items, utility per unit of item, any sign).
template <class T>
struct BasicProblem {
  std::vector<std::string> agents;
  std::vector<std::string> items;
  std::vector<T> endowment;
  Matrix<T> utilities;

  std::size_t num_agents() const { return agents.size(); }
  std::size_t num_items() const { return items.size(); }
  const T& u(std::size_t i, std::size_t a) const { return utilities(i, a); }

  /// Throws InputError unless the invariants hold (|N|,|A| ≥ 1, ω > 0,
  /// consistent shapes, finite utilities).
  void validate() const;

  friend bool operator==(const BasicProblem&, const BasicProblem&) = default;
};

using Problem = BasicProblem<double>;
using ExactProblem = BasicProblem<Rational>;

/// Builds a problem with default identifiers ("1","2",... and "a","b",...).
template <class T>
BasicProblem<T> make_problem(const std::vector<std::vector<T>>& utilities,
                             std::vector<T> endowment = {});

template <class T>
struct BasicAllocation {
  Matrix<T> shares;  // agents × items

  BasicAllocation() = default;
  explicit BasicAllocation(Matrix<T> m) : shares(std::move(m)) {}
  BasicAllocation(std::size_t agents, std::size_t items) : shares(agents, items) {}

  static BasicAllocation from_rows(const std::vector<std::vector<T>>& rows) {
    return BasicAllocation(Matrix<T>::from_rows(rows));
  }

  const T& operator()(std::size_t i, std::size_t a) const { return shares(i, a); }
  T& operator()(std::size_t i, std::size_t a) { return shares(i, a); }

  friend bool operator==(const BasicAllocation&, const BasicAllocation&) = default;
};

using Allocation = BasicAllocation<double>;
using ExactAllocation = BasicAllocation<Rational>;

template <class T>
using BasicProfile = std::vector<T>;
using UtilityProfile = BasicProfile<double>;

enum class ItemClass { Good, Bad, Neutral };

/// Collective goods A_+, collective bads A_−, neutral items A_0.
struct ItemPartition {
  std::vector<std::size_t> a_plus;
  std::vector<std::size_t> a_minus;
  std::vector<std::size_t> a_zero;
  std::vector<ItemClass> of_item;
};

/// Attracted agents N_+ and repulsed agents N_−.
struct AgentPartition {
  std::vector<std::size_t> n_plus;
  std::vector<std::size_t> n_minus;
  std::vector<bool> attracted;
};

/// Competitive division (z, p, β). `multipliers` carries the positive weights
/// λ over N_+ that certify a null division; it is empty otherwise.
template <class T>
struct BasicDivision {
  BasicAllocation<T> allocation;
  std::vector<T> price;
  int budget = 0;
  std::vector<T> multipliers;
};

using Division = BasicDivision<double>;
using ExactDivision = BasicDivision<Rational>;

template <class T>
BasicProfile<T> utility_profile(const BasicProblem<T>& problem, const BasicAllocation<T>& z);

template <class T>
ItemPartition partition_items(const BasicProblem<T>& problem);

template <class T>
AgentPartition partition_agents(const BasicProblem<T>& problem);

/// Nonnegativity (cutoff kNegativityCutoff) and per-item balance within
/// tol·max(1, ω_a). For exact scalars, pass tol = 0 for exact checks.
template <class T>
bool check_feasible(const BasicProblem<T>& problem, const BasicAllocation<T>& z,
                    double tol = kFeasibilityTol);

/// Sets shares in [-kNegativityCutoff, 0) to zero.
void clamp_allocation(Allocation& z);

/// z_i = ω / n for every agent.
template <class T>
BasicAllocation<T> equal_split(const BasicProblem<T>& problem);

ExactProblem to_exact(const Problem& problem);
Problem to_double(const ExactProblem& problem);
Allocation to_double(const ExactAllocation& z);
Division to_double(const ExactDivision& d);
std::vector<double> to_double(const std::vector<Rational>& v);

/// Replaces u_i by scale[i]·u_i.
template <class T>
BasicProblem<T> rescale_agents(const BasicProblem<T>& problem, const std::vector<T>& scale);

template <class T>
T dot(const std::vector<T>& x, std::span<const T> y);

}  // namespace manna
