#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "manna/cancel.hpp"
#include "manna/model.hpp"

namespace manna {

/// The problem exceeds a size limit, or a budget ran out before any answer.
class LimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Competitive divisions of a negative problem, one representative division
/// per distinct utility profile, sorted by profile in decreasing
/// lexicographic order. Every division passes kkt_verify (1e-7, or exactly
/// for Rational).
template <class T>
struct EnumerationResult {
  std::vector<BasicDivision<T>> divisions;
  std::vector<BasicProfile<T>> profiles;
  /// False when a limit or cancellation cut the search short.
  bool exhaustive = true;
  std::size_t supports_visited = 0;
};

struct EnumerationLimits {
  std::size_t max_supports = 2'000'000;
  /// Largest n + m accepted by enumerate_general.
  std::size_t max_size = 12;
  const CancelToken* cancel = nullptr;
};

/// Duplicate-profile tolerance for floating results (exact mode compares exactly).
inline constexpr double kProfileTol = 1e-6;

/// Two agents: after merging equal-ratio items of the same sign, every cut of
/// the ratio order and every single-item split is solved and verified.
template <class T>
EnumerationResult<T> enumerate_two_agents(const BasicProblem<T>& problem);

/// Two items: closed-form cuts and strict splits over agents sorted by
/// u_ia/u_ib, or the single division when one item is a good or neutral.
template <class T>
EnumerationResult<T> enumerate_two_items(const BasicProblem<T>& problem);

/// Any size: depth-first search over forest supports with per-component
/// potential pruning; each complete support is solved and verified. Throws
/// LimitError when n + m exceeds limits.max_size.
template <class T>
EnumerationResult<T> enumerate_general(const BasicProblem<T>& problem, const EnumerationLimits& limits = {});

/// Picks the specialised path when n = 2 or m = 2.
template <class T>
EnumerationResult<T> enumerate_negative(const BasicProblem<T>& problem, const EnumerationLimits& limits = {});

/// Index of the profile maximizing Π|U_i|; ties go to the lexicographically
/// greatest profile, which is the earliest in result order.
template <class T>
std::size_t select_index(const EnumerationResult<T>& result);

template <class T>
const BasicDivision<T>& select_division(const EnumerationResult<T>& result) {
  return result.divisions[select_index(result)];
}

enum class LowerBoundKind { General, TwoAgents, TwoItems };

LowerBoundKind parse_lower_bound_kind(const std::string& name);

/// Parametric families whose enumeration meets the lower bounds: −1/−3
/// patterns for n ≠ m, the powers-of-two family for n = 2, and the ratio
/// ladder u_i = (−i, −(n+1−i)) for m = 2.
template <class T>
BasicProblem<T> generate_lower_bound_instance(LowerBoundKind kind, std::size_t n, std::size_t m);

}  // namespace manna
