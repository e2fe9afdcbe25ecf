#pragma once

#include <stdexcept>
#include <string>

#include "manna/model.hpp"

namespace manna {

enum class ProblemKind { Positive, Negative, Null };

std::string to_string(ProblemKind kind);

/// Raised when an internal LP or iterative solve cannot produce a certified
/// answer. Never swallowed into a plausible-looking result.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an operation is called on a problem of the wrong kind or shape
/// (e.g. solve_positive on a negative problem, two-agent enumeration with n ≠ 2).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Null band for the classification margin, applied after rescaling every
/// item to unit endowment and every utility row to max |u_ia| = 1.
inline constexpr double kClassifyEpsilon = 1e-9;

struct Classification {
  ProblemKind kind = ProblemKind::Null;
  /// Positive: u_i·z_i > 0 on N_+ and exactly 0 on N_−. Null: all zero.
  /// Negative: the maximizer of the margin LP (informational).
  Allocation witness;
  /// Optimum t* of: max t s.t. u_i·z_i ≥ t on N_+, z feasible, N_− pinned to 0
  /// (on the normalized problem). When N_+ = ∅ the bound applies to every agent.
  double margin = 0.0;
};

Classification classify(const Problem& problem);
Classification classify(const ExactProblem& problem);

}  // namespace manna
