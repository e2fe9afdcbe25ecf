#pragma once

#include <string>
#include <vector>

#include "manna/classify.hpp"
#include "manna/enumerate.hpp"
#include "manna/model.hpp"
#include "manna/solver.hpp"

namespace manna {

enum class Rule { Competitive, Egalitarian, EqualSplit };

std::string to_string(Rule rule);
/// Accepts "competitive", "egalitarian", "equal-split" (or "equal_split").
Rule parse_rule(const std::string& name);

/// Set-valued rule output: aligned profiles and allocations, plus the
/// canonical selection. `divisions` carries prices for the competitive rule.
struct RuleOutput {
  Rule rule = Rule::Competitive;
  ProblemKind kind = ProblemKind::Null;
  std::vector<UtilityProfile> profiles;
  std::vector<Allocation> allocations;
  std::vector<Division> divisions;
  std::size_t selected = 0;
  bool exhaustive = true;

  const UtilityProfile& selected_profile() const { return profiles.at(selected); }
  const Allocation& selected_allocation() const { return allocations.at(selected); }

  /// Pareto-indifferent membership: z is feasible and its profile matches an
  /// output profile within 1e-6·max(1, |U_i|).
  bool contains(const Problem& problem, const Allocation& z) const;
};

struct RuleOptions {
  EnumerationLimits limits;
  PositiveOptions positive;
};

/// Positive → solve_positive, Null → solve_null, Negative → every enumerated
/// profile with the Nash-product selection. Throws LimitError when the
/// enumeration is cut short before finding any division.
RuleOutput competitive_rule(const Problem& problem, const RuleOptions& options = {});

/// Efficient profile on the ray through U^max (positive, N_− held at 0) or
/// U^min (negative, all agents); zero profile for null problems.
RuleOutput egalitarian_rule(const Problem& problem);

RuleOutput equal_split_rule(const Problem& problem);

RuleOutput run_rule(Rule rule, const Problem& problem, const RuleOptions& options = {});

}  // namespace manna
