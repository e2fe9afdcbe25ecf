#include "manna/rules.hpp"

#include <algorithm>
#include <cmath>

#include "manna/lp.hpp"

namespace manna {
namespace {

RuleOutput single(Rule rule, ProblemKind kind, const Problem& problem, Allocation z) {
  clamp_allocation(z);
  RuleOutput out;
  out.rule = rule;
  out.kind = kind;
  out.profiles.push_back(utility_profile(problem, z));
  out.allocations.push_back(std::move(z));
  return out;
}

// Extreme utility of agent i over feasible allocations: with n ≥ 2 every item
// agent i dislikes (or likes, for the minimum) can be handed to someone else.
double extreme_utility(const Problem& problem, std::size_t i, bool maximum) {
  double total = 0.0;
  for (std::size_t a = 0; a < problem.num_items(); ++a) {
    const double v = problem.u(i, a) * problem.endowment[a];
    if (problem.num_agents() == 1)
      total += v;
    else
      total += maximum ? std::max(v, 0.0) : std::min(v, 0.0);
  }
  return total;
}

// Variables: z (row-major agents × items), then the ray scale t.
struct RayLp {
  const Problem& problem;
  std::size_t n, m;

  explicit RayLp(const Problem& p) : problem(p), n(p.num_agents()), m(p.num_items()) {}

  std::size_t var(std::size_t i, std::size_t a) const { return i * m + a; }

  LpSpec base(std::size_t extra) const {
    LpSpec lp(n * m + extra);
    for (std::size_t a = 0; a < m; ++a) {
      std::vector<double> row(lp.num_vars(), 0.0);
      for (std::size_t i = 0; i < n; ++i) row[var(i, a)] = 1.0;
      lp.add(std::move(row), Relation::Equal, problem.endowment[a]);
    }
    return lp;
  }

  std::vector<double> utility_row(std::size_t i, std::size_t width) const {
    std::vector<double> row(width, 0.0);
    for (std::size_t a = 0; a < m; ++a) row[var(i, a)] = problem.u(i, a);
    return row;
  }

  Allocation allocation(const LpSolution& sol) const {
    Allocation z(n, m);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t a = 0; a < m; ++a) z(i, a) = std::max(0.0, sol.point[var(i, a)]);
    return z;
  }
};

// Largest t with U_i ≥ t·target_i on `ray` agents and U_i ≥ 0 on `pinned`
// ones, then the sum of ray utilities pushed to the frontier at that t.
Allocation ray_point(const Problem& problem, const std::vector<double>& target, const std::vector<std::size_t>& ray,
                     const std::vector<std::size_t>& pinned, bool minimize_scale) {
  RayLp r(problem);
  const std::size_t t = r.n * r.m;
  LpSpec lp = r.base(1);
  lp.objective[t] = minimize_scale ? -1.0 : 1.0;
  if (minimize_scale) lp.make_free(t);
  for (std::size_t i : ray) {
    std::vector<double> row = r.utility_row(i, lp.num_vars());
    row[t] = -target[i];
    lp.add(std::move(row), Relation::GreaterEqual, 0.0);
  }
  for (std::size_t i : pinned) lp.add(r.utility_row(i, lp.num_vars()), Relation::GreaterEqual, 0.0);
  const LpSolution first = solve_lp(lp);
  if (!first.optimal()) throw SolverError("egalitarian ray LP: " + to_string(first.status));
  const double scale = first.point[t];

  LpSpec polish = r.base(0);
  for (std::size_t i : ray) {
    std::vector<double> row = r.utility_row(i, polish.num_vars());
    for (std::size_t k = 0; k < row.size(); ++k) polish.objective[k] += row[k];
    const double bound = scale * target[i];
    polish.add(std::move(row), Relation::GreaterEqual, bound - 1e-9 * std::max(1.0, std::fabs(bound)));
  }
  for (std::size_t i : pinned) polish.add(r.utility_row(i, polish.num_vars()), Relation::GreaterEqual, 0.0);
  const LpSolution second = solve_lp(polish);
  if (!second.optimal()) throw SolverError("egalitarian polish LP: " + to_string(second.status));
  return r.allocation(second);
}

}  // namespace

std::string to_string(Rule rule) {
  switch (rule) {
    case Rule::Competitive: return "competitive";
    case Rule::Egalitarian: return "egalitarian";
    case Rule::EqualSplit: return "equal-split";
  }
  return "unknown";
}

Rule parse_rule(const std::string& name) {
  if (name == "competitive") return Rule::Competitive;
  if (name == "egalitarian") return Rule::Egalitarian;
  if (name == "equal-split" || name == "equal_split") return Rule::EqualSplit;
  throw InputError("unknown rule '" + name + "'");
}

bool RuleOutput::contains(const Problem& problem, const Allocation& z) const {
  if (!check_feasible(problem, z)) return false;
  const UtilityProfile u = utility_profile(problem, z);
  return std::any_of(profiles.begin(), profiles.end(), [&](const UtilityProfile& p) {
    for (std::size_t i = 0; i < u.size(); ++i)
      if (std::fabs(u[i] - p[i]) > 1e-6 * std::max(1.0, std::fabs(p[i]))) return false;
    return true;
  });
}

RuleOutput competitive_rule(const Problem& problem, const RuleOptions& options) {
  problem.validate();
  const ProblemKind kind = classify(problem).kind;
  if (kind == ProblemKind::Positive) {
    Division d = solve_positive(problem, {}, options.positive, options.limits.cancel);
    RuleOutput out = single(Rule::Competitive, kind, problem, d.allocation);
    out.divisions.push_back(std::move(d));
    return out;
  }
  if (kind == ProblemKind::Null) {
    Division d = solve_null(problem);
    RuleOutput out = single(Rule::Competitive, kind, problem, d.allocation);
    out.divisions.push_back(std::move(d));
    return out;
  }
  EnumerationResult<double> res = enumerate_negative(problem, options.limits);
  RuleOutput out;
  out.rule = Rule::Competitive;
  out.kind = kind;
  out.exhaustive = res.exhaustive;
  if (res.divisions.empty()) {
    if (!res.exhaustive) throw LimitError("enumeration stopped before finding a competitive division");
    throw SolverError("no competitive division found on the enumerated supports");
  }
  out.selected = select_index(res);
  out.profiles = std::move(res.profiles);
  for (const Division& d : res.divisions) out.allocations.push_back(d.allocation);
  out.divisions = std::move(res.divisions);
  return out;
}

RuleOutput egalitarian_rule(const Problem& problem) {
  problem.validate();
  const ProblemKind kind = classify(problem).kind;
  if (kind == ProblemKind::Null) return single(Rule::Egalitarian, kind, problem, solve_null(problem).allocation);

  const std::size_t n = problem.num_agents();
  std::vector<double> target(n);
  std::vector<std::size_t> ray, pinned;
  if (kind == ProblemKind::Positive) {
    const AgentPartition agents = partition_agents(problem);
    ray = agents.n_plus;
    pinned = agents.n_minus;
    for (std::size_t i : ray) target[i] = extreme_utility(problem, i, true);
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      ray.push_back(i);
      target[i] = extreme_utility(problem, i, false);
    }
  }
  return single(Rule::Egalitarian, kind, problem, ray_point(problem, target, ray, pinned, kind == ProblemKind::Negative));
}

RuleOutput equal_split_rule(const Problem& problem) {
  problem.validate();
  return single(Rule::EqualSplit, classify(problem).kind, problem, equal_split(problem));
}

RuleOutput run_rule(Rule rule, const Problem& problem, const RuleOptions& options) {
  switch (rule) {
    case Rule::Competitive: return competitive_rule(problem, options);
    case Rule::Egalitarian: return egalitarian_rule(problem);
    case Rule::EqualSplit: return equal_split_rule(problem);
  }
  throw InputError("unknown rule");
}

}  // namespace manna
