#include "manna/classify.hpp"

#include <algorithm>
#include <cmath>

#include "manna/lp.hpp"

namespace manna {

std::string to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::Positive: return "Positive";
    case ProblemKind::Negative: return "Negative";
    case ProblemKind::Null: return "Null";
  }
  return "Unknown";
}

Classification classify(const Problem& problem) {
  problem.validate();
  const std::size_t n = problem.num_agents();
  const std::size_t m = problem.num_items();
  const AgentPartition agents = partition_agents(problem);
  const bool nobody_attracted = agents.n_plus.empty();

  // Unit endowments and unit row scale make the margin scale-free.
  Matrix<double> v(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    double row_max = 0.0;
    for (std::size_t a = 0; a < m; ++a) {
      v(i, a) = problem.u(i, a) * problem.endowment[a];
      row_max = std::max(row_max, std::fabs(v(i, a)));
    }
    if (row_max > 0)
      for (std::size_t a = 0; a < m; ++a) v(i, a) /= row_max;
  }

  // Variable layout: one share per admissible (agent, item), then t.
  std::vector<std::pair<std::size_t, std::size_t>> vars;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < m; ++a) {
      const bool pinned = !nobody_attracted && !agents.attracted[i] && problem.u(i, a) < 0;
      if (!pinned) vars.emplace_back(i, a);
    }
  }
  const std::size_t t_var = vars.size();
  LpSpec lp(vars.size() + 1);
  lp.make_free(t_var);
  lp.objective[t_var] = 1.0;
  for (std::size_t a = 0; a < m; ++a) {
    std::vector<double> row(lp.num_vars(), 0.0);
    for (std::size_t k = 0; k < vars.size(); ++k)
      if (vars[k].second == a) row[k] = 1.0;
    lp.add(std::move(row), Relation::Equal, 1.0);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!nobody_attracted && !agents.attracted[i]) continue;
    std::vector<double> row(lp.num_vars(), 0.0);
    for (std::size_t k = 0; k < vars.size(); ++k)
      if (vars[k].first == i) row[k] = v(i, vars[k].second);
    row[t_var] = -1.0;
    lp.add(std::move(row), Relation::GreaterEqual, 0.0);
  }
  const LpSolution sol = solve_lp(lp);
  if (!sol.optimal()) throw SolverError("classification LP failed: " + to_string(sol.status));

  Classification out;
  out.margin = sol.point[t_var];
  out.witness = Allocation(n, m);
  for (std::size_t k = 0; k < vars.size(); ++k) {
    const auto [i, a] = vars[k];
    out.witness(i, a) = std::max(0.0, sol.point[k]) * problem.endowment[a];
  }
  if (out.margin > kClassifyEpsilon)
    out.kind = ProblemKind::Positive;
  else if (out.margin < -kClassifyEpsilon)
    out.kind = ProblemKind::Negative;
  else
    out.kind = ProblemKind::Null;
  return out;
}

Classification classify(const ExactProblem& problem) { return classify(to_double(problem)); }

}  // namespace manna
