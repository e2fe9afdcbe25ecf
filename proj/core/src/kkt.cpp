#include "manna/kkt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "manna/classify.hpp"
#include "manna/lp.hpp"

namespace manna {
namespace {

template <class T>
T max_one(const T& v) {
  const T a = abs_value(v);
  return a > T(1) ? a : T(1);
}

template <class T>
double rel(const T& num, const T& den) {
  return to_double(T(num / max_one(den)));
}

// Positive multipliers consistent with the observed prices, one per attracted
// agent; repulsed agents get 0.
template <class T>
std::vector<T> derive_multipliers(const BasicProblem<T>& problem, const BasicDivision<T>& d,
                                  const AgentPartition& agents, const Matrix<unsigned char>& edge) {
  const std::size_t m = problem.num_items();
  std::vector<T> lambda(problem.num_agents(), T(0));
  for (std::size_t i : agents.n_plus) {
    bool pinned = false;
    bool has_lo = false, has_hi = false;
    T lo(0), hi(0);
    for (std::size_t a = 0; a < m; ++a) {
      const T& u = problem.u(i, a);
      if (u == T(0)) continue;
      const T ratio = d.price[a] / u;
      if (edge(i, a) && !pinned) {
        lambda[i] = ratio;
        pinned = true;
      }
      if (u > T(0)) {
        if (!has_hi || ratio < hi) hi = ratio;
        has_hi = true;
      } else {
        if (!has_lo || ratio > lo) lo = ratio;
        has_lo = true;
      }
    }
    if (pinned) continue;
    if (!has_lo || lo < T(0)) lo = T(0);
    if (lo > T(0))
      lambda[i] = lo;
    else if (has_hi && hi > T(0))
      lambda[i] = hi < T(2) ? T(hi / 2) : T(1);
    else
      lambda[i] = T(1);
  }
  return lambda;
}

}  // namespace

double KktReport::max_budget_residual() const {
  double r = 0.0;
  for (double v : budget_residuals) r = std::max(r, v);
  return r;
}

double KktReport::max_demand_residual() const {
  double r = 0.0;
  for (double v : demand_residuals.data()) r = std::max(r, v);
  return r;
}

std::string KktReport::summary() const {
  if (passed) return "passed";
  std::ostringstream os;
  if (!feasible) {
    os << "infeasible allocation";
  } else if (!price_sign_violations.empty()) {
    os << "price sign violated on item " << price_sign_violations.front();
  } else if (!utility_sign_violations.empty()) {
    os << "utility sign violated for agent " << utility_sign_violations.front();
  } else if (!parsimony_violations.empty()) {
    os << "parsimony violated for agent " << parsimony_violations.front();
  } else if (max_budget_residual() > tolerance) {
    os << "budget residual " << max_budget_residual();
  } else {
    os << "demand residual " << max_demand_residual();
  }
  return os.str();
}

template <class T>
KktReport kkt_verify(const BasicProblem<T>& problem, const BasicDivision<T>& division, double tol,
                     std::span<const T> weights) {
  const std::size_t n = problem.num_agents();
  const std::size_t m = problem.num_items();
  const auto& z = division.allocation;
  if (z.shares.rows() != n || z.shares.cols() != m || division.price.size() != m)
    throw InputError("division shape differs from problem");
  if (!weights.empty() && weights.size() != n) throw InputError("weights length differs from agent count");
  if (division.budget < -1 || division.budget > 1) throw InputError("budget must be -1, 0 or +1");

  constexpr bool exact = ScalarTraits<T>::exact;
  const bool strict = exact && tol == 0.0;
  const T ttol = strict ? T(0) : ScalarTraits<T>::from_double(tol);
  const auto& p = division.price;

  KktReport rep;
  rep.tolerance = tol;
  rep.feasible = check_feasible(problem, z, strict ? 0.0 : kFeasibilityTol);
  rep.budget_residuals.assign(n, 0.0);
  rep.demand_residuals = Matrix<double>(n, m, 0.0);

  const ItemPartition items = partition_items(problem);
  const AgentPartition agents = partition_agents(problem);

  // Shares below tol/100 of the item count as unconsumed.
  Matrix<unsigned char> edge(n, m, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < m; ++a) {
      const T cut = strict ? T(0) : T(ttol / 100 * max_one(problem.endowment[a]));
      edge(i, a) = z(i, a) > cut;
    }

  for (std::size_t a = 0; a < m; ++a) {
    bool ok = true;
    switch (items.of_item[a]) {
      case ItemClass::Good: ok = p[a] > T(0); break;
      case ItemClass::Bad: ok = p[a] < T(0); break;
      case ItemClass::Neutral: ok = abs_value(p[a]) <= ttol; break;
    }
    if (!ok) rep.price_sign_violations.push_back(a);
  }

  const BasicProfile<T> U = utility_profile(problem, z);
  std::vector<T> spend(n, T(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < m; ++a) spend[i] += p[a] * z(i, a);

  auto row_scale = [&](std::size_t i) {
    T s(0);
    for (std::size_t a = 0; a < m; ++a) s += abs_value(problem.u(i, a)) * problem.endowment[a];
    return max_one(s);
  };

  // Stationarity: r is the agent's marginal rate, equal to p_a on edges and
  // at most p_a elsewhere.
  auto demand = [&](std::size_t i, std::size_t a, const T& r) {
    const T gap = edge(i, a) ? abs_value(T(r - p[a])) : std::max(T(0), T(r - p[a]));
    rep.demand_residuals(i, a) = rel(gap, p[a]);
  };
  auto repulsed_parsimony = [&](std::size_t i) {
    for (std::size_t a = 0; a < m; ++a) {
      if (!edge(i, a)) continue;
      if (problem.u(i, a) != T(0) || abs_value(p[a]) > ttol) {
        rep.parsimony_violations.push_back(i);
        return;
      }
    }
  };

  if (division.budget == 1) {
    for (std::size_t i = 0; i < n; ++i) {
      const T theta = weights.empty() ? T(1) : weights[i];
      if (agents.attracted[i]) {
        if (!(U[i] > T(0))) {
          rep.utility_sign_violations.push_back(i);
          continue;
        }
        rep.budget_residuals[i] = rel(abs_value(T(spend[i] - theta)), theta);
        for (std::size_t a = 0; a < m; ++a) demand(i, a, T(theta * problem.u(i, a) / U[i]));
      } else {
        if (abs_value(U[i]) > ttol * row_scale(i)) rep.utility_sign_violations.push_back(i);
        rep.budget_residuals[i] = rel(abs_value(spend[i]), T(1));
        repulsed_parsimony(i);
      }
    }
  } else if (division.budget == -1) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!(U[i] < T(0))) {
        rep.utility_sign_violations.push_back(i);
        continue;
      }
      rep.budget_residuals[i] = rel(abs_value(T(spend[i] + 1)), T(1));
      const T d = -U[i];
      for (std::size_t a = 0; a < m; ++a) demand(i, a, T(problem.u(i, a) / d));
    }
  } else {
    std::vector<T> lambda;
    if (division.multipliers.size() == n)
      lambda = division.multipliers;
    else
      lambda = derive_multipliers(problem, division, agents, edge);
    rep.multipliers.resize(n);
    for (std::size_t i = 0; i < n; ++i) rep.multipliers[i] = to_double(lambda[i]);
    for (std::size_t i = 0; i < n; ++i) {
      if (abs_value(U[i]) > ttol * row_scale(i)) rep.utility_sign_violations.push_back(i);
      rep.budget_residuals[i] = rel(abs_value(spend[i]), T(1));
      if (agents.attracted[i]) {
        if (!(lambda[i] > T(0))) {
          rep.utility_sign_violations.push_back(i);
          continue;
        }
        for (std::size_t a = 0; a < m; ++a) demand(i, a, T(lambda[i] * problem.u(i, a)));
      } else {
        repulsed_parsimony(i);
      }
    }
  }

  const bool residuals_ok = rep.max_budget_residual() <= tol && rep.max_demand_residual() <= tol;
  rep.passed = rep.feasible && residuals_ok && rep.price_sign_violations.empty() &&
               rep.parsimony_violations.empty() && rep.utility_sign_violations.empty();
  return rep;
}

template KktReport kkt_verify<double>(const Problem&, const Division&, double, std::span<const double>);
template KktReport kkt_verify<Rational>(const ExactProblem&, const ExactDivision&, double,
                                        std::span<const Rational>);

bool verify_criticality(const Problem& problem, const UtilityProfile& profile) {
  const std::size_t n = problem.num_agents();
  const std::size_t m = problem.num_items();
  if (profile.size() != n) throw InputError("profile length differs from agent count");
  for (double v : profile)
    if (!(v < 0)) throw PreconditionError("criticality needs a strictly negative profile");
  if (classify(problem).kind != ProblemKind::Negative)
    throw PreconditionError("criticality is defined for negative problems");

  // max Σ_i u_i·z_i/|U_i| separates by item: each item goes to its best rate.
  double best = 0.0;
  for (std::size_t a = 0; a < m; ++a) {
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) top = std::max(top, problem.u(i, a) / -profile[i]);
    best += top * problem.endowment[a];
  }
  if (std::fabs(best + double(n)) > 1e-7 * std::max(1.0, double(n))) return false;

  // The profile itself must be reachable.
  LpSpec lp(n * m);
  for (std::size_t a = 0; a < m; ++a) {
    std::vector<double> row(n * m, 0.0);
    for (std::size_t i = 0; i < n; ++i) row[i * m + a] = 1.0;
    lp.add(std::move(row), Relation::Equal, problem.endowment[a]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(n * m, 0.0);
    for (std::size_t a = 0; a < m; ++a) row[i * m + a] = problem.u(i, a);
    lp.add(std::move(row), Relation::GreaterEqual, profile[i] - 1e-7 * std::max(1.0, std::fabs(profile[i])));
  }
  const LpSolution sol = solve_lp(lp);
  if (sol.status == LpStatus::NumericFailure) throw SolverError("criticality feasibility LP failed");
  return sol.optimal();
}

}  // namespace manna
