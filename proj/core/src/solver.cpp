#include "manna/solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "manna/classify.hpp"
#include "manna/lp.hpp"
#include "manna/support.hpp"

namespace manna {
namespace {

// Euclidean projection of v onto the unit simplex.
void project_simplex(std::vector<double>& v) {
  std::vector<double> s(v);
  std::sort(s.begin(), s.end(), std::greater<>());
  double cum = 0.0, tau = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    cum += s[k];
    const double t = (cum - 1.0) / double(k + 1);
    if (s[k] - t > 0) tau = t;
  }
  for (double& x : v) x = std::max(0.0, x - tau);
}

void hand_out_neutral(const Problem& problem, const ItemPartition& items, Allocation& z) {
  for (std::size_t a : items.a_zero) {
    for (std::size_t i = 0; i < problem.num_agents(); ++i) z(i, a) = 0.0;
    for (std::size_t i = 0; i < problem.num_agents(); ++i) {
      if (problem.u(i, a) == 0.0) {
        z(i, a) = problem.endowment[a];
        break;
      }
    }
  }
}

class NashAscent {
 public:
  NashAscent(const Problem& problem, const Weights& theta, const AgentPartition& agents, const ItemPartition& items)
      : problem_(problem), theta_(theta), agents_(agents), items_(items) {
    const std::size_t n = problem.num_agents(), m = problem.num_items();
    v_ = Matrix<double>(n, m);
    for (std::size_t i = 0; i < n; ++i) {
      double top = 0.0;
      for (std::size_t a = 0; a < m; ++a) top = std::max(top, std::fabs(problem.u(i, a) * problem.endowment[a]));
      for (std::size_t a = 0; a < m; ++a) v_(i, a) = top > 0 ? problem.u(i, a) * problem.endowment[a] / top : 0.0;
    }
    allowed_.resize(m);
    for (std::size_t a = 0; a < m; ++a) {
      if (items.of_item[a] == ItemClass::Neutral) continue;
      for (std::size_t i : agents.n_plus)
        if (items.of_item[a] == ItemClass::Bad || problem.u(i, a) > 0) allowed_[a].push_back(i);
    }
  }

  /// Fractions from an allocation, moving shares held by disallowed agents to
  /// the allowed agent with the largest normalized utility.
  Matrix<double> fractions_from(const Allocation& z) const {
    const std::size_t n = problem_.num_agents(), m = problem_.num_items();
    Matrix<double> x(n, m, 0.0);
    for (std::size_t a = 0; a < m; ++a) {
      if (allowed_[a].empty()) continue;
      std::size_t best = allowed_[a].front();
      for (std::size_t i : allowed_[a])
        if (v_(i, a) > v_(best, a)) best = i;
      for (std::size_t i = 0; i < n; ++i) {
        const double f = std::max(0.0, z(i, a)) / problem_.endowment[a];
        const bool ok = std::find(allowed_[a].begin(), allowed_[a].end(), i) != allowed_[a].end();
        x(ok ? i : best, a) += f;
      }
      double total = 0.0;
      for (std::size_t i : allowed_[a]) total += x(i, a);
      for (std::size_t i : allowed_[a]) x(i, a) = total > 0 ? x(i, a) / total : 1.0 / double(allowed_[a].size());
    }
    return x;
  }

  Matrix<double> random_fractions(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Matrix<double> x(problem_.num_agents(), problem_.num_items(), 0.0);
    for (std::size_t a = 0; a < problem_.num_items(); ++a) {
      double total = 0.0;
      for (std::size_t i : allowed_[a]) total += (x(i, a) = unif(rng) + 1e-3);
      for (std::size_t i : allowed_[a]) x(i, a) /= total;
    }
    return x;
  }

  bool utilities(const Matrix<double>& x, std::vector<double>& U) const {
    U.assign(problem_.num_agents(), 0.0);
    for (std::size_t a = 0; a < problem_.num_items(); ++a)
      for (std::size_t i : allowed_[a]) U[i] += v_(i, a) * x(i, a);
    for (std::size_t i : agents_.n_plus)
      if (!(U[i] > 0)) return false;
    return true;
  }

  double objective(const std::vector<double>& U) const {
    double f = 0.0;
    for (std::size_t i : agents_.n_plus) f += theta_[i] * std::log(U[i]);
    return f;
  }

  /// One Armijo-backtracked projected gradient step; false once the step
  /// length collapses.
  bool step(Matrix<double>& x, std::vector<double>& U, double& eta) const {
    const std::size_t n = problem_.num_agents(), m = problem_.num_items();
    Matrix<double> g(n, m, 0.0);
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t i : allowed_[a]) g(i, a) = theta_[i] * v_(i, a) / U[i];
    const double f0 = objective(U);
    Matrix<double> y(n, m, 0.0);
    std::vector<double> Uy, col;
    while (eta > 1e-30) {
      for (std::size_t a = 0; a < m; ++a) {
        col.clear();
        for (std::size_t i : allowed_[a]) col.push_back(x(i, a) + eta * g(i, a));
        project_simplex(col);
        for (std::size_t k = 0; k < allowed_[a].size(); ++k) y(allowed_[a][k], a) = col[k];
      }
      double ascent = 0.0;
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t i : allowed_[a]) ascent += g(i, a) * (y(i, a) - x(i, a));
      if (ascent <= 0) return false;
      if (utilities(y, Uy) && objective(Uy) >= f0 + 1e-4 * ascent) {
        x = y;
        U = Uy;
        eta *= 2;
        return true;
      }
      eta *= 0.5;
    }
    return false;
  }

  Division division_from(const Matrix<double>& x) const {
    const std::size_t n = problem_.num_agents(), m = problem_.num_items();
    Division d;
    d.budget = 1;
    d.allocation = Allocation(n, m);
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t i : allowed_[a]) d.allocation(i, a) = x(i, a) * problem_.endowment[a];
    hand_out_neutral(problem_, items_, d.allocation);
    const UtilityProfile U = utility_profile(problem_, d.allocation);
    d.price.assign(m, 0.0);
    for (std::size_t a = 0; a < m; ++a) {
      if (items_.of_item[a] == ItemClass::Neutral) continue;
      double best = -kInfinity;
      for (std::size_t j : agents_.n_plus) best = std::max(best, theta_[j] * problem_.u(j, a) / U[j]);
      d.price[a] = best;
    }
    return d;
  }

  /// Re-solves the equilibrium equations on the iterate's support.
  std::optional<Division> polish(const Matrix<double>& x, double threshold) const {
    SupportGraph g;
    for (std::size_t a = 0; a < problem_.num_items(); ++a)
      for (std::size_t i : allowed_[a])
        if (x(i, a) > threshold) g.edges.push_back({i, a});
    auto d = solve_on_support<double>(problem_, g, +1, agents_.n_plus, theta_);
    if (!d) return std::nullopt;
    hand_out_neutral(problem_, items_, d->allocation);
    return d;
  }

 private:
  const Problem& problem_;
  const Weights& theta_;
  const AgentPartition& agents_;
  const ItemPartition& items_;
  Matrix<double> v_;
  std::vector<std::vector<std::size_t>> allowed_;
};

}  // namespace

Division solve_positive(const Problem& problem, const Weights& weights, const PositiveOptions& options,
                        const CancelToken* cancel) {
  const std::size_t n = problem.num_agents();
  const Classification cls = classify(problem);
  if (cls.kind != ProblemKind::Positive)
    throw PreconditionError("solve_positive needs a positive problem, got " + to_string(cls.kind));
  Weights theta = weights.empty() ? Weights(n, 1.0) : weights;
  if (theta.size() != n) throw InputError("weights length differs from agent count");
  for (double t : theta)
    if (!(t > 0) || !std::isfinite(t)) throw InputError("weights must be positive");

  const AgentPartition agents = partition_agents(problem);
  const ItemPartition items = partition_items(problem);
  const NashAscent ascent(problem, theta, agents, items);

  Matrix<double> x = ascent.fractions_from(cls.witness);
  std::vector<double> U;
  if (!ascent.utilities(x, U)) throw SolverError("classifier witness has a nonpositive utility on N_+");
  if (options.seed != 0) {
    std::mt19937_64 rng(options.seed);
    const Matrix<double> r = ascent.random_fractions(rng);
    Matrix<double> mix(x.rows(), x.cols());
    std::vector<double> Um;
    for (double alpha = 0.5; alpha > 1e-6; alpha *= 0.5) {
      for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t a = 0; a < x.cols(); ++a) mix(i, a) = (1 - alpha) * x(i, a) + alpha * r(i, a);
      if (ascent.utilities(mix, Um)) {
        x = mix;
        U = Um;
        break;
      }
    }
  }

  const std::span<const double> th(theta);
  double eta = 1.0;
  for (std::size_t it = 0; it <= options.max_iterations; ++it) {
    const bool moved = ascent.step(x, U, eta);
    if (it % 10 == 0 || !moved) {
      if (is_cancelled(cancel)) throw CancelledError("solve_positive cancelled");
      for (double threshold : {1e-10, 1e-7, 1e-4}) {
        if (auto d = ascent.polish(x, threshold)) {
          if (kkt_verify(problem, *d, 1e-9, th).passed) return *d;
        }
      }
      Division d = ascent.division_from(x);
      if (kkt_verify(problem, d, options.tolerance, th).passed) return d;
    }
    if (!moved) eta = 1.0;
  }
  throw SolverError("solve_positive did not reach the KKT tolerance within the iteration cap");
}

Division solve_null(const Problem& problem) {
  const Classification cls = classify(problem);
  if (cls.kind != ProblemKind::Null)
    throw PreconditionError("solve_null needs a null problem, got " + to_string(cls.kind));
  const std::size_t n = problem.num_agents(), m = problem.num_items();
  const AgentPartition agents = partition_agents(problem);
  const ItemPartition items = partition_items(problem);

  Division d;
  d.budget = 0;
  d.price.assign(m, 0.0);
  d.allocation = Allocation(n, m);
  d.multipliers.assign(n, 0.0);

  std::vector<std::size_t> active;
  for (std::size_t a = 0; a < m; ++a)
    if (items.of_item[a] != ItemClass::Neutral) active.push_back(a);

  if (!agents.n_plus.empty() && !active.empty()) {
    // Variables: λ over N_+, then one free s_a per active item.
    const std::size_t k = agents.n_plus.size();
    LpSpec lp(k + active.size());
    for (std::size_t j = 0; j < k; ++j) lp.lower[j] = 1.0;
    for (std::size_t t = 0; t < active.size(); ++t) {
      lp.make_free(k + t);
      lp.objective[k + t] = -problem.endowment[active[t]];
      for (std::size_t j = 0; j < k; ++j) {
        std::vector<double> row(lp.num_vars(), 0.0);
        row[k + t] = 1.0;
        row[j] = -problem.u(agents.n_plus[j], active[t]);
        lp.add(std::move(row), Relation::GreaterEqual, 0.0);
      }
    }
    const LpSolution sol = solve_lp(lp);
    if (!sol.optimal()) throw SolverError("null multiplier LP failed: " + to_string(sol.status));
    for (std::size_t j = 0; j < k; ++j) d.multipliers[agents.n_plus[j]] = sol.point[j];
    for (std::size_t a : active) {
      double best = -kInfinity;
      for (std::size_t i : agents.n_plus) best = std::max(best, d.multipliers[i] * problem.u(i, a));
      d.price[a] = best;
    }
  }

  // Shares on tight edges only, with every utility held at zero.
  std::vector<SupportEdge> edges;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t i = 0; i < n; ++i) {
      bool tight;
      if (items.of_item[a] == ItemClass::Neutral || !agents.attracted[i])
        tight = problem.u(i, a) == 0.0 && d.price[a] == 0.0;
      else
        tight = std::fabs(d.multipliers[i] * problem.u(i, a) - d.price[a]) <= 1e-9 * std::max(1.0, std::fabs(d.price[a]));
      if (tight) edges.push_back({i, a});
    }
  }
  LpSpec lp(edges.size());
  for (std::size_t a = 0; a < m; ++a) {
    std::vector<double> row(edges.size(), 0.0);
    for (std::size_t e = 0; e < edges.size(); ++e)
      if (edges[e].item == a) row[e] = 1.0;
    lp.add(std::move(row), Relation::Equal, problem.endowment[a]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(edges.size(), 0.0);
    for (std::size_t e = 0; e < edges.size(); ++e)
      if (edges[e].agent == i) row[e] = problem.u(i, edges[e].item);
    lp.add(std::move(row), Relation::Equal, 0.0);
  }
  const LpSolution sol = solve_lp(lp);
  if (!sol.optimal()) throw SolverError("null allocation LP failed: " + to_string(sol.status));
  for (std::size_t e = 0; e < edges.size(); ++e) d.allocation(edges[e].agent, edges[e].item) = std::max(0.0, sol.point[e]);

  const KktReport rep = kkt_verify<double>(problem, d, 1e-9);
  if (!rep.passed) throw SolverError("null division failed verification: " + rep.summary());
  return d;
}

}  // namespace manna
