#include "manna/support.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "manna/lp.hpp"

namespace manna {
namespace {

template <class T>
bool same_value(const T& x, const T& y) {
  if constexpr (ScalarTraits<T>::exact) {
    return x == y;
  } else {
    return std::fabs(x - y) <= 1e-9 * std::max(std::fabs(x), std::fabs(y));
  }
}

template <class T>
bool near_zero(const T& x, const T& scale) {
  if constexpr (ScalarTraits<T>::exact) {
    return x == T(0);
  } else {
    return std::fabs(x) <= 1e-9 * std::max(1.0, std::fabs(scale));
  }
}

struct Adjacency {
  std::vector<std::vector<std::size_t>> of_agent;  // item indices
  std::vector<std::vector<std::size_t>> of_item;   // agent indices
};

}  // namespace

template <class T>
std::optional<BasicDivision<T>> solve_on_support(const BasicProblem<T>& problem, const SupportGraph& support,
                                                 int sign, std::span<const std::size_t> required,
                                                 std::span<const T> weights) {
  constexpr bool exact = ScalarTraits<T>::exact;
  const std::size_t n = problem.num_agents();
  const std::size_t m = problem.num_items();
  const ItemPartition items = partition_items(problem);
  auto theta = [&](std::size_t i) { return sign > 0 && !weights.empty() ? weights[i] : T(1); };

  Adjacency adj{std::vector<std::vector<std::size_t>>(n), std::vector<std::vector<std::size_t>>(m)};
  for (const SupportEdge& e : support.edges) {
    if (e.agent >= n || e.item >= m) throw InputError("support edge out of range");
    if (items.of_item[e.item] == ItemClass::Neutral) continue;
    if (problem.u(e.agent, e.item) == T(0)) return std::nullopt;
    auto& row = adj.of_agent[e.agent];
    if (std::find(row.begin(), row.end(), e.item) != row.end()) continue;
    row.push_back(e.item);
    adj.of_item[e.item].push_back(e.agent);
  }
  for (std::size_t i : required)
    if (adj.of_agent[i].empty()) return std::nullopt;
  for (std::size_t a = 0; a < m; ++a)
    if (items.of_item[a] != ItemClass::Neutral && adj.of_item[a].empty()) return std::nullopt;

  BasicDivision<T> out;
  out.allocation = BasicAllocation<T>(n, m);
  out.price.assign(m, T(0));
  out.budget = sign;
  std::vector<T> w(n, T(0));  // θ_i/|U_i|
  std::vector<int> comp_of_agent(n, -1), comp_of_item(m, -1);

  int comp = 0;
  for (std::size_t root = 0; root < n; ++root) {
    if (comp_of_agent[root] >= 0 || adj.of_agent[root].empty()) continue;
    std::vector<std::size_t> c_agents, c_items;
    bool cyclic = false;
    std::size_t edge_count = 0;
    std::deque<std::pair<bool, std::size_t>> queue;  // (is_agent, index)
    w[root] = T(1);
    comp_of_agent[root] = comp;
    queue.emplace_back(true, root);
    while (!queue.empty()) {
      const auto [is_agent, v] = queue.front();
      queue.pop_front();
      if (is_agent) {
        c_agents.push_back(v);
        for (std::size_t a : adj.of_agent[v]) {
          ++edge_count;
          const T cand = problem.u(v, a) * w[v];
          if (comp_of_item[a] < 0) {
            comp_of_item[a] = comp;
            out.price[a] = cand;
            queue.emplace_back(false, a);
          } else if (!same_value(cand, out.price[a])) {
            return std::nullopt;
          }
        }
      } else {
        c_items.push_back(v);
        for (std::size_t j : adj.of_item[v]) {
          const T cand = out.price[v] / problem.u(j, v);
          if (!(cand > T(0))) return std::nullopt;
          if (comp_of_agent[j] < 0) {
            comp_of_agent[j] = comp;
            w[j] = cand;
            queue.emplace_back(true, j);
          } else if (!same_value(cand, w[j])) {
            return std::nullopt;
          }
        }
      }
    }
    cyclic = edge_count + 1 != c_agents.size() + c_items.size();

    T money(0), income(0);
    for (std::size_t a : c_items) money += out.price[a] * problem.endowment[a];
    for (std::size_t i : c_agents) income += theta(i);
    if (money == T(0)) return std::nullopt;
    const T scale = T(sign) * income / money;
    if (!(scale > T(0))) return std::nullopt;
    for (std::size_t a : c_items) out.price[a] *= scale;
    for (std::size_t i : c_agents) w[i] *= scale;

    if (!cyclic) {
      std::vector<T> rem_item(m), rem_agent(n);
      for (std::size_t a : c_items) rem_item[a] = problem.endowment[a];
      for (std::size_t i : c_agents) rem_agent[i] = T(sign) * theta(i);
      std::vector<std::size_t> deg_agent(n, 0), deg_item(m, 0);
      std::vector<std::vector<std::size_t>> live_agent(n), live_item(m);
      for (std::size_t i : c_agents) {
        live_agent[i] = adj.of_agent[i];
        deg_agent[i] = live_agent[i].size();
      }
      for (std::size_t a : c_items) {
        live_item[a] = adj.of_item[a];
        deg_item[a] = live_item[a].size();
      }
      auto drop = [](std::vector<std::size_t>& v, std::size_t x) { v.erase(std::find(v.begin(), v.end(), x)); };
      std::deque<std::pair<bool, std::size_t>> leaves;
      for (std::size_t i : c_agents)
        if (deg_agent[i] == 1) leaves.emplace_back(true, i);
      for (std::size_t a : c_items)
        if (deg_item[a] == 1) leaves.emplace_back(false, a);
      while (!leaves.empty()) {
        const auto [is_agent, v] = leaves.front();
        leaves.pop_front();
        if (is_agent) {
          if (deg_agent[v] != 1) continue;
          const std::size_t a = live_agent[v].front();
          const T share = rem_agent[v] / out.price[a];
          out.allocation(v, a) = share;
          rem_item[a] -= share;
          rem_agent[v] = T(0);
          live_agent[v].clear();
          deg_agent[v] = 0;
          drop(live_item[a], v);
          if (--deg_item[a] == 1) leaves.emplace_back(false, a);
        } else {
          if (deg_item[v] != 1) continue;
          const std::size_t i = live_item[v].front();
          out.allocation(i, v) = rem_item[v];
          rem_agent[i] -= out.price[v] * rem_item[v];
          rem_item[v] = T(0);
          live_item[v].clear();
          deg_item[v] = 0;
          drop(live_agent[i], v);
          if (--deg_agent[i] == 1) leaves.emplace_back(true, i);
        }
      }
      for (std::size_t a : c_items)
        if (!near_zero(rem_item[a], problem.endowment[a])) return std::nullopt;
      for (std::size_t i : c_agents)
        if (!near_zero(rem_agent[i], theta(i))) return std::nullopt;
    } else {
      if constexpr (exact) {
        return std::nullopt;
      } else {
        std::vector<SupportEdge> local;
        for (std::size_t i : c_agents)
          for (std::size_t a : adj.of_agent[i]) local.push_back({i, a});
        LpSpec lp(local.size());
        for (std::size_t a : c_items) {
          std::vector<double> row(local.size(), 0.0);
          for (std::size_t k = 0; k < local.size(); ++k)
            if (local[k].item == a) row[k] = 1.0;
          lp.add(std::move(row), Relation::Equal, problem.endowment[a]);
        }
        for (std::size_t i : c_agents) {
          std::vector<double> row(local.size(), 0.0);
          for (std::size_t k = 0; k < local.size(); ++k)
            if (local[k].agent == i) row[k] = out.price[local[k].item];
          lp.add(std::move(row), Relation::Equal, double(sign) * theta(i));
        }
        const LpSolution sol = solve_lp(lp);
        if (!sol.optimal()) return std::nullopt;
        for (std::size_t k = 0; k < local.size(); ++k)
          out.allocation(local[k].agent, local[k].item) = sol.point[k];
      }
    }

    for (std::size_t i : c_agents) {
      for (std::size_t a : adj.of_agent[i]) {
        T& z = out.allocation(i, a);
        if constexpr (exact) {
          if (z < T(0)) return std::nullopt;
        } else {
          if (z < -1e-11 * std::max(1.0, problem.endowment[a])) return std::nullopt;
          if (z < 0) z = 0;
        }
      }
    }
    ++comp;
  }

  for (std::size_t a : items.a_zero) {
    for (std::size_t i = 0; i < n; ++i) {
      if (problem.u(i, a) == T(0)) {
        out.allocation(i, a) = problem.endowment[a];
        break;
      }
    }
  }
  return out;
}

template std::optional<Division> solve_on_support<double>(const Problem&, const SupportGraph&, int,
                                                          std::span<const std::size_t>, std::span<const double>);
template std::optional<ExactDivision> solve_on_support<Rational>(const ExactProblem&, const SupportGraph&, int,
                                                                 std::span<const std::size_t>,
                                                                 std::span<const Rational>);

}  // namespace manna
