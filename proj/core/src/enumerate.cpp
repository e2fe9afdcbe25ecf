#include "manna/enumerate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "manna/classify.hpp"
#include "manna/kkt.hpp"
#include "manna/support.hpp"

namespace manna {
namespace {

template <class T>
bool profile_equal(const BasicProfile<T>& x, const BasicProfile<T>& y) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if constexpr (ScalarTraits<T>::exact) {
      if (x[i] != y[i]) return false;
    } else {
      if (std::fabs(x[i] - y[i]) > kProfileTol) return false;
    }
  }
  return true;
}

template <class T>
bool ratio_equal(const T& x, const T& y) {
  if constexpr (ScalarTraits<T>::exact) {
    return x == y;
  } else {
    return std::fabs(x - y) <= 1e-12 * std::max(std::fabs(x), std::fabs(y));
  }
}

template <class T>
double kkt_tolerance() {
  return ScalarTraits<T>::exact ? 0.0 : kKktTol;
}

template <class T>
class Collector {
 public:
  explicit Collector(const BasicProblem<T>& problem) : problem_(problem) {}

  bool add(BasicDivision<T> d) {
    if (!kkt_verify<T>(problem_, d, kkt_tolerance<T>()).passed) return false;
    BasicProfile<T> U = utility_profile(problem_, d.allocation);
    for (const auto& seen : result_.profiles)
      if (profile_equal(seen, U)) return false;
    result_.profiles.push_back(std::move(U));
    result_.divisions.push_back(std::move(d));
    return true;
  }

  EnumerationResult<T>& result() { return result_; }

  EnumerationResult<T> finish() {
    std::vector<std::size_t> order(result_.profiles.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t l, std::size_t r) { return result_.profiles[r] < result_.profiles[l]; });
    EnumerationResult<T> out;
    out.exhaustive = result_.exhaustive;
    out.supports_visited = result_.supports_visited;
    for (std::size_t k : order) {
      out.profiles.push_back(std::move(result_.profiles[k]));
      out.divisions.push_back(std::move(result_.divisions[k]));
    }
    return out;
  }

 private:
  const BasicProblem<T>& problem_;
  EnumerationResult<T> result_;
};

template <class T>
void require_negative(const BasicProblem<T>& problem) {
  problem.validate();
  const ProblemKind kind = classify(problem).kind;
  if (kind != ProblemKind::Negative)
    throw PreconditionError("enumeration needs a negative problem, got " + to_string(kind));
}

template <class T>
void hand_out_neutral(const BasicProblem<T>& problem, const ItemPartition& items, BasicDivision<T>& d) {
  for (std::size_t a : items.a_zero) {
    d.price[a] = T(0);
    for (std::size_t i = 0; i < problem.num_agents(); ++i) {
      if (problem.u(i, a) == T(0)) {
        d.allocation(i, a) = problem.endowment[a];
        break;
      }
    }
  }
}

std::vector<std::size_t> all_agents(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

// Depth-first search over forest supports. The state keeps, per component,
// potentials w_i = 1/|U_i| and prices up to one positive scale.
class ForestSearch {
 public:
  ForestSearch(const Problem& problem, const ItemPartition& items, const EnumerationLimits& limits)
      : problem_(problem), limits_(limits), n_(problem.num_agents()), m_(problem.num_items()) {
    for (std::size_t a = 0; a < m_; ++a) {
      if (items.of_item[a] == ItemClass::Neutral) continue;
      std::vector<std::size_t> allowed;
      for (std::size_t i = 0; i < n_; ++i)
        if (items.of_item[a] == ItemClass::Bad || problem.u(i, a) > 0) allowed.push_back(i);
      order_.push_back(a);
      allowed_.push_back(std::move(allowed));
    }
  }

  template <class Leaf>
  bool run(Leaf&& leaf) {
    State s;
    s.comp.assign(n_, -1);
    s.w.assign(n_, 0.0);
    s.price.assign(m_, 0.0);
    s.eaters.assign(m_, {});
    return descend(s, 0, leaf);
  }

  std::size_t visited() const { return visited_; }

 private:
  struct State {
    std::vector<int> comp;
    std::vector<double> w;
    std::vector<double> price;
    std::vector<std::vector<std::size_t>> eaters;
    int next_comp = 0;
  };

  // Non-edge conditions inside one component are scale free, so a violation
  // there is final.
  bool component_consistent(const State& s, int c) const {
    for (std::size_t k = 0; k < order_.size(); ++k) {
      const std::size_t b = order_[k];
      if (s.eaters[b].empty() || s.comp[s.eaters[b].front()] != c) continue;
      for (std::size_t i = 0; i < n_; ++i) {
        if (s.comp[i] != c) continue;
        if (std::find(s.eaters[b].begin(), s.eaters[b].end(), i) != s.eaters[b].end()) continue;
        const double r = problem_.u(i, b) * s.w[i];
        if (r > s.price[b] + 1e-9 * std::fabs(s.price[b])) return false;
      }
    }
    return true;
  }

  template <class Leaf>
  bool descend(State& s, std::size_t depth, Leaf& leaf) {
    if (depth == order_.size()) {
      for (int c : s.comp)
        if (c < 0) return true;
      if (visited_ >= limits_.max_supports) return false;
      ++visited_;
      if ((visited_ & 1023) == 0 && is_cancelled(limits_.cancel)) return false;
      SupportGraph g;
      for (std::size_t a : order_)
        for (std::size_t i : s.eaters[a]) g.edges.push_back({i, a});
      leaf(g);
      return true;
    }
    // Uncovered agents must still be reachable by the remaining items.
    std::size_t uncovered = 0;
    for (int c : s.comp) uncovered += c < 0;
    std::size_t capacity = 0;
    for (std::size_t k = depth; k < order_.size(); ++k) capacity += allowed_[k].size();
    if (uncovered > capacity) return true;

    const std::size_t a = order_[depth];
    const auto& allowed = allowed_[depth];
    const std::size_t k = allowed.size();
    for (std::size_t mask = 1; mask < (std::size_t(1) << k); ++mask) {
      std::vector<std::size_t> eaters;
      for (std::size_t t = 0; t < k; ++t)
        if (mask >> t & 1) eaters.push_back(allowed[t]);
      bool distinct = true;
      for (std::size_t x = 0; x < eaters.size() && distinct; ++x)
        for (std::size_t y = x + 1; y < eaters.size() && distinct; ++y)
          if (s.comp[eaters[x]] >= 0 && s.comp[eaters[x]] == s.comp[eaters[y]]) distinct = false;
      if (!distinct) continue;

      State t = s;
      for (std::size_t i : eaters) {
        if (t.comp[i] < 0) {
          t.comp[i] = t.next_comp++;
          t.w[i] = 1.0;
        }
      }
      const std::size_t e0 = eaters.front();
      const int c0 = t.comp[e0];
      const double pa = problem_.u(e0, a) * t.w[e0];
      bool ok = true;
      for (std::size_t x = 1; x < eaters.size() && ok; ++x) {
        const std::size_t j = eaters[x];
        const double f = pa / problem_.u(j, a) / t.w[j];
        if (!(f > 0)) {
          ok = false;
          break;
        }
        const int cj = t.comp[j];
        for (std::size_t b : order_)
          if (!t.eaters[b].empty() && t.comp[t.eaters[b].front()] == cj) t.price[b] *= f;
        for (std::size_t i = 0; i < n_; ++i) {
          if (t.comp[i] != cj) continue;
          t.w[i] *= f;
          t.comp[i] = c0;
        }
      }
      if (!ok) continue;
      t.price[a] = pa;
      t.eaters[a] = eaters;
      if (!component_consistent(t, c0)) continue;
      if (!descend(t, depth + 1, leaf)) return false;
    }
    return true;
  }

  const Problem& problem_;
  const EnumerationLimits& limits_;
  std::size_t n_, m_;
  std::vector<std::size_t> order_;
  std::vector<std::vector<std::size_t>> allowed_;
  std::size_t visited_ = 0;
};

}  // namespace

template <class T>
EnumerationResult<T> enumerate_two_agents(const BasicProblem<T>& problem) {
  if (problem.num_agents() != 2) throw PreconditionError("enumerate_two_agents needs exactly two agents");
  require_negative(problem);
  const std::size_t m = problem.num_items();
  const ItemPartition items = partition_items(problem);

  // Groups of the reduced problem: critical items merged by (sign, ratio),
  // goods liked by one agent alone kept as singletons pinned to that agent.
  struct Group {
    std::vector<std::size_t> members;
    bool good = false;
    int owner = -1;  // pinned eater, or -1 when the ratio decides
    T ratio{};
  };
  std::vector<Group> groups;
  for (std::size_t k = 0; k < m; ++k) {
    const ItemClass c = items.of_item[k];
    if (c == ItemClass::Neutral) continue;
    const T& u1 = problem.u(0, k);
    const T& u2 = problem.u(1, k);
    if (c == ItemClass::Good && !(u1 > T(0) && u2 > T(0))) {
      groups.push_back({{k}, true, u1 > T(0) ? 0 : 1, T(0)});
      continue;
    }
    const T ratio = u1 / u2;
    auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) {
      return g.owner < 0 && g.good == (c == ItemClass::Good) && ratio_equal(g.ratio, ratio);
    });
    if (it != groups.end())
      it->members.push_back(k);
    else
      groups.push_back({{k}, c == ItemClass::Good, -1, ratio});
  }

  BasicProblem<T> reduced;
  reduced.agents = problem.agents;
  reduced.utilities = Matrix<T>(2, groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    reduced.items.push_back("g" + std::to_string(g));
    reduced.endowment.push_back(T(1));
    for (std::size_t i = 0; i < 2; ++i) {
      T sum(0);
      for (std::size_t k : groups[g].members) sum += problem.u(i, k) * problem.endowment[k];
      reduced.utilities(i, g) = sum;
    }
    // Pinned goods keep the disliking agent out of the support.
  }

  std::vector<T> levels;
  for (const Group& g : groups)
    if (g.owner < 0 && std::none_of(levels.begin(), levels.end(), [&](const T& v) { return ratio_equal(v, g.ratio); }))
      levels.push_back(g.ratio);
  std::sort(levels.begin(), levels.end());
  auto level_of = [&](const Group& g) {
    for (std::size_t j = 0; j < levels.size(); ++j)
      if (ratio_equal(levels[j], g.ratio)) return j;
    return levels.size();
  };

  Collector<T> out(problem);
  const std::vector<std::size_t> both = all_agents(2);
  // Candidate c: even c = 2j is the cut below level j, odd c = 2j+1 splits level j.
  for (std::size_t c = 0; c <= 2 * levels.size(); ++c) {
    const bool split = c % 2 == 1;
    const std::size_t pivot = c / 2;
    SupportGraph sg;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const Group& gr = groups[g];
      if (gr.owner >= 0) {
        sg.edges.push_back({std::size_t(gr.owner), g});
        continue;
      }
      const std::size_t lv = level_of(gr);
      if (split && lv == pivot) {
        sg.edges.push_back({0, g});
        sg.edges.push_back({1, g});
        continue;
      }
      const bool left = lv < pivot;
      const std::size_t eater = (left != gr.good) ? 0 : 1;
      sg.edges.push_back({eater, g});
    }
    ++out.result().supports_visited;
    auto rd = solve_on_support<T>(reduced, sg, -1, both);
    if (!rd) continue;
    BasicDivision<T> d;
    d.budget = -1;
    d.allocation = BasicAllocation<T>(2, m);
    d.price.assign(m, T(0));
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const Group& gr = groups[g];
      const std::size_t ref = gr.owner >= 0 ? std::size_t(gr.owner) : 0;
      for (std::size_t k : gr.members) {
        for (std::size_t i = 0; i < 2; ++i) d.allocation(i, k) = rd->allocation(i, g) * problem.endowment[k];
        d.price[k] = rd->price[g] * problem.u(ref, k) / reduced.u(ref, g);
      }
    }
    hand_out_neutral(problem, items, d);
    out.add(std::move(d));
  }
  return out.finish();
}

template <class T>
EnumerationResult<T> enumerate_two_items(const BasicProblem<T>& problem) {
  if (problem.num_items() != 2) throw PreconditionError("enumerate_two_items needs exactly two items");
  require_negative(problem);
  const std::size_t n = problem.num_agents();
  const ItemPartition items = partition_items(problem);
  Collector<T> out(problem);

  // Unit-endowment utilities.
  auto uu = [&](std::size_t i, std::size_t a) { return T(problem.u(i, a) * problem.endowment[a]); };
  auto make = [&](const std::vector<std::array<T, 2>>& frac, const std::array<T, 2>& unit_price) {
    BasicDivision<T> d;
    d.budget = -1;
    d.allocation = BasicAllocation<T>(n, 2);
    d.price.assign(2, T(0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t a = 0; a < 2; ++a) d.allocation(i, a) = frac[i][a] * problem.endowment[a];
    for (std::size_t a = 0; a < 2; ++a) d.price[a] = unit_price[a] / problem.endowment[a];
    return d;
  };

  if (items.a_minus.size() == 1) {
    const std::size_t b = items.a_minus.front();
    const std::size_t a = 1 - b;
    std::vector<std::array<T, 2>> frac(n, {T(0), T(0)});
    std::array<T, 2> price{T(0), T(0)};
    if (items.of_item[a] == ItemClass::Neutral) {
      for (std::size_t i = 0; i < n; ++i) frac[i][b] = T(1) / T(int(n));
      price[b] = -T(int(n));
      std::size_t eater = 0;
      while (problem.u(eater, a) != T(0)) ++eater;
      frac[eater][a] = T(1);
    } else {
      // The good goes to the agent with the largest u_ia/|u_ib|.
      std::size_t star = 0;
      for (std::size_t i = 1; i < n; ++i)
        if (uu(i, a) / -uu(i, b) > uu(star, a) / -uu(star, b)) star = i;
      const T rho = uu(star, a) / uu(star, b);
      if (!(T(1) + rho > T(0))) throw SolverError("two-item good/bad case has no negative division");
      const T q = T(int(n)) / (T(1) + rho);
      price[b] = -q;
      price[a] = -rho * q;
      for (std::size_t i = 0; i < n; ++i) frac[i][b] = T(1) / q;
      frac[star][a] = T(1);
      frac[star][b] = T(1) / q - rho;
    }
    ++out.result().supports_visited;
    out.add(make(frac, price));
    return out.finish();
  }

  // Both items bads: agents sorted by r_i = u_ia/u_ib.
  const std::size_t a = 0, b = 1;
  std::vector<std::size_t> ord = all_agents(n);
  std::vector<T> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = uu(i, a) / uu(i, b);
  std::stable_sort(ord.begin(), ord.end(), [&](std::size_t x, std::size_t y) { return r[x] < r[y]; });
  const T N = T(int(n));
  // Threshold i/(n−i) for i = 0..n, with n/0 treated as +∞.
  auto below = [&](const T& v, std::size_t i) { return i == n || v < T(int(i)) / T(int(n - i)); };
  auto at_most = [&](const T& v, std::size_t i) { return i == n || v <= T(int(i)) / T(int(n - i)); };

  for (std::size_t i = 1; i < n; ++i) {
    const T& ri = r[ord[i - 1]];
    const T& rn = r[ord[i]];
    if (!(at_most(ri, i) && !below(rn, i))) continue;
    std::vector<std::array<T, 2>> frac(n, {T(0), T(0)});
    for (std::size_t k = 0; k < n; ++k) {
      if (k < i)
        frac[ord[k]][a] = T(1) / T(int(i));
      else
        frac[ord[k]][b] = T(1) / T(int(n - i));
    }
    ++out.result().supports_visited;
    out.add(make(frac, {T(-int(i)), T(-int(n - i))}));
  }
  for (std::size_t i = 1; i <= n; ++i) {
    const std::size_t s = ord[i - 1];
    const T& ri = r[s];
    const bool lower = !at_most(ri, i - 1);  // (i−1)/(n−i+1) < r_i
    if (!(lower && below(ri, i))) continue;
    const T ua = uu(s, a), ub = uu(s, b);
    const T x = (T(int(n - i + 1)) * ua - T(int(i - 1)) * ub) / (N * ua);
    const T y = (T(int(i)) * ub - T(int(n - i)) * ua) / (N * ub);
    std::vector<std::array<T, 2>> frac(n, {T(0), T(0)});
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t j = ord[k];
      if (k + 1 < i)
        frac[j][a] = (T(1) - x) / T(int(i - 1));
      else if (k + 1 == i)
        frac[j] = {x, y};
      else
        frac[j][b] = (T(1) - y) / T(int(n - i));
    }
    ++out.result().supports_visited;
    out.add(make(frac, {T(-N * ua / (ua + ub)), T(-N * ub / (ua + ub))}));
  }
  return out.finish();
}

template <class T>
EnumerationResult<T> enumerate_general(const BasicProblem<T>& problem, const EnumerationLimits& limits) {
  if (problem.num_agents() + problem.num_items() > limits.max_size)
    throw LimitError("enumerate_general accepts n + m <= " + std::to_string(limits.max_size));
  require_negative(problem);
  const ItemPartition items = partition_items(problem);
  const Problem approx = [&] {
    if constexpr (ScalarTraits<T>::exact)
      return to_double(problem);
    else
      return problem;
  }();
  Collector<T> out(problem);
  const std::vector<std::size_t> everyone = all_agents(problem.num_agents());
  ForestSearch search(approx, items, limits);
  const bool complete = search.run([&](const SupportGraph& g) {
    if constexpr (ScalarTraits<T>::exact) {
      // Floating screen first; the exact solve only runs on plausible supports.
      auto screen = solve_on_support<double>(approx, g, -1, everyone);
      if (!screen) return;
      hand_out_neutral(approx, items, *screen);
      if (!kkt_verify<double>(approx, *screen, 1e-6).passed) return;
    }
    auto d = solve_on_support<T>(problem, g, -1, everyone);
    if (!d) return;
    hand_out_neutral(problem, items, *d);
    out.add(std::move(*d));
  });
  out.result().exhaustive = complete;
  out.result().supports_visited = search.visited();
  return out.finish();
}

template <class T>
EnumerationResult<T> enumerate_negative(const BasicProblem<T>& problem, const EnumerationLimits& limits) {
  if (problem.num_agents() == 2) return enumerate_two_agents(problem);
  if (problem.num_items() == 2) return enumerate_two_items(problem);
  return enumerate_general(problem, limits);
}

template <class T>
std::size_t select_index(const EnumerationResult<T>& result) {
  if (result.profiles.empty()) throw InputError("select_division needs a nonempty enumeration");
  std::size_t best = 0;
  T best_value(0);
  for (std::size_t k = 0; k < result.profiles.size(); ++k) {
    T prod(1);
    for (const T& v : result.profiles[k]) prod *= abs_value(v);
    bool better;
    if constexpr (ScalarTraits<T>::exact)
      better = prod > best_value;
    else
      better = prod > best_value * (1 + 1e-9);
    if (k == 0 || better) {
      best = k;
      best_value = prod;
    }
  }
  return best;
}

LowerBoundKind parse_lower_bound_kind(const std::string& name) {
  if (name == "general") return LowerBoundKind::General;
  if (name == "two_agents" || name == "two-agents") return LowerBoundKind::TwoAgents;
  if (name == "two_items" || name == "two-items") return LowerBoundKind::TwoItems;
  throw InputError("unknown lower-bound family '" + name + "'");
}

template <class T>
BasicProblem<T> generate_lower_bound_instance(LowerBoundKind kind, std::size_t n, std::size_t m) {
  std::vector<std::vector<T>> u(n, std::vector<T>(m, T(0)));
  auto pow2 = [](std::size_t e) { return T(static_cast<long long>(1) << e); };
  switch (kind) {
    case LowerBoundKind::General:
      if (n < 1 || m < 1) throw PreconditionError("lower-bound instance needs n, m >= 1");
      if (n == m) throw PreconditionError("no lower-bound family for n = m");
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < m; ++k) {
          if (n > m)
            u[i][k] = (i >= m || k == i) ? T(-1) : T(-3);
          else
            u[i][k] = (k == i || k >= n) ? T(-1) : T(-3);
        }
      break;
    case LowerBoundKind::TwoAgents:
      if (n != 2 || m < 2 || m > 40) throw PreconditionError("two-agent family needs n = 2 and 2 <= m <= 40");
      for (std::size_t k = 1; k <= m; ++k) {
        u[0][k - 1] = k < m ? -pow2(k >= 2 ? k - 2 : 0) : -(pow2(m - 2) + T(1));
        u[1][k - 1] = k == 1 ? -(pow2(m - 2) + T(1)) : -pow2(m - 1 >= k ? m - 1 - k : 0);
      }
      break;
    case LowerBoundKind::TwoItems:
      if (m != 2 || n < 1) throw PreconditionError("two-item family needs m = 2");
      for (std::size_t i = 1; i <= n; ++i) {
        u[i - 1][0] = -T(int(i));
        u[i - 1][1] = -T(int(n + 1 - i));
      }
      break;
  }
  return make_problem<T>(u);
}

#define MANNA_INSTANTIATE_ENUMERATE(T)                                                                \
  template EnumerationResult<T> enumerate_two_agents<T>(const BasicProblem<T>&);                      \
  template EnumerationResult<T> enumerate_two_items<T>(const BasicProblem<T>&);                       \
  template EnumerationResult<T> enumerate_general<T>(const BasicProblem<T>&, const EnumerationLimits&); \
  template EnumerationResult<T> enumerate_negative<T>(const BasicProblem<T>&, const EnumerationLimits&); \
  template std::size_t select_index<T>(const EnumerationResult<T>&);                                  \
  template BasicProblem<T> generate_lower_bound_instance<T>(LowerBoundKind, std::size_t, std::size_t);

MANNA_INSTANTIATE_ENUMERATE(double)
MANNA_INSTANTIATE_ENUMERATE(Rational)

}  // namespace manna
