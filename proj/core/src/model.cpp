#include "manna/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace manna {
namespace {

template <class T>
bool is_finite(const T& v) {
  if constexpr (std::is_same_v<T, double>) {
    return std::isfinite(v);
  } else {
    return true;
  }
}

std::string default_item_name(std::size_t a) {
  std::string name;
  std::size_t k = a;
  do {
    name.insert(name.begin(), static_cast<char>('a' + k % 26));
    k = k / 26;
  } while (k-- > 0);
  return name;
}

}  // namespace

template <class T>
void BasicProblem<T>::validate() const {
  if (agents.empty()) throw InputError("problem needs at least one agent");
  if (items.empty()) throw InputError("problem needs at least one item");
  if (endowment.size() != items.size()) throw InputError("endowment length differs from item count");
  if (utilities.rows() != agents.size() || utilities.cols() != items.size())
    throw InputError("utility matrix shape differs from agents × items");
  for (std::size_t a = 0; a < items.size(); ++a) {
    if (!is_finite(endowment[a]) || !(endowment[a] > 0))
      throw InputError("endowment of item '" + items[a] + "' must be positive");
  }
  for (const T& v : utilities.data()) {
    if (!is_finite(v)) throw InputError("utilities must be finite");
  }
}

template <class T>
BasicProblem<T> make_problem(const std::vector<std::vector<T>>& utilities, std::vector<T> endowment) {
  BasicProblem<T> p;
  p.utilities = Matrix<T>::from_rows(utilities);
  for (std::size_t i = 0; i < p.utilities.rows(); ++i) p.agents.push_back(std::to_string(i + 1));
  for (std::size_t a = 0; a < p.utilities.cols(); ++a) p.items.push_back(default_item_name(a));
  if (endowment.empty()) endowment.assign(p.utilities.cols(), T(1));
  p.endowment = std::move(endowment);
  p.validate();
  return p;
}

template <class T>
T dot(const std::vector<T>& x, std::span<const T> y) {
  T s = 0;
  for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * y[k];
  return s;
}

template <class T>
BasicProfile<T> utility_profile(const BasicProblem<T>& problem, const BasicAllocation<T>& z) {
  if (z.shares.rows() != problem.num_agents() || z.shares.cols() != problem.num_items())
    throw InputError("allocation shape differs from agents × items");
  BasicProfile<T> out(problem.num_agents(), T(0));
  for (std::size_t i = 0; i < problem.num_agents(); ++i)
    for (std::size_t a = 0; a < problem.num_items(); ++a) out[i] += problem.u(i, a) * z(i, a);
  return out;
}

template <class T>
ItemPartition partition_items(const BasicProblem<T>& problem) {
  ItemPartition part;
  part.of_item.resize(problem.num_items());
  for (std::size_t a = 0; a < problem.num_items(); ++a) {
    T best = problem.u(0, a);
    for (std::size_t i = 1; i < problem.num_agents(); ++i) best = std::max(best, problem.u(i, a));
    if (best > 0) {
      part.a_plus.push_back(a);
      part.of_item[a] = ItemClass::Good;
    } else if (best < 0) {
      part.a_minus.push_back(a);
      part.of_item[a] = ItemClass::Bad;
    } else {
      part.a_zero.push_back(a);
      part.of_item[a] = ItemClass::Neutral;
    }
  }
  return part;
}

template <class T>
AgentPartition partition_agents(const BasicProblem<T>& problem) {
  AgentPartition part;
  part.attracted.resize(problem.num_agents(), false);
  for (std::size_t i = 0; i < problem.num_agents(); ++i) {
    bool any_positive = false;
    for (std::size_t a = 0; a < problem.num_items(); ++a) any_positive = any_positive || problem.u(i, a) > 0;
    part.attracted[i] = any_positive;
    (any_positive ? part.n_plus : part.n_minus).push_back(i);
  }
  return part;
}

template <class T>
bool check_feasible(const BasicProblem<T>& problem, const BasicAllocation<T>& z, double tol) {
  if (z.shares.rows() != problem.num_agents() || z.shares.cols() != problem.num_items())
    throw InputError("allocation shape differs from agents × items");
  for (std::size_t a = 0; a < problem.num_items(); ++a) {
    T total = 0;
    for (std::size_t i = 0; i < problem.num_agents(); ++i) {
      if constexpr (ScalarTraits<T>::exact) {
        if (z(i, a) < 0) return false;
      } else {
        if (z(i, a) < -kNegativityCutoff) return false;
      }
      total += z(i, a);
    }
    if constexpr (ScalarTraits<T>::exact) {
      if (tol == 0.0) {
        if (total != problem.endowment[a]) return false;
        continue;
      }
    }
    double gap = std::fabs(to_double(T(total - problem.endowment[a])));
    if (gap > tol * std::max(1.0, to_double(problem.endowment[a]))) return false;
  }
  return true;
}

void clamp_allocation(Allocation& z) {
  for (std::size_t i = 0; i < z.shares.rows(); ++i)
    for (std::size_t a = 0; a < z.shares.cols(); ++a)
      if (z(i, a) < 0 && z(i, a) >= -kNegativityCutoff) z(i, a) = 0;
}

template <class T>
BasicAllocation<T> equal_split(const BasicProblem<T>& problem) {
  BasicAllocation<T> z(problem.num_agents(), problem.num_items());
  const T n = T(static_cast<long>(problem.num_agents()));
  for (std::size_t i = 0; i < problem.num_agents(); ++i)
    for (std::size_t a = 0; a < problem.num_items(); ++a) z(i, a) = problem.endowment[a] / n;
  return z;
}

template <class T>
BasicProblem<T> rescale_agents(const BasicProblem<T>& problem, const std::vector<T>& scale) {
  if (scale.size() != problem.num_agents()) throw InputError("scale vector length differs from agent count");
  BasicProblem<T> out = problem;
  for (std::size_t i = 0; i < problem.num_agents(); ++i) {
    if (!(scale[i] > 0)) throw InputError("agent rescaling factors must be positive");
    for (std::size_t a = 0; a < problem.num_items(); ++a) out.utilities(i, a) = problem.u(i, a) * scale[i];
  }
  return out;
}

ExactProblem to_exact(const Problem& problem) {
  ExactProblem out;
  out.agents = problem.agents;
  out.items = problem.items;
  for (double w : problem.endowment) out.endowment.push_back(rational_from_double(w));
  out.utilities = convert<Rational>(problem.utilities, [](double v) { return rational_from_double(v); });
  return out;
}

Problem to_double(const ExactProblem& problem) {
  Problem out;
  out.agents = problem.agents;
  out.items = problem.items;
  out.endowment = to_double(problem.endowment);
  out.utilities = convert<double>(problem.utilities, [](const Rational& v) { return v.convert_to<double>(); });
  return out;
}

Allocation to_double(const ExactAllocation& z) {
  return Allocation(convert<double>(z.shares, [](const Rational& v) { return v.convert_to<double>(); }));
}

std::vector<double> to_double(const std::vector<Rational>& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const Rational& x : v) out.push_back(x.convert_to<double>());
  return out;
}

Division to_double(const ExactDivision& d) {
  return Division{to_double(d.allocation), to_double(d.price), d.budget, to_double(d.multipliers)};
}

#define MANNA_INSTANTIATE_MODEL(T)                                                              \
  template struct BasicProblem<T>;                                                              \
  template BasicProblem<T> make_problem<T>(const std::vector<std::vector<T>>&, std::vector<T>); \
  template T dot<T>(const std::vector<T>&, std::span<const T>);                                 \
  template BasicProfile<T> utility_profile<T>(const BasicProblem<T>&, const BasicAllocation<T>&); \
  template ItemPartition partition_items<T>(const BasicProblem<T>&);                            \
  template AgentPartition partition_agents<T>(const BasicProblem<T>&);                          \
  template bool check_feasible<T>(const BasicProblem<T>&, const BasicAllocation<T>&, double);   \
  template BasicAllocation<T> equal_split<T>(const BasicProblem<T>&);                           \
  template BasicProblem<T> rescale_agents<T>(const BasicProblem<T>&, const std::vector<T>&);

MANNA_INSTANTIATE_MODEL(double)
MANNA_INSTANTIATE_MODEL(Rational)

}  // namespace manna
