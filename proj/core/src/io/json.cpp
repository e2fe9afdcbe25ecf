#include "manna/io/json.hpp"

#include <limits>

namespace manna::io {
namespace {

std::string child(const std::string& ptr, const std::string& key) { return ptr + "/" + key; }
std::string child(const std::string& ptr, std::size_t k) { return ptr + "/" + std::to_string(k); }

Rational parse_number(const json& v, const std::string& ptr) {
  if (v.is_number_integer()) return Rational(v.get<long long>());
  if (v.is_number_unsigned()) return Rational(v.get<unsigned long long>());
  if (v.is_number_float()) return rational_from_double(v.get<double>());
  if (v.is_string()) {
    try {
      return parse_rational(v.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw SchemaError(ptr, std::string("bad number: ") + e.what());
    }
  }
  throw SchemaError(ptr, "expected a number or a \"p/q\" string");
}

const json& require(const json& obj, const std::string& key, const std::string& ptr) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(ptr, "missing required field '" + key + "'");
  return *it;
}

std::string parse_name(const json& v, const std::string& ptr) {
  if (!v.is_string()) throw SchemaError(ptr, "expected a string");
  return v.get<std::string>();
}

template <class T>
json number_json(const T& v) {
  if constexpr (std::is_same_v<T, Rational>) {
    return rational_json(v);
  } else {
    return v;
  }
}

template <class T>
json matrix_json(const Matrix<T>& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t a = 0; a < m.cols(); ++a) row.push_back(number_json(m(i, a)));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <class T>
json vector_json(const std::vector<T>& v) {
  json out = json::array();
  for (const T& x : v) out.push_back(number_json(x));
  return out;
}

template <class T>
json problem_json(const BasicProblem<T>& p) {
  json items = json::array();
  for (std::size_t a = 0; a < p.num_items(); ++a)
    items.push_back({{"name", p.items[a]}, {"quantity", number_json(p.endowment[a])}});
  return {{"agents", p.agents}, {"items", std::move(items)}, {"utilities", matrix_json(p.utilities)}};
}

template <class T>
json division_impl(const BasicProblem<T>& problem, const BasicDivision<T>& d) {
  json out = {{"profile", vector_json(utility_profile(problem, d.allocation))},
              {"allocation", matrix_json(d.allocation.shares)},
              {"price", vector_json(d.price)},
              {"budget", d.budget}};
  if (!d.multipliers.empty()) out["multipliers"] = vector_json(d.multipliers);
  return out;
}

template <class T>
json enumeration_impl(const BasicProblem<T>& problem, const EnumerationResult<T>& r) {
  json divisions = json::array();
  for (const auto& d : r.divisions) divisions.push_back(division_impl(problem, d));
  json out = {{"count", r.profiles.size()},
              {"exhaustive", r.exhaustive},
              {"supports_visited", r.supports_visited},
              {"divisions", std::move(divisions)}};
  out["selected"] = r.profiles.empty() ? json(nullptr) : json(select_index(r));
  return out;
}

json indices_json(const std::vector<std::size_t>& v) { return json(v); }

}  // namespace

json rational_json(const Rational& v) {
  if (boost::multiprecision::denominator(v) == 1) {
    const auto num = boost::multiprecision::numerator(v);
    if (num >= std::numeric_limits<long long>::min() && num <= std::numeric_limits<long long>::max())
      return num.convert_to<long long>();
  }
  return format_rational(v);
}

json profile_json(const std::vector<double>& v) { return vector_json(v); }
json profile_json(const std::vector<Rational>& v) { return vector_json(v); }

ProblemDocument parse_problem_document(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("invalid JSON: ") + e.what());
  }
  return parse_problem_document(doc);
}

ProblemDocument parse_problem_document(const json& doc) {
  if (!doc.is_object()) throw SchemaError("", "expected a JSON object");
  ProblemDocument out;

  if (auto it = doc.find("mode"); it != doc.end()) {
    const std::string mode = parse_name(*it, "/mode");
    if (mode == "exact")
      out.mode = Mode::Exact;
    else if (mode != "float")
      throw SchemaError("/mode", "expected \"float\" or \"exact\"");
  }

  const json& rows = require(doc, "utilities", "");
  if (!rows.is_array() || rows.empty()) throw SchemaError("/utilities", "expected a nonempty array of rows");
  std::vector<std::vector<Rational>> u;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string ptr = child("/utilities", i);
    if (!rows[i].is_array() || rows[i].empty()) throw SchemaError(ptr, "expected a nonempty array of numbers");
    if (i > 0 && rows[i].size() != u[0].size())
      throw SchemaError(ptr, "row has " + std::to_string(rows[i].size()) + " entries, expected " +
                                 std::to_string(u[0].size()));
    std::vector<Rational> row;
    for (std::size_t a = 0; a < rows[i].size(); ++a) row.push_back(parse_number(rows[i][a], child(ptr, a)));
    u.push_back(std::move(row));
  }
  const std::size_t n = u.size(), m = u[0].size();

  std::vector<Rational> omega(m, Rational(1));
  std::vector<std::string> item_names;
  if (auto it = doc.find("items"); it != doc.end()) {
    if (!it->is_array() || it->size() != m)
      throw SchemaError("/items", "expected an array of " + std::to_string(m) + " items");
    for (std::size_t a = 0; a < m; ++a) {
      const std::string ptr = child("/items", a);
      const json& item = (*it)[a];
      if (!item.is_object()) throw SchemaError(ptr, "expected {\"name\", \"quantity\"}");
      item_names.push_back(parse_name(require(item, "name", ptr), child(ptr, "name")));
      if (auto q = item.find("quantity"); q != item.end()) {
        omega[a] = parse_number(*q, child(ptr, "quantity"));
        if (!(omega[a] > 0)) throw SchemaError(child(ptr, "quantity"), "quantity must be positive");
      }
    }
  }
  std::vector<std::string> agent_names;
  if (auto it = doc.find("agents"); it != doc.end()) {
    if (!it->is_array() || it->size() != n)
      throw SchemaError("/agents", "expected an array of " + std::to_string(n) + " names");
    for (std::size_t i = 0; i < n; ++i) agent_names.push_back(parse_name((*it)[i], child("/agents", i)));
  }

  out.exact = make_problem<Rational>(u, omega);
  if (!agent_names.empty()) out.exact.agents = agent_names;
  if (!item_names.empty()) out.exact.items = item_names;
  try {
    out.exact.validate();
  } catch (const InputError& e) {
    throw SchemaError("", e.what());
  }
  out.problem = to_double(out.exact);

  if (auto it = doc.find("weights"); it != doc.end()) {
    if (!it->is_array() || it->size() != n)
      throw SchemaError("/weights", "expected " + std::to_string(n) + " positive weights");
    for (std::size_t i = 0; i < n; ++i) {
      const double w = to_double(parse_number((*it)[i], child("/weights", i)));
      if (!(w > 0)) throw SchemaError(child("/weights", i), "weights must be positive");
      out.weights.push_back(w);
    }
  }
  if (auto it = doc.find("rule"); it != doc.end()) {
    try {
      out.rule = parse_rule(parse_name(*it, "/rule"));
    } catch (const InputError& e) {
      throw SchemaError("/rule", e.what());
    }
  }
  if (auto it = doc.find("limits"); it != doc.end()) {
    if (!it->is_object()) throw SchemaError("/limits", "expected an object");
    if (auto s = it->find("max_supports"); s != it->end()) {
      if (!s->is_number_unsigned() || s->get<std::size_t>() == 0)
        throw SchemaError("/limits/max_supports", "expected a positive integer");
      out.max_supports = s->get<std::size_t>();
    }
  }
  return out;
}

json to_json(const ExactProblem& problem) { return problem_json(problem); }
json to_json(const Problem& problem) { return problem_json(problem); }

json to_json(const Classification& c) {
  return {{"kind", to_string(c.kind)}, {"margin", c.margin}, {"witness", matrix_json(c.witness.shares)}};
}

json to_json(const KktReport& r) {
  return {{"passed", r.passed},
          {"summary", r.summary()},
          {"tolerance", r.tolerance},
          {"feasible", r.feasible},
          {"max_budget_residual", r.max_budget_residual()},
          {"max_demand_residual", r.max_demand_residual()},
          {"budget_residuals", r.budget_residuals},
          {"price_sign_violations", indices_json(r.price_sign_violations)},
          {"parsimony_violations", indices_json(r.parsimony_violations)},
          {"utility_sign_violations", indices_json(r.utility_sign_violations)},
          {"multipliers", r.multipliers}};
}

json division_json(const Problem& problem, const Division& d) { return division_impl(problem, d); }
json division_json(const ExactProblem& problem, const ExactDivision& d) { return division_impl(problem, d); }

json enumeration_json(const Problem& problem, const EnumerationResult<double>& r) {
  return enumeration_impl(problem, r);
}
json enumeration_json(const ExactProblem& problem, const EnumerationResult<Rational>& r) {
  return enumeration_impl(problem, r);
}

json to_json(const RuleOutput& out, const Problem&) {
  json profiles = json::array(), allocations = json::array(), prices = json::array();
  for (const auto& p : out.profiles) profiles.push_back(p);
  for (const auto& z : out.allocations) allocations.push_back(matrix_json(z.shares));
  for (const auto& d : out.divisions) prices.push_back(d.price);
  json j = {{"rule", to_string(out.rule)},
            {"kind", to_string(out.kind)},
            {"count", out.profiles.size()},
            {"exhaustive", out.exhaustive},
            {"selected", out.selected},
            {"profiles", std::move(profiles)},
            {"allocations", std::move(allocations)}};
  if (!out.divisions.empty()) {
    j["prices"] = std::move(prices);
    j["budget"] = out.divisions.front().budget;
    if (!out.divisions[out.selected].multipliers.empty())
      j["multipliers"] = out.divisions[out.selected].multipliers;
  }
  return j;
}

json to_json(const FairnessReport& r) {
  return {{"passed", r.all_passed()},
          {"tolerance", r.tolerance},
          {"envy_free", {{"passed", r.envy_free}, {"margin", r.envy_margin}, {"pair", {r.envy_agent, r.envied_agent}}}},
          {"fair_share",
           {{"passed", r.fair_share}, {"margin", r.fair_share_margin}, {"agent", r.fair_share_agent}}},
          {"weak_core",
           {{"status", to_string(r.weak_core)},
            {"blocking_coalition", indices_json(r.blocking_coalition)},
            {"gain", r.blocking_gain}}},
          {"efficient", {{"passed", r.efficient}, {"gain", r.efficiency_gain}}}};
}

json to_json(const AxiomReport& r) {
  json axioms = json::object();
  for (const AxiomResult* a : r.results()) {
    json failures = json::array();
    for (const AxiomWitness& w : a->failures)
      failures.push_back({{"detail", w.detail}, {"problem", to_json(w.problem)}, {"perturbed", to_json(w.perturbed)}});
    axioms[a->name] = {{"passed", a->passed()},
                       {"checks", a->checks},
                       {"skipped", a->skipped},
                       {"failures", a->failure_count},
                       {"witnesses", std::move(failures)}};
  }
  return {{"rule", to_string(r.rule)}, {"problems", r.problems}, {"passed", r.passed()}, {"axioms", std::move(axioms)}};
}

json to_json(const ComponentReport& r) {
  return {{"count", r.count},
          {"ef_cuts", indices_json(r.ef_cuts)},
          {"interior_splits", indices_json(r.interior_splits)},
          {"ratio_order", r.ratio_order},
          {"agent_order", indices_json(r.agent_order)}};
}

json to_json(const RmReport& r) {
  json bounds = json::array();
  for (const RmBound& b : r.bounds)
    bounds.push_back({{"agent", b.agent},
                      {"other", b.other},
                      {"other_fair_share", rational_json(b.other_fair_share)},
                      {"cap", rational_json(b.cap)},
                      {"violated", b.violated}});
  json j = {{"rule", to_string(r.rule)},
            {"exact", r.exact},
            {"monotone", r.monotone},
            {"worse_off", indices_json(r.worse_off)},
            {"bounds", std::move(bounds)}};
  j["item"] = r.item ? json(*r.item) : json(nullptr);
  if (r.exact) {
    j["before"] = vector_json(r.before);
    j["after"] = vector_json(r.after);
    j["delta"] = vector_json(r.delta);
  } else {
    j["before"] = to_double(r.before);
    j["after"] = to_double(r.after);
    j["delta"] = to_double(r.delta);
  }
  return j;
}

}  // namespace manna::io
