#include "manna/app/commands.hpp"

#include <algorithm>

namespace manna::app {
namespace {

bool use_exact(const io::ProblemDocument& doc, const CommandOptions& opt) {
  return opt.exact || doc.mode == io::Mode::Exact;
}

EnumerationLimits limits_for(const io::ProblemDocument& doc, const CommandOptions& opt) {
  EnumerationLimits limits;
  if (doc.max_supports) limits.max_supports = *doc.max_supports;
  if (opt.max_supports) limits.max_supports = *opt.max_supports;
  limits.cancel = opt.cancel;
  return limits;
}

RuleOptions rule_options(const io::ProblemDocument& doc, const CommandOptions& opt) {
  RuleOptions ro;
  ro.limits = limits_for(doc, opt);
  ro.positive.seed = opt.seed;
  return ro;
}

Rule rule_for(const io::ProblemDocument& doc, const CommandOptions& opt) {
  if (opt.rule) return *opt.rule;
  return doc.rule.value_or(Rule::Competitive);
}

double kkt_tolerance(const CommandOptions& opt) { return opt.tol.value_or(kKktTol); }

Allocation parse_allocation(const json& doc, const Problem& problem) {
  const json& rows = doc.at("allocation");
  const std::size_t n = problem.num_agents(), m = problem.num_items();
  if (!rows.is_array() || rows.size() != n)
    throw io::SchemaError("/allocation", "expected " + std::to_string(n) + " rows");
  Allocation z(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string ptr = "/allocation/" + std::to_string(i);
    if (!rows[i].is_array() || rows[i].size() != m)
      throw io::SchemaError(ptr, "expected " + std::to_string(m) + " shares");
    for (std::size_t a = 0; a < m; ++a) {
      const json& v = rows[i][a];
      if (v.is_number()) {
        z(i, a) = v.get<double>();
      } else if (v.is_string()) {
        try {
          z(i, a) = to_double(parse_rational(v.get<std::string>()));
        } catch (const std::invalid_argument& e) {
          throw io::SchemaError(ptr + "/" + std::to_string(a), e.what());
        }
      } else {
        throw io::SchemaError(ptr + "/" + std::to_string(a), "expected a number");
      }
    }
  }
  if (!check_feasible(problem, z)) throw io::SchemaError("/allocation", "allocation is not feasible");
  return z;
}

json classify_report(const io::ProblemDocument& doc, const CommandOptions& opt) {
  const Classification c = use_exact(doc, opt) ? classify(doc.exact) : classify(doc.problem);
  json out = io::to_json(c);
  out["margin"] = c.margin + 0.0;  // no negative zero in reports
  return out;
}

/// Competitive rule on a positive problem with income shares.
RuleOutput weighted_competitive(const Problem& problem, const Weights& weights, const RuleOptions& ro) {
  Division d = solve_positive(problem, weights, ro.positive, ro.limits.cancel);
  RuleOutput out;
  out.rule = Rule::Competitive;
  out.kind = ProblemKind::Positive;
  out.profiles.push_back(utility_profile(problem, d.allocation));
  out.allocations.push_back(d.allocation);
  out.divisions.push_back(std::move(d));
  return out;
}

json exact_enumeration(const io::ProblemDocument& doc, const CommandOptions& opt,
                       EnumerationResult<Rational>& res) {
  res = enumerate_negative(doc.exact, limits_for(doc, opt));
  if (res.divisions.empty()) {
    if (!res.exhaustive) throw LimitError("enumeration stopped before finding a competitive division");
    throw SolverError("no competitive division found on the enumerated supports");
  }
  return io::enumeration_json(doc.exact, res);
}

json solve_report(const io::ProblemDocument& doc, const CommandOptions& opt) {
  const Rule rule = rule_for(doc, opt);
  const Classification cls = classify(doc.problem);
  json out = {{"classification", classify_report(doc, opt)}, {"rule", to_string(rule)}};

  if (!doc.weights.empty() && !(rule == Rule::Competitive && cls.kind == ProblemKind::Positive))
    throw PreconditionError("weights apply to the competitive rule on positive problems only");

  if (rule == Rule::Competitive && cls.kind == ProblemKind::Negative && use_exact(doc, opt)) {
    EnumerationResult<Rational> res;
    const json e = exact_enumeration(doc, opt, res);
    const std::size_t s = select_index(res);
    json profiles = json::array(), allocations = json::array(), prices = json::array();
    for (const json& d : e["divisions"]) {
      profiles.push_back(d["profile"]);
      allocations.push_back(d["allocation"]);
      prices.push_back(d["price"]);
    }
    const ExactDivision& d = res.divisions[s];
    out.update({{"kind", to_string(cls.kind)},
                {"exact", true},
                {"count", res.profiles.size()},
                {"exhaustive", res.exhaustive},
                {"selected", s},
                {"profiles", std::move(profiles)},
                {"allocations", std::move(allocations)},
                {"prices", std::move(prices)},
                {"budget", d.budget},
                {"division", io::division_json(doc.exact, d)},
                {"kkt", io::to_json(kkt_verify(doc.exact, d, 0.0))},
                {"fairness", io::to_json(audit_allocation(doc.problem, to_double(d.allocation)))}});
    return out;
  }

  const RuleOptions ro = rule_options(doc, opt);
  const RuleOutput result =
      doc.weights.empty() ? run_rule(rule, doc.problem, ro) : weighted_competitive(doc.problem, doc.weights, ro);
  out.update(io::to_json(result, doc.problem));
  out["exact"] = false;
  if (!result.divisions.empty()) {
    const Division& d = result.divisions[result.selected];
    out["division"] = io::division_json(doc.problem, d);
    out["kkt"] = io::to_json(kkt_verify(doc.problem, d, kkt_tolerance(opt), std::span<const double>(doc.weights)));
  }
  out["fairness"] = io::to_json(audit_allocation(doc.problem, result.selected_allocation()));
  return out;
}

json enumerate_report(const io::ProblemDocument& doc, const CommandOptions& opt) {
  json out;
  if (use_exact(doc, opt)) {
    EnumerationResult<Rational> res;
    out = exact_enumeration(doc, opt, res);
    out["exact"] = true;
  } else {
    const EnumerationResult<double> res = enumerate_negative(doc.problem, limits_for(doc, opt));
    if (res.divisions.empty() && !res.exhaustive)
      throw LimitError("enumeration stopped before finding a competitive division");
    out = io::enumeration_json(doc.problem, res);
    out["exact"] = false;
  }
  out["kind"] = to_string(ProblemKind::Negative);
  return out;
}

json audit_report(const io::ProblemDocument& doc, const json& raw, const CommandOptions& opt) {
  const Rule rule = rule_for(doc, opt);
  json out = json::object();
  Allocation z;
  if (raw.contains("allocation")) {
    z = parse_allocation(raw, doc.problem);
    out["source"] = "document";
  } else {
    const RuleOutput result = run_rule(rule, doc.problem, rule_options(doc, opt));
    z = result.selected_allocation();
    out["source"] = to_string(rule);
    out["profile"] = result.selected_profile();
  }
  out["allocation"] = json::array();
  for (std::size_t i = 0; i < z.shares.rows(); ++i)
    out["allocation"].push_back(std::vector<double>(z.shares.row(i).begin(), z.shares.row(i).end()));
  out["fairness"] = io::to_json(audit_allocation(doc.problem, z));
  if (opt.trials > 0)
    out["axioms"] = io::to_json(check_rule_axioms(rule, {doc.problem}, opt.trials, opt.seed, rule_options(doc, opt)));
  return out;
}

json components_report(const io::ProblemDocument& doc, const CommandOptions& opt) {
  json out = io::to_json(ef_components_two_bads(doc.problem));
  if (opt.grid) out["oracle"] = brute_force_components(doc.problem, *opt.grid);
  return out;
}

json error_body(const std::string& type, const std::string& message) {
  return {{"error", {{"type", type}, {"message", message}}}};
}

}  // namespace

std::string to_string(Command command) {
  switch (command) {
    case Command::Classify: return "classify";
    case Command::Solve: return "solve";
    case Command::Enumerate: return "enumerate";
    case Command::Audit: return "audit";
    case Command::Components: return "components";
  }
  return "unknown";
}

Command parse_command(const std::string& name) {
  for (Command c : {Command::Classify, Command::Solve, Command::Enumerate, Command::Audit, Command::Components})
    if (to_string(c) == name) return c;
  throw InputError("unknown command '" + name + "'");
}

json run_command(Command command, const json& document, const CommandOptions& options) {
  const io::ProblemDocument doc = io::parse_problem_document(document);
  switch (command) {
    case Command::Classify: return classify_report(doc, options);
    case Command::Solve: return solve_report(doc, options);
    case Command::Enumerate: return enumerate_report(doc, options);
    case Command::Audit: return audit_report(doc, document, options);
    case Command::Components: return components_report(doc, options);
  }
  throw InputError("unknown command");
}

CommandResult guarded(const std::function<json()>& produce) {
  try {
    return {200, produce()};
  } catch (const io::SchemaError& e) {
    json body = error_body("schema", e.what());
    body["error"]["pointer"] = e.pointer();
    return {400, std::move(body)};
  } catch (const InputError& e) {
    return {400, error_body("input", e.what())};
  } catch (const PreconditionError& e) {
    return {422, error_body("precondition", e.what())};
  } catch (const LimitError& e) {
    return {413, error_body("limit", e.what())};
  } catch (const CancelledError& e) {
    return {413, error_body("limit", e.what())};
  } catch (const SolverError& e) {
    return {500, error_body("solver", e.what())};
  }
}

std::string serialize(const json& report) { return report.dump(2) + "\n"; }

CommandResult run_guarded(Command command, const json& document, const CommandOptions& options) {
  return guarded([&] { return run_command(command, document, options); });
}

}  // namespace manna::app
