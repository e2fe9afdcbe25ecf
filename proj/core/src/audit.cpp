#include "manna/audit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "manna/enumerate.hpp"
#include "manna/kkt.hpp"
#include "manna/lp.hpp"

namespace manna {
namespace {

constexpr std::size_t kMaxWitnesses = 5;
constexpr double kProfileMatch = 1e-6;

double problem_scale(const Problem& problem) {
  double scale = 1.0;
  for (std::size_t i = 0; i < problem.num_agents(); ++i) {
    double s = 0.0;
    for (std::size_t a = 0; a < problem.num_items(); ++a) s += std::fabs(problem.u(i, a)) * problem.endowment[a];
    scale = std::max(scale, s);
  }
  return scale;
}

double bundle_value(const Problem& problem, std::size_t i, const Allocation& z, std::size_t j) {
  double v = 0.0;
  for (std::size_t a = 0; a < problem.num_items(); ++a) v += problem.u(i, a) * z(j, a);
  return v;
}

// max δ s.t. the agents in `members`, sharing share·ω, each reach U_i + δ.
// With `per_agent`, maximizes Σδ_i over δ_i ≥ 0 instead.
double improvement_lp(const Problem& problem, const std::vector<std::size_t>& members, double share,
                      const UtilityProfile& U, bool per_agent) {
  const std::size_t m = problem.num_items();
  const std::size_t k = members.size();
  const std::size_t nz = k * m;
  LpSpec lp(nz + (per_agent ? k : 1));
  if (per_agent) {
    for (std::size_t s = 0; s < k; ++s) lp.objective[nz + s] = 1.0;
  } else {
    lp.objective[nz] = 1.0;
    lp.make_free(nz);
  }
  for (std::size_t a = 0; a < m; ++a) {
    std::vector<double> row(lp.num_vars(), 0.0);
    for (std::size_t s = 0; s < k; ++s) row[s * m + a] = 1.0;
    lp.add(std::move(row), Relation::Equal, share * problem.endowment[a]);
  }
  for (std::size_t s = 0; s < k; ++s) {
    std::vector<double> row(lp.num_vars(), 0.0);
    for (std::size_t a = 0; a < m; ++a) row[s * m + a] = problem.u(members[s], a);
    row[nz + (per_agent ? s : 0)] = -1.0;
    lp.add(std::move(row), Relation::GreaterEqual, U[members[s]]);
  }
  const LpSolution sol = solve_lp(lp);
  if (sol.status == LpStatus::Infeasible) return -kInfinity;
  if (!sol.optimal()) throw SolverError("audit LP: " + to_string(sol.status));
  return sol.value;
}

bool same_profile(const UtilityProfile& x, const UtilityProfile& y) {
  if (x.size() != y.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (std::fabs(x[i] - y[i]) > kProfileMatch * std::max(1.0, std::fabs(y[i]))) return false;
  return true;
}

std::string profile_text(const UtilityProfile& u) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < u.size(); ++i) os << (i ? ", " : "") << u[i];
  os << ')';
  return os.str();
}

void record(AxiomResult& r, const Problem& p, const Problem& q, std::string detail) {
  ++r.failure_count;
  if (r.failures.size() < kMaxWitnesses) r.failures.push_back({p, q, std::move(detail)});
}

// A feasible allocation with the same profile as z, pushed to a random vertex.
std::optional<Allocation> indifferent_allocation(const Problem& problem, const UtilityProfile& U,
                                                 std::mt19937_64& rng) {
  const std::size_t n = problem.num_agents(), m = problem.num_items();
  LpSpec lp(n * m);
  std::uniform_real_distribution<double> coin(-1.0, 1.0);
  for (double& c : lp.objective) c = coin(rng);
  for (std::size_t a = 0; a < m; ++a) {
    std::vector<double> row(n * m, 0.0);
    for (std::size_t i = 0; i < n; ++i) row[i * m + a] = 1.0;
    lp.add(std::move(row), Relation::Equal, problem.endowment[a]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(n * m, 0.0);
    for (std::size_t a = 0; a < m; ++a) row[i * m + a] = problem.u(i, a);
    lp.add(std::move(row), Relation::Equal, U[i]);
  }
  const LpSolution sol = solve_lp(lp);
  if (!sol.optimal()) return std::nullopt;
  Allocation z(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < m; ++a) z(i, a) = std::max(0.0, sol.point[i * m + a]);
  return z;
}

bool is_improvement(const ExactProblem& base, const ExactProblem& improved, std::optional<std::size_t>& item) {
  if (base.agents != improved.agents || base.items != improved.items || !(base.utilities == improved.utilities))
    return false;
  item.reset();
  for (std::size_t a = 0; a < base.num_items(); ++a) {
    if (base.endowment[a] == improved.endowment[a]) continue;
    if (item) return false;
    item = a;
  }
  if (!item) return true;
  const std::size_t a = *item;
  bool all_like = true, all_dislike = true;
  for (std::size_t i = 0; i < base.num_agents(); ++i) {
    all_like = all_like && base.u(i, a) >= 0;
    all_dislike = all_dislike && base.u(i, a) <= 0;
  }
  const bool more = improved.endowment[a] > base.endowment[a];
  return more ? all_like : all_dislike;
}

struct ExactRun {
  std::vector<Rational> profile;
  bool exact = false;
};

ExactRun run_selected(const ExactProblem& problem, Rule rule) {
  const Problem approx = to_double(problem);
  if (rule == Rule::Competitive && classify(problem).kind == ProblemKind::Negative) {
    const EnumerationResult<Rational> res = enumerate_negative(problem);
    return {res.profiles[select_index(res)], true};
  }
  const RuleOutput out = run_rule(rule, approx);
  ExactRun run;
  for (double v : out.selected_profile()) run.profile.push_back(rational_from_double(v));
  return run;
}

}  // namespace

std::string to_string(CoreStatus status) {
  switch (status) {
    case CoreStatus::Holds: return "holds";
    case CoreStatus::Blocked: return "blocked";
    case CoreStatus::Skipped: return "skipped";
  }
  return "unknown";
}

FairnessReport audit_allocation(const Problem& problem, const Allocation& z) {
  problem.validate();
  if (!check_feasible(problem, z)) throw InputError("audit needs a feasible allocation");
  const std::size_t n = problem.num_agents();
  FairnessReport rep;
  const double tol = kAuditTol * problem_scale(problem);
  rep.tolerance = tol;
  const UtilityProfile U = utility_profile(problem, z);

  rep.envy_margin = kInfinity;
  rep.fair_share_margin = kInfinity;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double margin = U[i] - bundle_value(problem, i, z, j);
      if (margin < rep.envy_margin) {
        rep.envy_margin = margin;
        rep.envy_agent = i;
        rep.envied_agent = j;
      }
    }
    double share = 0.0;
    for (std::size_t a = 0; a < problem.num_items(); ++a) share += problem.u(i, a) * problem.endowment[a];
    const double margin = U[i] - share / double(n);
    if (margin < rep.fair_share_margin) {
      rep.fair_share_margin = margin;
      rep.fair_share_agent = i;
    }
  }
  if (n == 1) rep.envy_margin = 0.0;
  rep.envy_free = rep.envy_margin >= -tol;
  rep.fair_share = rep.fair_share_margin >= -tol;

  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  rep.efficiency_gain = std::max(0.0, improvement_lp(problem, all, 1.0, U, true));
  rep.efficient = rep.efficiency_gain <= tol;

  if (n > kWeakCoreMaxAgents) {
    rep.weak_core = CoreStatus::Skipped;
  } else {
    for (std::size_t mask = 1; mask < (std::size_t(1) << n); ++mask) {
      std::vector<std::size_t> members;
      for (std::size_t i = 0; i < n; ++i)
        if (mask >> i & 1) members.push_back(i);
      const double gain = improvement_lp(problem, members, double(members.size()) / double(n), U, false);
      if (gain > tol && gain > rep.blocking_gain) {
        rep.weak_core = CoreStatus::Blocked;
        rep.blocking_gain = gain;
        rep.blocking_coalition = members;
      }
    }
  }
  return rep;
}

bool AxiomReport::passed() const {
  for (const AxiomResult* r : results())
    if (!r->passed()) return false;
  return true;
}

AxiomReport check_rule_axioms(Rule rule, const std::vector<Problem>& problems, std::size_t trials,
                              std::uint64_t seed, const RuleOptions& options) {
  AxiomReport rep;
  rep.rule = rule;
  rep.problems = problems.size();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> spread(0.1, 2.0);

  for (const Problem& p : problems) {
    RuleOutput out;
    try {
      out = run_rule(rule, p, options);
    } catch (const LimitError&) {
      for (AxiomResult* r : {&rep.ete, &rep.sol, &rep.ilb, &rep.scale_invariance, &rep.pareto_indifference})
        ++r->skipped;
      continue;
    }
    const std::size_t n = p.num_agents(), m = p.num_items();

    ++rep.sol.checks;
    for (const UtilityProfile& U : out.profiles) {
      const double tol = kAuditTol * problem_scale(p);
      const bool some_pos = std::any_of(U.begin(), U.end(), [&](double v) { return v > tol; });
      const bool some_neg = std::any_of(U.begin(), U.end(), [&](double v) { return v < -tol; });
      if (some_pos && some_neg) record(rep.sol, p, p, "mixed-sign profile " + profile_text(U));
    }

    for (std::size_t t = 0; t < trials; ++t) {
      // ETE: append a copy of a random agent.
      {
        const std::size_t i = rng() % n;
        std::vector<std::vector<double>> rows;
        for (std::size_t k = 0; k <= n; ++k) {
          const auto row = p.utilities.row(k < n ? k : i);
          rows.emplace_back(row.begin(), row.end());
        }
        Problem q = make_problem<double>(rows, p.endowment);
        try {
          const RuleOutput o = run_rule(rule, q, options);
          ++rep.ete.checks;
          for (const UtilityProfile& U : o.profiles)
            if (std::fabs(U[i] - U[n]) > kProfileMatch * std::max(1.0, std::fabs(U[i])))
              record(rep.ete, p, q, "agents " + std::to_string(i) + " and copy get " + profile_text(U));
        } catch (const LimitError&) {
          ++rep.ete.skipped;
        }
      }

      // ILB: lower a losing bid of every output allocation.
      for (std::size_t k = 0; k < out.allocations.size(); ++k) {
        const Allocation& z = out.allocations[k];
        std::vector<std::pair<std::size_t, std::size_t>> zeros;
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t a = 0; a < m; ++a)
            if (z(i, a) <= kNegativityCutoff) zeros.emplace_back(i, a);
        if (zeros.empty()) continue;
        const auto [i, a] = zeros[rng() % zeros.size()];
        Problem q = p;
        q.utilities(i, a) -= spread(rng) * std::fabs(p.u(i, a)) + 0.1;
        ++rep.ilb.checks;
        bool kept = false;
        if (rule == Rule::Competitive) {
          kept = kkt_verify(q, out.divisions[k]).passed;
        } else {
          try {
            kept = run_rule(rule, q, options).contains(q, z);
          } catch (const LimitError&) {
            --rep.ilb.checks;
            ++rep.ilb.skipped;
            continue;
          }
        }
        if (!kept)
          record(rep.ilb, p, q, "lowering u(" + std::to_string(i) + "," + std::to_string(a) + ") drops output " +
                                    std::to_string(k));
      }

      // Scale invariance.
      {
        std::vector<double> scale(n);
        for (double& s : scale) s = spread(rng) + 0.1;
        const Problem q = rescale_agents(p, scale);
        try {
          const RuleOutput o = run_rule(rule, q, options);
          ++rep.scale_invariance.checks;
          bool ok = o.profiles.size() == out.profiles.size();
          for (std::size_t k = 0; ok && k < out.profiles.size(); ++k) {
            UtilityProfile scaled = out.profiles[k];
            for (std::size_t i = 0; i < n; ++i) scaled[i] *= scale[i];
            ok = std::any_of(o.profiles.begin(), o.profiles.end(),
                             [&](const UtilityProfile& v) { return same_profile(v, scaled); }) &&
                 o.contains(q, out.allocations[k]);
          }
          if (!ok)
            record(rep.scale_invariance, p, q,
                   std::to_string(out.profiles.size()) + " profiles before, " + std::to_string(o.profiles.size()) +
                       " after rescaling");
        } catch (const LimitError&) {
          ++rep.scale_invariance.skipped;
        }
      }

      // Pareto-indifference: an allocation with the same profile stays selected.
      {
        const std::size_t k = rng() % out.profiles.size();
        const std::optional<Allocation> alt = indifferent_allocation(p, out.profiles[k], rng);
        ++rep.pareto_indifference.checks;
        bool ok = alt.has_value();
        if (ok && rule == Rule::Competitive) {
          Division d = out.divisions[k];
          d.allocation = *alt;
          ok = kkt_verify(p, d).passed;
        } else if (ok) {
          ok = out.contains(p, *alt);
        }
        if (!ok) record(rep.pareto_indifference, p, p, "indifferent allocation rejected for profile " +
                                                            profile_text(out.profiles[k]));
      }
    }
  }
  return rep;
}

RmReport rm_demo(const ExactProblem& base, const ExactProblem& improved, Rule rule) {
  base.validate();
  improved.validate();
  RmReport rep;
  rep.rule = rule;
  if (!is_improvement(base, improved, rep.item))
    throw InputError("the second problem does not improve the first on a single unanimous item");

  const ExactRun before = run_selected(base, rule);
  const ExactRun after = run_selected(improved, rule);
  rep.exact = before.exact && after.exact;
  rep.before = before.profile;
  rep.after = after.profile;
  const std::size_t n = base.num_agents();
  // Float runs are compared with a small slack; exact runs exactly.
  const Rational slack = rep.exact ? Rational(0) : Rational(1, 1000000);
  for (std::size_t i = 0; i < n; ++i) {
    rep.delta.push_back(rep.after[i] - rep.before[i]);
    if (rep.delta[i] < -slack * std::max(Rational(1), abs_value(rep.before[i]))) rep.worse_off.push_back(i);
  }
  rep.monotone = rep.worse_off.empty();

  bool two_bads = n == 2 && base.num_items() == 2 && rep.item;
  for (std::size_t i = 0; two_bads && i < 2; ++i)
    for (std::size_t a = 0; a < 2; ++a) two_bads = two_bads && base.u(i, a) < 0;
  if (two_bads) {
    const std::size_t b = 1 - *rep.item;
    for (std::size_t j = 0; j < 2; ++j) {
      const std::size_t k = 1 - j;
      RmBound bound;
      bound.agent = j;
      bound.other = k;
      bound.other_fair_share =
          (base.u(k, 0) * improved.endowment[0] + base.u(k, 1) * improved.endowment[1]) / Rational(2);
      bound.cap = base.u(j, b) * (improved.endowment[b] - bound.other_fair_share / base.u(k, b));
      bound.violated = bound.cap < rep.before[j];
      rep.bounds.push_back(bound);
    }
  }
  return rep;
}

Problem random_problem(std::mt19937_64& rng, const RandomProblemSpec& spec, std::optional<ProblemKind> kind) {
  if (spec.min_agents < 1 || spec.min_items < 1 || spec.max_agents < spec.min_agents ||
      spec.max_items < spec.min_items)
    throw InputError("invalid random problem shape");
  auto pick = [&](std::size_t lo, std::size_t hi) { return lo + rng() % (hi - lo + 1); };
  std::uniform_real_distribution<double> mag(0.1, spec.range);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  if (kind == ProblemKind::Null) {
    const std::size_t n = pick(std::max<std::size_t>(spec.min_agents, 1), spec.max_agents);
    const std::size_t m = pick(std::max<std::size_t>(spec.min_items, 2), std::max<std::size_t>(spec.max_items, 2));
    std::vector<std::vector<double>> rows(n, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      const double v = mag(rng);
      rows[i][0] = v;
      rows[i][1] = -v;
    }
    for (std::size_t a = 2; a < m; ++a) {
      const std::size_t keeper = rng() % n;
      for (std::size_t i = 0; i < n; ++i)
        rows[i][a] = i == keeper ? 0.0 : (unit(rng) < 0.3 ? 0.0 : -mag(rng));
    }
    return make_problem<double>(rows);
  }

  for (int attempt = 0; attempt < 10000; ++attempt) {
    const std::size_t n = pick(spec.min_agents, spec.max_agents);
    const std::size_t m = pick(spec.min_items, spec.max_items);
    // Bias the sign mix toward the requested kind.
    const double good_share = !kind ? 0.5 : (*kind == ProblemKind::Positive ? 0.6 : 0.15);
    std::vector<std::vector<double>> rows(n, std::vector<double>(m));
    for (auto& row : rows)
      for (double& v : row) {
        const double r = unit(rng);
        v = r < 0.08 ? 0.0 : (r < 0.08 + good_share ? mag(rng) : -mag(rng));
      }
    std::vector<double> omega(m);
    for (double& w : omega) w = 0.5 + unit(rng);
    Problem p = make_problem<double>(rows, omega);
    if (!kind || classify(p).kind == *kind) return p;
  }
  throw SolverError("random problem sampling did not reach the requested kind");
}

}  // namespace manna
