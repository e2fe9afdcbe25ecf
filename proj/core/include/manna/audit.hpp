#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "manna/classify.hpp"
#include "manna/model.hpp"
#include "manna/rules.hpp"

namespace manna {

/// Fairness margins are compared against kAuditTol·max(1, max_i Σ_a |u_ia|ω_a).
inline constexpr double kAuditTol = 1e-9;
/// Weak-core LPs enumerate coalitions up to this many agents.
inline constexpr std::size_t kWeakCoreMaxAgents = 8;

enum class CoreStatus { Holds, Blocked, Skipped };

std::string to_string(CoreStatus status);

struct FairnessReport {
  double tolerance = kAuditTol;

  bool envy_free = true;
  /// Worst pair: min_{i≠j} u_i·(z_i − z_j). Zero with a single agent.
  std::size_t envy_agent = 0, envied_agent = 0;
  double envy_margin = 0.0;

  bool fair_share = true;
  /// Worst agent: min_i u_i·z_i − u_i·ω/n.
  std::size_t fair_share_agent = 0;
  double fair_share_margin = 0.0;

  /// Blocked when some coalition S, endowed with (|S|/n)·ω, can make every
  /// member better off by more than the tolerance.
  CoreStatus weak_core = CoreStatus::Holds;
  std::vector<std::size_t> blocking_coalition;
  double blocking_gain = 0.0;

  /// Optimum of max Σδ_i s.t. u_i·z'_i ≥ U_i + δ_i, δ ≥ 0, z' feasible.
  bool efficient = true;
  double efficiency_gain = 0.0;

  bool all_passed() const {
    return envy_free && fair_share && weak_core != CoreStatus::Blocked && efficient;
  }
};

/// Requires a feasible allocation (InputError otherwise).
FairnessReport audit_allocation(const Problem& problem, const Allocation& z);

struct AxiomWitness {
  Problem problem;
  Problem perturbed;
  std::string detail;
};

struct AxiomResult {
  explicit AxiomResult(std::string axiom = {}) : name(std::move(axiom)) {}

  std::string name;
  std::size_t checks = 0;
  /// Problems the rule could not process (enumeration size caps).
  std::size_t skipped = 0;
  std::size_t failure_count = 0;
  /// The first few failures, each reproducible from its problems.
  std::vector<AxiomWitness> failures;

  bool passed() const { return failure_count == 0; }
};

struct AxiomReport {
  Rule rule = Rule::Competitive;
  std::size_t problems = 0;
  AxiomResult ete{"ete"}, sol{"sol"}, ilb{"ilb"}, scale_invariance{"scale_invariance"},
      pareto_indifference{"pareto_indifference"};

  std::vector<const AxiomResult*> results() const {
    return {&ete, &sol, &ilb, &scale_invariance, &pareto_indifference};
  }
  bool passed() const;
};

/// Runs ETE (duplicated agent), SOL, ILB (lowered losing bids), scale
/// invariance and Pareto-indifference on every problem, `trials` random draws
/// per problem and axiom. Deterministic for a fixed seed.
AxiomReport check_rule_axioms(Rule rule, const std::vector<Problem>& problems, std::size_t trials,
                              std::uint64_t seed, const RuleOptions& options = {});

/// Bounds implied for any efficient rule guaranteeing fair share when a
/// two-agent two-bads problem shrinks bad `item`: the other agent k keeps at
/// least u_k·ω'/2, which caps agent j at u_jb·(ω'_b − fs_k/u_kb).
struct RmBound {
  std::size_t agent = 0;
  std::size_t other = 0;
  Rational other_fair_share;
  Rational cap;
  /// cap < U_j before the change.
  bool violated = false;
};

struct RmReport {
  Rule rule = Rule::Competitive;
  /// Improved item, or none when the problems coincide.
  std::optional<std::size_t> item;
  std::vector<Rational> before, after, delta;
  bool exact = false;
  bool monotone = true;
  std::vector<std::size_t> worse_off;
  std::vector<RmBound> bounds;
};

/// Throws InputError unless `improved` differs from `base` only in the amount
/// of one item that every agent weakly likes (more of it) or weakly dislikes
/// (less of it). Competitive divisions of negative problems are computed
/// exactly; everything else runs in double and is converted.
RmReport rm_demo(const ExactProblem& base, const ExactProblem& improved, Rule rule);

struct RandomProblemSpec {
  std::size_t min_agents = 2, max_agents = 4;
  std::size_t min_items = 1, max_items = 4;
  /// Utilities uniform in [−range, range].
  double range = 3.0;
};

/// Seeded random problem. With a target kind, positive and negative problems
/// come from rejection sampling on biased draws; null problems use a parallel
/// good/bad pair (u_ic = v_i, u_ib = −v_i, unit amounts) plus items each
/// agent outside one weakly dislikes.
Problem random_problem(std::mt19937_64& rng, const RandomProblemSpec& spec = {},
                       std::optional<ProblemKind> kind = std::nullopt);

}  // namespace manna
