#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "manna/audit.hpp"
#include "manna/classify.hpp"
#include "manna/enumerate.hpp"
#include "manna/kkt.hpp"
#include "manna/rules.hpp"
#include "manna/solver.hpp"
#include "manna/topology.hpp"

namespace manna::io {

using nlohmann::json;

/// Schema violation located by a JSON pointer ("/utilities/1/2").
class SchemaError : public InputError {
 public:
  SchemaError(std::string pointer, const std::string& message)
      : InputError(pointer + ": " + message), pointer_(std::move(pointer)) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

enum class Mode { Float, Exact };

/// {"agents": [...], "items": [{"name", "quantity"}], "utilities": [[...]]}
/// plus optional "weights", "rule", "limits": {"max_supports"}, "mode".
/// Numbers may be JSON numbers or strings ("3", "-1/4", "0.125").
struct ProblemDocument {
  ExactProblem exact;
  Problem problem;
  Weights weights;
  std::optional<Rule> rule;
  std::optional<std::size_t> max_supports;
  Mode mode = Mode::Float;
};

ProblemDocument parse_problem_document(std::string_view text);
ProblemDocument parse_problem_document(const json& doc);
inline ProblemDocument parse_problem_document(const char* text) { return parse_problem_document(std::string_view(text)); }
inline ProblemDocument parse_problem_document(const std::string& text) {
  return parse_problem_document(std::string_view(text));
}

/// Exact emission: integers as numbers, other rationals as "p/q" strings, so
/// parse_problem_document(to_json(P)).exact == P.
json to_json(const ExactProblem& problem);
json to_json(const Problem& problem);

json to_json(const Classification& c);
json to_json(const KktReport& report);
/// Profile, allocation, price, budget and (null regime) multipliers.
json division_json(const Problem& problem, const Division& d);
json division_json(const ExactProblem& problem, const ExactDivision& d);
json enumeration_json(const Problem& problem, const EnumerationResult<double>& r);
json enumeration_json(const ExactProblem& problem, const EnumerationResult<Rational>& r);
json to_json(const RuleOutput& out, const Problem& problem);
json to_json(const FairnessReport& report);
json to_json(const AxiomReport& report);
json to_json(const ComponentReport& report);
json to_json(const RmReport& report);

/// "p/q" or "p".
json rational_json(const Rational& v);
json profile_json(const std::vector<double>& v);
json profile_json(const std::vector<Rational>& v);

}  // namespace manna::io
