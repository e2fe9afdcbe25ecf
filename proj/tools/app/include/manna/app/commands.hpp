#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "manna/cancel.hpp"
#include "manna/io/json.hpp"

namespace manna::app {

using io::json;

enum class Command { Classify, Solve, Enumerate, Audit, Components };

std::string to_string(Command command);
/// Throws InputError for an unknown name.
Command parse_command(const std::string& name);

struct CommandOptions {
  /// Exact arithmetic where an exact path exists (negative competitive
  /// enumeration); also set by "mode": "exact" in the document.
  bool exact = false;
  /// KKT tolerance for reported residuals; kKktTol when unset.
  std::optional<double> tol;
  /// Overrides the document's limits.max_supports.
  std::optional<std::size_t> max_supports;
  std::uint64_t seed = 0;
  /// Overrides the document's rule.
  std::optional<Rule> rule;
  /// Audit: random draws per axiom; 0 skips the axiom suite.
  std::size_t trials = 0;
  /// Components: also run the grid oracle at this resolution.
  std::optional<std::size_t> grid;
  const CancelToken* cancel = nullptr;
};

/// Runs one command on a problem document. Reports are deterministic for a
/// fixed document and options. Errors propagate: io::SchemaError and
/// InputError (malformed input), PreconditionError (wrong kind or shape),
/// LimitError and CancelledError (size or time budget), SolverError.
///
/// Audit accepts an optional "allocation" matrix in the document; without it
/// the rule's selected allocation is audited.
json run_command(Command command, const json& document, const CommandOptions& options = {});

/// Outcome of a guarded run: HTTP-style status plus body.
struct CommandResult {
  int status = 200;
  json body;
};

/// Maps errors to 400 (schema/input), 422 (kind/arity), 413 (limits or
/// budget), 500 (solver). Error bodies are {"error": {"type", "message"[, "pointer"]}}.
CommandResult run_guarded(Command command, const json& document, const CommandOptions& options = {});
/// Same mapping for any report producer.
CommandResult guarded(const std::function<json()>& produce);

/// Canonical JSON text shared by the CLI (--json) and the HTTP service.
std::string serialize(const json& report);

/// Human-readable rendering of a command report.
std::string render(Command command, const json& report);
std::string render_demo(const json& report);

}  // namespace manna::app
