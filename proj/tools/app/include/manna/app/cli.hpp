#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace manna::app {

/// Exit codes of the manna CLI.
enum ExitCode : int {
  kExitOk = 0,
  kExitInput = 1,      // usage, schema, wrong kind or shape
  kExitAssertion = 2,  // a demo's golden check failed
  kExitCompute = 3,    // limit, time budget or solver failure
};

/// Runs the CLI on argv (argv[0] is the program name). A problem path of "-"
/// reads the document from `in`.
int run_cli(const std::vector<std::string>& argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace manna::app
