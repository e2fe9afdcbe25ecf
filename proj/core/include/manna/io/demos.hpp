#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "manna/io/json.hpp"

namespace manna::io {

/// Named replays of the worked instances with golden values stored as exact
/// rationals; float runs compare at `tolerance`.
struct DemoOptions {
  bool exact = false;
  double tolerance = 1e-9;
  std::size_t max_supports = EnumerationLimits{}.max_supports;
  /// Random spot-checks.
  std::uint64_t seed = 0;
};

struct DemoCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct DemoResult {
  std::string name;
  std::string title;
  std::vector<DemoCheck> checks;
  json report;

  bool passed() const;
};

std::vector<std::string> demo_names();
/// [{"name", "title"}] in registry order.
json demo_catalog();
/// Throws InputError for an unknown name.
DemoResult run_demo(const std::string& name, const DemoOptions& options = {});
json to_json(const DemoResult& result);

}  // namespace manna::io
