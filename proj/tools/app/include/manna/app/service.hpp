#pragma once

#include <chrono>
#include <cstddef>
#include <string>

namespace manna::app {

struct ServiceOptions {
  std::size_t max_body = 64 * 1024;
  /// Per-request budget for enumeration and the positive solver.
  std::chrono::milliseconds budget{5000};
};

struct HttpReply {
  int status = 200;
  std::string body;
  /// Wall time spent in the handler; sent as a header so bodies stay deterministic.
  double elapsed_ms = 0.0;
};

/// Routes:
///   GET  /healthz, /api/demos, /api/demos/{name}
///   POST /api/classify, /api/solve, /api/enumerate, /api/audit, /api/components
/// POST bodies are problem documents with an optional "options" object
/// {"exact", "tol", "seed", "trials", "grid"}. Identical requests yield
/// byte-identical bodies. Thread-safe.
HttpReply handle_request(const std::string& method, const std::string& target, const std::string& body,
                         const ServiceOptions& options = {});

}  // namespace manna::app
