#include <httplib.h>

#include <cstdlib>
#include <iostream>
#include <string>

#include "manna/app/commands.hpp"
#include "manna/app/service.hpp"

int main() {
  const char* port_env = std::getenv("PORT");
  const int port = port_env ? std::atoi(port_env) : 8080;
  if (port <= 0 || port > 65535) {
    std::cerr << "manna-server: invalid PORT '" << (port_env ? port_env : "") << "'\n";
    return 1;
  }
  const manna::app::ServiceOptions options;

  httplib::Server server;
  server.set_payload_max_length(options.max_body);
  auto forward = [&](const httplib::Request& req, httplib::Response& res) {
    const manna::app::HttpReply r = manna::app::handle_request(req.method, req.target, req.body, options);
    res.status = r.status;
    res.set_header("X-Elapsed-Ms", std::to_string(r.elapsed_ms));
    res.set_content(r.body, "application/json");
  };
  server.Get(".*", forward);
  server.Post(".*", forward);
  server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return;
    const std::string type = res.status == 413 ? "limit" : "route";
    const manna::app::json body = {{"error", {{"type", type}, {"message", "HTTP " + std::to_string(res.status)}}}};
    res.set_content(manna::app::serialize(body), "application/json");
  });

  std::cerr << "manna-server listening on port " << port << "\n";
  if (!server.listen("0.0.0.0", port)) {
    std::cerr << "manna-server: cannot listen on port " << port << "\n";
    return 1;
  }
  return 0;
}
