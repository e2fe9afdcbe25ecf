#include <gtest/gtest.h>
#include <httplib.h>

#include <future>
#include <thread>

#include "manna/app/commands.hpp"
#include "manna/app/service.hpp"

namespace manna::app {
namespace {

const std::string kLambda = R"({"utilities": [[-1, -3, -1], [-2, -1, -1]]})";

int status(const std::string& method, const std::string& target, const std::string& body = "") {
  return handle_request(method, target, body).status;
}

TEST(Service, Statuses) {
  EXPECT_EQ(status("GET", "/healthz"), 200);
  EXPECT_EQ(status("GET", "/api/demos"), 200);
  EXPECT_EQ(status("GET", "/api/demos/nope"), 404);
  EXPECT_EQ(status("GET", "/elsewhere"), 404);
  EXPECT_EQ(status("POST", "/api/frobnicate", kLambda), 404);
  EXPECT_EQ(status("DELETE", "/api/solve"), 405);
  EXPECT_EQ(status("POST", "/api/solve", kLambda), 200);
  EXPECT_EQ(status("POST", "/api/solve?verbose=1", kLambda), 200);
  EXPECT_EQ(status("POST", "/api/solve", "{"), 400);
  EXPECT_EQ(status("POST", "/api/enumerate", R"({"utilities": [[-1, -3, 4], [-2, -1, 4]]})"), 422);
  EXPECT_EQ(status("POST", "/api/solve", std::string(70 * 1024, ' ')), 413);
  EXPECT_EQ(status("POST", "/api/audit", R"({"utilities": [[1]], "options": {"trials": 51}})"), 400);
}

TEST(Service, ErrorBodies) {
  const HttpReply r = handle_request("POST", "/api/classify", R"({"utilities": [[1, 2], [3]]})");
  EXPECT_EQ(r.status, 400);
  const json j = json::parse(r.body);
  EXPECT_EQ(j["error"]["type"], "schema");
  EXPECT_EQ(j["error"]["pointer"], "/utilities/1");
}

TEST(Service, OptionsAndExact) {
  const HttpReply r = handle_request("POST", "/api/solve",
                                     R"({"utilities": [[-1, -3, -1], [-2, -1, -1]], "options": {"exact": true}})");
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(json::parse(r.body)["division"]["profile"], json({"-3/2", "-3/2"}));
  EXPECT_EQ(status("POST", "/api/components", R"({"utilities": [[-1, -1], [-2, -1]], "options": {"grid": 1}})"), 400);
}

TEST(Service, TimeBudgetMapsTo413) {
  ServiceOptions tight;
  tight.budget = std::chrono::milliseconds(0);
  const HttpReply r = handle_request(
      "POST", "/api/enumerate",
      R"({"utilities": [[-1,-3,-3,-3,-3],[-3,-1,-3,-3,-3],[-3,-3,-1,-3,-3],[-3,-3,-3,-1,-3],[-3,-3,-3,-3,-1],[-1,-1,-1,-1,-1]]})",
      tight);
  EXPECT_EQ(r.status, 413) << r.body;
}

TEST(Service, IdempotentAndThreadSafe) {
  const std::vector<std::pair<std::string, std::string>> requests = {
      {"/api/solve", kLambda},
      {"/api/enumerate", kLambda},
      {"/api/classify", R"({"utilities": [[-1, -3, 2], [-2, -1, 2]]})"},
      {"/api/audit", R"({"utilities": [[2, 1], [1, 2]], "options": {"trials": 1}})"},
  };
  std::vector<std::string> serial;
  for (const auto& [target, body] : requests) {
    serial.push_back(handle_request("POST", target, body).body);
    EXPECT_EQ(handle_request("POST", target, body).body, serial.back());
  }
  std::vector<std::future<std::string>> futures;
  for (int t = 0; t < 32; ++t) {
    const auto& [target, body] = requests[t % requests.size()];
    futures.push_back(std::async(std::launch::async, [&target, &body] {
      return handle_request("POST", target, body).body;
    }));
  }
  for (std::size_t t = 0; t < futures.size(); ++t) EXPECT_EQ(futures[t].get(), serial[t % requests.size()]);
}

TEST(Service, OverHttp) {
  httplib::Server server;
  auto forward = [](const httplib::Request& req, httplib::Response& res) {
    const HttpReply r = handle_request(req.method, req.target, req.body);
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  server.Get(".*", forward);
  server.Post(".*", forward);
  const int port = server.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread loop([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  const std::string expected = handle_request("POST", "/api/solve", kLambda).body;
  std::vector<std::future<bool>> clients;
  for (int t = 0; t < 8; ++t)
    clients.push_back(std::async(std::launch::async, [&] {
      httplib::Client c("127.0.0.1", port);
      const auto res = c.Post("/api/solve", kLambda, "application/json");
      return res && res->status == 200 && res->body == expected;
    }));
  for (auto& c : clients) EXPECT_TRUE(c.get());
  httplib::Client c("127.0.0.1", port);
  const auto health = c.Get("/healthz");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);

  server.stop();
  loop.join();
}

}  // namespace
}  // namespace manna::app
