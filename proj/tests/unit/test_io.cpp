#include <gtest/gtest.h>

#include <random>

#include "instances.hpp"
#include "manna/io/json.hpp"

namespace manna::io {
namespace {

TEST(ProblemDocument, ParsesAndDefaults) {
  const ProblemDocument d = parse_problem_document(R"({
    "agents": ["ann", "bo"],
    "items": [{"name": "x", "quantity": 2}, {"name": "y", "quantity": "1/2"}, {"name": "z", "quantity": 0.25}],
    "utilities": [[1, -2, "3/4"], [0, 1.5, -1]],
    "rule": "egalitarian",
    "limits": {"max_supports": 10},
    "extra": true
  })");
  EXPECT_EQ(d.problem.agents, (std::vector<std::string>{"ann", "bo"}));
  EXPECT_EQ(d.exact.endowment, (std::vector<Rational>{2, Rational(1, 2), Rational(1, 4)}));
  EXPECT_EQ(d.exact.u(0, 2), Rational(3, 4));
  EXPECT_EQ(d.exact.u(1, 1), Rational(3, 2));
  EXPECT_DOUBLE_EQ(d.problem.u(0, 1), -2);
  EXPECT_EQ(d.rule, Rule::Egalitarian);
  EXPECT_EQ(d.max_supports, std::optional<std::size_t>(10));
  EXPECT_EQ(d.mode, Mode::Float);

  const ProblemDocument bare = parse_problem_document(R"({"utilities": [[-1, -2]]})");
  EXPECT_EQ(bare.problem.num_agents(), 1u);
  EXPECT_EQ(bare.exact.endowment, (std::vector<Rational>{1, 1}));
  EXPECT_FALSE(bare.rule.has_value());
}

std::string pointer_of(const std::string& text) {
  try {
    parse_problem_document(text);
  } catch (const SchemaError& e) {
    return e.pointer();
  }
  return "no error";
}

TEST(ProblemDocument, SchemaErrors) {
  EXPECT_EQ(pointer_of(R"({"items": [{"name": "a", "quantity": 1}]})"), "");
  EXPECT_EQ(pointer_of(R"({"utilities": [[1, 2], [1]]})"), "/utilities/1");
  EXPECT_EQ(pointer_of(R"({"utilities": [[1, "x"]]})"), "/utilities/0/1");
  EXPECT_EQ(pointer_of(R"({"utilities": [[1]], "items": [{"name": "a", "quantity": 0}]})"), "/items/0/quantity");
  EXPECT_EQ(pointer_of(R"({"utilities": [[1], [2]], "agents": ["a"]})"), "/agents");
  EXPECT_EQ(pointer_of(R"({"utilities": [[1], [2]], "weights": [1]})"), "/weights");
  EXPECT_EQ(pointer_of(R"({"utilities": [[1], [2]], "weights": [1, -1]})"), "/weights/1");
  EXPECT_EQ(pointer_of(R"({"utilities": [[1]], "rule": "nash"})"), "/rule");
  EXPECT_EQ(pointer_of(R"({"utilities": [[1]], "mode": "fast"})"), "/mode");
  EXPECT_THROW(parse_problem_document("not json"), InputError);
}

TEST(ProblemDocument, ExactRoundTrip) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> num(-20, 20), den(1, 9);
  for (int t = 0; t < 50; ++t) {
    std::vector<std::vector<Rational>> rows(1 + t % 3, std::vector<Rational>(1 + t % 4));
    for (auto& row : rows)
      for (Rational& x : row) x = Rational(num(rng), den(rng));
    std::vector<Rational> omega(rows[0].size());
    for (Rational& w : omega) w = Rational(den(rng), den(rng));
    const ExactProblem p = make_problem<Rational>(rows, omega);
    EXPECT_EQ(parse_problem_document(to_json(p)).exact, p) << t;
  }
  EXPECT_EQ(rational_json(Rational(3)), json(3));
  EXPECT_EQ(rational_json(Rational(-5, 6)), json("-5/6"));
}

TEST(Emitters, DeterministicAndShaped) {
  const ExactProblem p = testing::lambda_problem<Rational>(-1);
  const auto r = enumerate_negative(p);
  const json a = enumeration_json(p, r), b = enumeration_json(p, enumerate_negative(p));
  EXPECT_EQ(a.dump(), b.dump());
  EXPECT_EQ(a["count"], 4);
  EXPECT_EQ(a["selected"], 1);
  EXPECT_EQ(a["divisions"][1]["profile"], json({"-3/2", "-3/2"}));
  EXPECT_EQ(a["divisions"][1]["allocation"][0], json({1, 0, "1/2"}));
  EXPECT_EQ(a["divisions"][1]["budget"], -1);

  const json c = to_json(classify(testing::lambda_problem(2)));
  EXPECT_EQ(c["kind"], "Null");
  const json k = to_json(kkt_verify(testing::lambda_problem(-1), to_double(r.divisions[1])));
  EXPECT_EQ(k["passed"], true);
}

}  // namespace
}  // namespace manna::io
