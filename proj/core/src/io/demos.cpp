#include "manna/io/demos.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

namespace manna::io {
namespace {

using RationalRows = std::vector<std::vector<Rational>>;

Rational R(long long p, long long q = 1) { return Rational(p, q); }

template <class T>
T from_rational(const Rational& v) {
  if constexpr (std::is_same_v<T, Rational>) {
    return v;
  } else {
    return to_double(v);
  }
}

template <class T>
std::vector<T> from_rational(const std::vector<Rational>& v) {
  std::vector<T> out;
  for (const Rational& x : v) out.push_back(from_rational<T>(x));
  return out;
}

template <class T>
std::string text(const T& v) {
  if constexpr (std::is_same_v<T, Rational>) {
    return format_rational(v);
  } else {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
  }
}

template <class T>
std::string text(const std::vector<T>& v) {
  std::string out = "(";
  for (std::size_t k = 0; k < v.size(); ++k) out += (k ? ", " : "") + text(v[k]);
  return out + ")";
}

/// Exact equality for rationals; |x − g| ≤ tol·max(1, |g|) for doubles.
template <class T>
bool close(const T& x, const Rational& golden, double tol) {
  if constexpr (std::is_same_v<T, Rational>) {
    return x == golden;
  } else {
    const double g = to_double(golden);
    return std::fabs(x - g) <= tol * std::max(1.0, std::fabs(g));
  }
}

template <class T>
bool close(const std::vector<T>& x, const std::vector<Rational>& golden, double tol) {
  if (x.size() != golden.size()) return false;
  for (std::size_t k = 0; k < x.size(); ++k)
    if (!close(x[k], golden[k], tol)) return false;
  return true;
}

template <class T>
bool close(const Matrix<T>& x, const RationalRows& golden, double tol) {
  if (x.rows() != golden.size()) return false;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    std::vector<T> row(x.row(r).begin(), x.row(r).end());
    if (!close(row, golden[r], tol)) return false;
  }
  return true;
}

template <class T>
BasicProblem<T> instance(const RationalRows& u, const std::vector<Rational>& omega = {}) {
  std::vector<std::vector<T>> rows;
  for (const auto& row : u) rows.push_back(from_rational<T>(row));
  return make_problem<T>(rows, from_rational<T>(omega));
}

template <class T>
BasicDivision<T> golden_division(const RationalRows& z, const std::vector<Rational>& price, int budget) {
  std::vector<std::vector<T>> rows;
  for (const auto& row : z) rows.push_back(from_rational<T>(row));
  BasicDivision<T> d;
  d.allocation = BasicAllocation<T>::from_rows(rows);
  d.price = from_rational<T>(price);
  d.budget = budget;
  return d;
}

template <class T>
double kkt_tol(double tol) {
  return std::is_same_v<T, Rational> ? 0.0 : tol;
}

template <class T>
std::optional<std::size_t> find_profile(const EnumerationResult<T>& r, const std::vector<Rational>& golden,
                                        double tol) {
  for (std::size_t k = 0; k < r.profiles.size(); ++k)
    if (close(r.profiles[k], golden, tol)) return k;
  return std::nullopt;
}

template <class T>
std::optional<std::size_t> find_allocation(const EnumerationResult<T>& r, const RationalRows& golden, double tol) {
  for (std::size_t k = 0; k < r.divisions.size(); ++k)
    if (close(r.divisions[k].allocation.shares, golden, tol)) return k;
  return std::nullopt;
}

class Recorder {
 public:
  explicit Recorder(DemoResult& result) : result_(result) {}

  bool operator()(std::string name, bool passed, std::string detail) {
    result_.checks.push_back({std::move(name), passed, std::move(detail)});
    return passed;
  }

 private:
  DemoResult& result_;
};

std::vector<Rational> to_exact_profile(const std::vector<Rational>& v) { return v; }
std::vector<Rational> to_exact_profile(const std::vector<double>& v) {
  std::vector<Rational> out;
  for (double x : v) out.push_back(rational_from_double(x));
  return out;
}

/// A golden division certified by kkt_verify and present among the enumerated profiles.
template <class T>
void check_golden_division(Recorder& check, const std::string& name, const BasicProblem<T>& p,
                          const EnumerationResult<T>& r, const RationalRows& z, const std::vector<Rational>& price,
                          double tol, json& report) {
  const BasicDivision<T> d = golden_division<T>(z, price, -1);
  const KktReport kkt = kkt_verify(p, d, kkt_tol<T>(tol));
  check(name + " verifies", kkt.passed, "price " + text(from_rational<T>(price)) + ": " + kkt.summary());
  const auto profile = utility_profile(p, d.allocation);
  const auto k = find_profile(r, to_exact_profile(profile), tol);
  check(name + " enumerated", k.has_value(), "profile " + text(profile));
  report[name] = {{"division", division_json(p, d)}, {"kkt", to_json(kkt)}};
}

template <class T>
json enumeration_report(const BasicProblem<T>& p, const EnumerationResult<T>& r) {
  return enumeration_json(p, r);
}

// λ-family: u_1 = (−1, −3, λ), u_2 = (−2, −1, λ), unit endowments.
RationalRows lambda_rows(int lambda) { return {{R(-1), R(-3), R(lambda)}, {R(-2), R(-1), R(lambda)}}; }

template <class T>
void lambda_family(DemoResult& res, const DemoOptions& opt) {
  Recorder check(res);
  const double tol = opt.tolerance;
  EnumerationLimits limits;
  limits.max_supports = opt.max_supports;

  json kinds = json::object(), counts = json::object();
  bool kinds_ok = true;
  std::size_t lo = SIZE_MAX, hi = 0;
  for (int lambda = 4; lambda >= -3; --lambda) {
    const BasicProblem<T> p = instance<T>(lambda_rows(lambda));
    const ProblemKind kind = classify(p).kind;
    const ProblemKind expected =
        lambda >= 3 ? ProblemKind::Positive : (lambda == 2 ? ProblemKind::Null : ProblemKind::Negative);
    kinds_ok = kinds_ok && kind == expected;
    kinds[std::to_string(lambda)] = to_string(kind);
    if (expected == ProblemKind::Negative) {
      const auto r = enumerate_negative(p, limits);
      counts[std::to_string(lambda)] = r.profiles.size();
      lo = std::min(lo, r.profiles.size());
      hi = std::max(hi, r.profiles.size());
      if (lambda == 1) {
        const std::size_t s = select_index(r);
        bool best_for_1 = true;
        for (const auto& v : r.profiles) best_for_1 = best_for_1 && !(v[0] > r.profiles[s][0]);
        check("lambda=1 selection favours agent 1", best_for_1, "selected " + text(r.profiles[s]));
      }
    }
  }
  check("classification", kinds_ok, kinds.dump());
  check("profile counts range from 1 to 4", lo == 1 && hi == 4, counts.dump());
  res.report["kinds"] = kinds;
  res.report["counts"] = counts;

  const BasicProblem<T> p = instance<T>(lambda_rows(-1));
  const auto r = enumerate_negative(p, limits);
  const std::vector<std::vector<Rational>> golden = {
      {R(-1), R(-2)}, {R(-3, 2), R(-3, 2)}, {R(-2), R(-1)}, {R(-5, 2), R(-5, 6)}};
  bool all = r.profiles.size() == golden.size();
  for (std::size_t k = 0; all && k < golden.size(); ++k) all = close(r.profiles[k], golden[k], tol);
  std::string listed;
  for (const auto& v : r.profiles) listed += text(v) + " ";
  check("lambda=-1 profiles", all, std::to_string(r.profiles.size()) + " profiles: " + listed);
  const std::size_t s = select_index(r);
  check("lambda=-1 selection", s < r.profiles.size() && close(r.profiles[s], golden[1], tol),
        "selected " + text(r.profiles[s]));
  const RationalRows z = {{R(1), R(0), R(1, 2)}, {R(0), R(1), R(1, 2)}};
  check("lambda=-1 selected allocation", close(r.divisions[s].allocation.shares, z, tol),
        "z_1 = " + text(std::vector<T>(r.divisions[s].allocation.shares.row(0).begin(),
                                       r.divisions[s].allocation.shares.row(0).end())));
  res.report["lambda=-1"] = enumeration_report(p, r);

  // Null and positive cases run in double.
  const Problem null_p = instance<double>(lambda_rows(2));
  const Division nd = solve_null(null_p);
  const KktReport nk = kkt_verify(null_p, nd, 1e-9);
  const auto nu = utility_profile(null_p, nd.allocation);
  check("lambda=2 null division", nk.passed && close(nu, std::vector<Rational>{R(0), R(0)}, 1e-9),
        "profile " + text(nu) + ", multipliers " + text(nd.multipliers) + ": " + nk.summary());
  res.report["lambda=2"] = {{"division", division_json(null_p, nd)}, {"kkt", to_json(nk)}};

  const Problem pos_p = instance<double>(lambda_rows(4));
  const RuleOutput pos = competitive_rule(pos_p);
  const double ptol = std::max(tol, 1e-6);
  check("lambda=4 competitive profile", close(pos.selected_profile(), std::vector<Rational>{R(1), R(1)}, ptol),
        "profile " + text(pos.selected_profile()));
  res.report["lambda=4"] = to_json(pos, pos_p);
}

RationalRows two_agent_rows() {
  return {{R(-1), R(-1), R(-2), R(-4), R(-8), R(-17)}, {R(-17), R(-8), R(-4), R(-2), R(-1), R(-1)}};
}

template <class T>
void prop1_two_agents(DemoResult& res, const DemoOptions& opt) {
  Recorder check(res);
  const double tol = opt.tolerance;
  const BasicProblem<T> p = instance<T>(two_agent_rows());
  const auto r = enumerate_negative(p);
  check("11 profiles", r.profiles.size() == 11, std::to_string(r.profiles.size()) + " profiles");
  res.report["enumeration"] = enumeration_report(p, r);

  // {a, b} for agent 1, {c, d, e, f} for agent 2.
  const RationalRows cut = {{R(1), R(1), R(0), R(0), R(0), R(0)}, {R(0), R(0), R(1), R(1), R(1), R(1)}};
  const std::vector<Rational> cut_price = {R(-1, 2), R(-1, 2), R(-1, 2), R(-1, 4), R(-1, 8), R(-1, 8)};
  check_golden_division<T>(check, "cut ab|cdef", p, r, cut, cut_price, std::min(tol, 1e-8), res.report);

  const RationalRows split = {{R(1), R(1), R(1), R(1), R(1), R(1, 34)}, {R(0), R(0), R(0), R(0), R(0), R(33, 34)}};
  std::vector<Rational> split_price;
  for (long long v : {2, 2, 4, 8, 16, 34}) split_price.push_back(R(-v, 33));
  check_golden_division<T>(check, "split f", p, r, split, split_price, tol, res.report);
  const BasicDivision<T> d = golden_division<T>(split, split_price, -1);
  const T u1 = utility_profile(p, d.allocation)[0];
  const T fair = (p.u(0, 0) + p.u(0, 1) + p.u(0, 2) + p.u(0, 3) + p.u(0, 4) + p.u(0, 5)) / T(2);
  check("split f gives agent 1 its fair share", close(u1, R(-33, 2), tol) && close(fair, R(-33, 2), tol),
        "U_1 = " + text(u1) + ", fair share " + text(fair));
}

RationalRows two_item_rows() {
  return {{R(-1), R(-6)}, {R(-1), R(-3)}, {R(-2), R(-3)}, {R(-3), R(-2)}, {R(-3), R(-1)}, {R(-6), R(-1)}};
}

template <class T>
void prop1_two_items(DemoResult& res, const DemoOptions& opt) {
  Recorder check(res);
  const double tol = opt.tolerance;
  const BasicProblem<T> p = instance<T>(two_item_rows());
  const auto r = enumerate_negative(p);
  check("11 profiles", r.profiles.size() == 11, std::to_string(r.profiles.size()) + " profiles");
  res.report["enumeration"] = enumeration_report(p, r);

  const RationalRows split = {{R(5, 12), R(0)}, {R(5, 12), R(0)},    {R(1, 6), R(1, 6)},
                              {R(0), R(5, 18)}, {R(0), R(5, 18)}, {R(0), R(5, 18)}};
  check_golden_division<T>(check, "split at agent 3", p, r, split, {R(-12, 5), R(-18, 5)}, tol, res.report);
  const auto k = find_allocation(r, split, tol);
  check("split at agent 3 table", k.has_value(),
        k ? "enumerated division " + std::to_string(*k) + " matches the table" : "no enumerated allocation matches");

  const RationalRows cut = {{R(1, 2), R(0)}, {R(1, 2), R(0)}, {R(0), R(1, 4)},
                            {R(0), R(1, 4)}, {R(0), R(1, 4)}, {R(0), R(1, 4)}};
  check_golden_division<T>(check, "cut 12|3456", p, r, cut, {R(-2), R(-4)}, tol, res.report);
}

RationalRows general_rows() {
  RationalRows u(6, std::vector<Rational>(5, R(-3)));
  for (std::size_t i = 0; i < 5; ++i) u[i][i] = R(-1);
  u[5] = std::vector<Rational>(5, R(-1));
  return u;
}

template <class T>
void prop1_general(DemoResult& res, const DemoOptions& opt) {
  Recorder check(res);
  const double tol = opt.tolerance;
  const BasicProblem<T> p = instance<T>(general_rows());
  EnumerationLimits limits;
  limits.max_supports = opt.max_supports;
  const auto r = enumerate_negative(p, limits);
  check("31 profiles", r.profiles.size() == 31 && r.exhaustive,
        std::to_string(r.profiles.size()) + " profiles" + (r.exhaustive ? "" : " (search cut short)"));
  res.report["enumeration"] = enumeration_report(p, r);

  RationalRows sym(6, std::vector<Rational>(5, R(0)));
  for (std::size_t i = 0; i < 5; ++i) {
    sym[i][i] = R(5, 6);
    sym[5][i] = R(1, 6);
  }
  check_golden_division<T>(check, "symmetric division", p, r, sym, std::vector<Rational>(5, R(-6, 5)), tol,
                          res.report);

  RationalRows sub(6, std::vector<Rational>(5, R(0)));
  sub[0][0] = sub[1][1] = R(2, 3);
  sub[2][2] = sub[3][3] = sub[4][4] = R(1);
  sub[5][0] = sub[5][1] = R(1, 3);
  check_golden_division<T>(check, "subset 345", p, r, sub, {R(-3, 2), R(-3, 2), R(-1), R(-1), R(-1)}, tol,
                          res.report);
}

void prop4_rm(DemoResult& res, const DemoOptions& opt) {
  Recorder check(res);
  const ExactProblem base = make_problem<Rational>({{R(-1), R(-4)}, {R(-4), R(-1)}});
  ExactProblem improved = base;
  improved.endowment[0] = R(1, 9);

  const RmReport comp = rm_demo(base, improved, Rule::Competitive);
  res.report["competitive"] = to_json(comp);
  // The agent that gets at least −1 at ω must fall to −10/9 or below at ω′.
  std::optional<std::size_t> j;
  for (std::size_t i = 0; i < 2 && !j; ++i)
    if (comp.before[i] >= R(-1)) j = i;
  check("an agent gets at least -1 before", j.has_value(), "before " + text(comp.before));
  if (j) {
    const RmBound& b = comp.bounds.at(*j);
    check("other agent's fair share", b.other_fair_share == R(-13, 18),
          "u_k.omega'/2 = " + format_rational(b.other_fair_share));
    check("cap", b.cap == R(-10, 9), "cap " + format_rational(b.cap));
    check("post-change utility at most the cap", comp.after[*j] <= R(-10, 9),
          "U'_" + std::to_string(*j + 1) + " = " + format_rational(comp.after[*j]));
  }
  check("competitive rule violates RM", !comp.monotone, "delta " + text(comp.delta));

  const RmReport egal = rm_demo(base, improved, Rule::Egalitarian);
  res.report["egalitarian"] = to_json(egal);
  check("egalitarian rule violates RM", !egal.monotone, "delta " + text(to_double(egal.delta)));

  // Goods: the competitive rule is resource monotonic.
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> util(0.1, 3.0), amount(0.5, 1.5), gain(1.1, 2.0);
  std::size_t failures = 0;
  const std::size_t trials = 200;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t n = 2 + rng() % 3, m = 1 + rng() % 4;
    std::vector<std::vector<double>> u(n, std::vector<double>(m));
    std::vector<double> omega(m);
    for (auto& row : u)
      for (double& v : row) v = util(rng);
    for (double& w : omega) w = amount(rng);
    const ExactProblem g = to_exact(make_problem<double>(u, omega));
    ExactProblem more = g;
    const std::size_t a = rng() % m;
    more.endowment[a] = g.endowment[a] * rational_from_double(gain(rng));
    if (!rm_demo(g, more, Rule::Competitive).monotone) ++failures;
  }
  check("goods spot-check", failures == 0,
        std::to_string(trials - failures) + "/" + std::to_string(trials) + " random goods problems monotone");
  res.report["goods_trials"] = trials;
  res.report["goods_failures"] = failures;
}

void lemma5(DemoResult& res, const DemoOptions&) {
  Recorder check(res);
  const std::size_t grid = 200;
  auto structure = [](const ComponentReport& c) {
    return "count " + std::to_string(c.count) + ", cuts " + json(c.ef_cuts).dump() + ", interior " +
           json(c.interior_splits).dump();
  };

  const std::vector<double> first = {0.2, 0.3, 3.5, 4.0}, second = {0.2, 0.3, 0.5, 0.9};
  const Problem p1 = two_bads_from_ratios(first), p2 = two_bads_from_ratios(second);
  const ComponentReport c1 = ef_components_two_bads(p1), c2 = ef_components_two_bads(p2);
  const std::size_t o1 = brute_force_components(p1, grid), o2 = brute_force_components(p2, grid);
  check("three components", c1.count == 3 && o1 == 3 && c1.ef_cuts == std::vector<std::size_t>{2} &&
                                c1.interior_splits == std::vector<std::size_t>{1, 4},
        structure(c1) + ", oracle " + std::to_string(o1));
  check("one component", c2.count == 1 && o2 == 1 && c2.ef_cuts.empty() &&
                             c2.interior_splits == std::vector<std::size_t>{1},
        structure(c2) + ", oracle " + std::to_string(o2));
  res.report["witnesses"] = {to_json(c1), to_json(c2)};

  const Problem cloned = clone_bads(p1, 3);
  const ComponentReport cc = ef_components_two_bads(merge_parallel_items(cloned));
  check("cloned bads keep three components", cloned.num_items() == 3 && cc.count == 3, structure(cc));

  json pattern = json::array();
  bool pattern_ok = true;
  std::string detail;
  for (std::size_t n = 3; n <= 9; ++n) {
    const Problem p = two_bads_from_ratios(pattern_ratios(n));
    const std::size_t count = ef_components_two_bads(p).count, oracle = brute_force_components(p, grid);
    const std::size_t expected = (2 * n + 1) / 3;
    pattern_ok = pattern_ok && count == expected && oracle == expected;
    detail += "n=" + std::to_string(n) + ":" + std::to_string(count) + "/" + std::to_string(oracle) + " ";
    pattern.push_back({{"n", n}, {"count", count}, {"oracle", oracle}, {"expected", expected}});
  }
  check("pattern counts", pattern_ok, detail + "(formula/oracle)");
  res.report["pattern"] = pattern;

  const DiscontinuityReport path = discontinuity_demo(first, second, 100);
  json samples = json::array();
  for (const PathSample& s : path.samples)
    samples.push_back({{"s", s.s}, {"components", s.components}, {"selected", s.selected}});
  res.report["path"] = {{"samples", std::move(samples)}, {"max_jump", path.max_jump}, {"jump_index", path.jump_index}};
  check("path endpoints", path.samples.front().components == 3 && path.samples.back().components == 1,
        "components " + std::to_string(path.samples.front().components) + " -> " +
            std::to_string(path.samples.back().components));
}

struct Entry {
  const char* name;
  const char* title;
  std::function<void(DemoResult&, const DemoOptions&)> run;
};

#define MANNA_EXACT_DISPATCH(fn)                                          \
  [](DemoResult& res, const DemoOptions& opt) {                           \
    if (opt.exact)                                                        \
      fn<Rational>(res, opt);                                             \
    else                                                                  \
      fn<double>(res, opt);                                               \
  }

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries = {
      {"lambda-family", "Two agents, two bads and an item c worth lambda to both, lambda from 4 to -3",
       MANNA_EXACT_DISPATCH(lambda_family)},
      {"prop1-two-agents", "Two agents, six bads: eleven competitive profiles", MANNA_EXACT_DISPATCH(prop1_two_agents)},
      {"prop1-two-items", "Six agents, two bads: eleven competitive profiles", MANNA_EXACT_DISPATCH(prop1_two_items)},
      {"prop1-general", "Six agents, five bads: one profile per strict subset plus the symmetric division",
       MANNA_EXACT_DISPATCH(prop1_general)},
      {"prop4-rm", "Shrinking a bad makes an agent worse off under any efficient fair-share rule", prop4_rm},
      {"lemma5", "Components of the efficient envy-free set with two bads", lemma5},
  };
  return entries;
}

#undef MANNA_EXACT_DISPATCH

}  // namespace

bool DemoResult::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const DemoCheck& c) { return c.passed; });
}

std::vector<std::string> demo_names() {
  std::vector<std::string> out;
  for (const Entry& e : registry()) out.emplace_back(e.name);
  return out;
}

json demo_catalog() {
  json out = json::array();
  for (const Entry& e : registry()) out.push_back({{"name", e.name}, {"title", e.title}});
  return out;
}

DemoResult run_demo(const std::string& name, const DemoOptions& options) {
  for (const Entry& e : registry()) {
    if (name != e.name) continue;
    DemoResult res;
    res.name = e.name;
    res.title = e.title;
    res.report = json::object();
    e.run(res, options);
    return res;
  }
  throw InputError("unknown demo '" + name + "'");
}

json to_json(const DemoResult& result) {
  json checks = json::array();
  for (const DemoCheck& c : result.checks)
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  return {{"name", result.name},
          {"title", result.title},
          {"passed", result.passed()},
          {"checks", std::move(checks)},
          {"report", result.report}};
}

}  // namespace manna::io
