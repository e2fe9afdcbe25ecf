#include "manna/topology.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "manna/classify.hpp"
#include "manna/enumerate.hpp"

namespace manna {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTieTol = 1e-12;

void require_two_bads(const Problem& problem) {
  problem.validate();
  if (problem.num_items() != 2) throw PreconditionError("two-bads analysis needs exactly two items");
  for (std::size_t i = 0; i < problem.num_agents(); ++i)
    for (std::size_t a = 0; a < 2; ++a)
      if (!(problem.u(i, a) < 0)) throw PreconditionError("two-bads analysis needs u_ia < 0 for every agent and item");
}

// t_k = k/(n−k) for 0 ≤ k ≤ n, with t_n = ∞.
double threshold(std::size_t k, std::size_t n) {
  return k >= n ? kInf : double(k) / double(n - k);
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t size) : parent(size) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void join(std::size_t x, std::size_t y) { parent[find(x)] = find(y); }
};

struct HalfPlane {
  double a, b, c;  // a·x + b·y + c ≥ 0
  double operator()(double x, double y) const { return a * x + b * y + c; }
};

using Polygon = std::vector<std::array<double, 2>>;

Polygon clip(const Polygon& poly, const HalfPlane& h, double eps) {
  Polygon out;
  for (std::size_t k = 0; k < poly.size(); ++k) {
    const auto& p = poly[k];
    const auto& q = poly[(k + 1) % poly.size()];
    const double fp = h(p[0], p[1]), fq = h(q[0], q[1]);
    if (fp >= -eps) out.push_back(p);
    if ((fp >= -eps) != (fq >= -eps)) {
      const double s = fp / (fp - fq);
      out.push_back({p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])});
    }
  }
  return out;
}

// The i-split rectangle; S^1 is the segment x = 1 and S^n the segment y = 1.
struct Rect {
  double x0, x1, y0, y1;
  bool x_fixed() const { return x0 == x1; }
  bool y_fixed() const { return y0 == y1; }
};

Rect split_rect(std::size_t i, std::size_t n) {
  Rect r{0.0, i == 1 ? 1.0 : 1.0 / double(i), 0.0, i == n ? 1.0 : 1.0 / double(n - i + 1)};
  if (i == 1) r.x0 = 1.0;
  if (i == n) r.y0 = 1.0;
  return r;
}

// No-envy constraints in S^i over (x, y) for agents normalized to u = (−r, −1).
// Bundles: left group ((1−x)/(i−1), 0), agent i (x, y), right group (0, (1−y)/(n−i)).
std::vector<HalfPlane> envy_planes(const std::vector<double>& ratios, std::size_t i) {
  const std::size_t n = ratios.size();
  // value of bundle g for ratio r as (constant, x-coefficient, y-coefficient)
  auto value = [&](int g, double r) -> std::array<double, 3> {
    if (g == 0) return {-r / double(i - 1), r / double(i - 1), 0.0};
    if (g == 1) return {0.0, -r, -1.0};
    return {-1.0 / double(n - i), 0.0, 1.0 / double(n - i)};
  };
  std::vector<HalfPlane> planes;
  for (std::size_t j = 1; j <= n; ++j) {
    const int own = j < i ? 0 : (j == i ? 1 : 2);
    for (int g = 0; g < 3; ++g) {
      if (g == own || (g == 0 && i == 1) || (g == 2 && i == n)) continue;
      const auto v = value(own, ratios[j - 1]);
      const auto w = value(g, ratios[j - 1]);
      planes.push_back({v[1] - w[1], v[2] - w[2], v[0] - w[0]});
    }
  }
  return planes;
}

}  // namespace

ComponentReport ef_components_two_bads(const Problem& problem) {
  require_two_bads(problem);
  ComponentReport rep;
  rep.agent_order.resize(problem.num_agents());
  std::iota(rep.agent_order.begin(), rep.agent_order.end(), 0);
  auto ratio = [&](std::size_t i) { return problem.u(i, 0) / problem.u(i, 1); };
  std::stable_sort(rep.agent_order.begin(), rep.agent_order.end(),
                   [&](std::size_t x, std::size_t y) { return ratio(x) < ratio(y); });
  std::vector<std::size_t> kept;
  for (std::size_t k : rep.agent_order) {
    const double v = ratio(k);
    if (!rep.ratio_order.empty() && v - rep.ratio_order.back() <= kTieTol * v) continue;
    rep.ratio_order.push_back(v);
    kept.push_back(k);
  }
  rep.agent_order = std::move(kept);
  const std::size_t n = rep.ratio_order.size();
  if (n == 1) {
    rep.interior_splits.push_back(1);
    rep.count = 1;
    return rep;
  }
  auto r = [&](std::size_t i) { return rep.ratio_order[i - 1]; };
  auto t = [&](std::size_t k) { return threshold(k, n); };

  for (std::size_t i = 1; i < n; ++i)
    if (r(i) <= t(i) && t(i) <= r(i + 1)) rep.ef_cuts.push_back(i);
  for (std::size_t i = 1; i <= n; ++i) {
    const bool left = i == 1 || t(i - 1) < r(i - 1);
    const bool right = i == n || r(i + 1) < t(i);
    if (left && right) rep.interior_splits.push_back(i);
  }
  std::size_t runs = 0;
  for (std::size_t k = 0; k < rep.ef_cuts.size(); ++k)
    if (k == 0 || rep.ef_cuts[k] != rep.ef_cuts[k - 1] + 1) ++runs;
  rep.count = runs + rep.interior_splits.size();
  return rep;
}

std::size_t brute_force_components(const Problem& problem, std::size_t grid) {
  require_two_bads(problem);
  if (problem.num_agents() > 10) throw PreconditionError("grid oracle supports at most 10 agents");
  if (grid < 2 || grid > 400) throw PreconditionError("grid must lie in [2, 400]");
  const ComponentReport order = ef_components_two_bads(problem);
  const std::size_t n = order.ratio_order.size();
  if (n == 1) return 1;
  const double eps = 1e-12 * (1.0 + order.ratio_order.back());

  const std::size_t side = grid;
  std::vector<std::size_t> base(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) base[i] = base[i - 1] + side * side;
  UnionFind uf(base[n]);
  std::vector<unsigned char> marked(base[n], 0);
  auto cell = [&](std::size_t i, std::size_t kx, std::size_t ky) { return base[i - 1] + kx * side + ky; };

  auto in_ef = [&](const std::vector<HalfPlane>& planes, double x, double y) {
    return std::all_of(planes.begin(), planes.end(), [&](const HalfPlane& h) { return h(x, y) >= -eps; });
  };
  for (std::size_t i = 1; i <= n; ++i) {
    const std::vector<HalfPlane> planes = envy_planes(order.ratio_order, i);
    const Rect box = split_rect(i, n);
    const std::size_t cx = box.x_fixed() ? 1 : side, cy = box.y_fixed() ? 1 : side;
    for (std::size_t kx = 0; kx < cx; ++kx) {
      for (std::size_t ky = 0; ky < cy; ++ky) {
        const double x0 = box.x0 + (box.x1 - box.x0) * double(kx) / double(cx);
        const double x1 = box.x0 + (box.x1 - box.x0) * double(kx + 1) / double(cx);
        const double y0 = box.y0 + (box.y1 - box.y0) * double(ky) / double(cy);
        const double y1 = box.y0 + (box.y1 - box.y0) * double(ky + 1) / double(cy);
        Polygon poly{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
        for (const HalfPlane& h : planes) {
          poly = clip(poly, h, eps);
          if (poly.empty()) break;
        }
        if (poly.empty()) continue;
        const std::size_t c = cell(i, kx, ky);
        marked[c] = 1;
        for (int dx = -1; dx <= 1; ++dx) {
          for (int dy = -1; dy <= 0; ++dy) {
            if ((dy == 0 && dx >= 0) || (dx < 0 && kx == 0) || (dy < 0 && ky == 0) || kx + dx >= cx) continue;
            const std::size_t d = cell(i, kx + dx, ky + dy);
            if (marked[d]) uf.join(c, d);
          }
        }
      }
    }
  }
  // The cut z^{i/i+1} is (1/i, 0) in S^i and (0, 1/(n−i)) in S^{i+1}; it
  // joins the two rectangles only if that allocation is itself envy-free.
  for (std::size_t i = 1; i < n; ++i) {
    const Rect left = split_rect(i, n);
    const bool ef = in_ef(envy_planes(order.ratio_order, i), left.x1, left.y0);
    const std::size_t lc = left.x_fixed() ? cell(i, 0, 0) : cell(i, side - 1, 0);
    const std::size_t rc = i + 1 == n ? cell(n, 0, 0) : cell(i + 1, 0, side - 1);
    if (ef && marked[lc] && marked[rc]) uf.join(lc, rc);
  }
  std::size_t count = 0;
  for (std::size_t c = 0; c < marked.size(); ++c)
    if (marked[c] && uf.find(c) == c) ++count;
  return count;
}

Problem clone_bads(const Problem& problem, std::size_t m) {
  require_two_bads(problem);
  if (m < 3) throw PreconditionError("cloning needs m ≥ 3");
  const std::size_t n = problem.num_agents();
  std::vector<std::vector<double>> rows(n, std::vector<double>(m));
  for (std::size_t i = 0; i < n; ++i) {
    rows[i][0] = problem.u(i, 0) * problem.endowment[0];
    for (std::size_t k = 1; k < m; ++k) rows[i][k] = problem.u(i, 1) * problem.endowment[1] / double(m - 1);
  }
  Problem out = make_problem<double>(rows, std::vector<double>(m, 1.0));
  out.agents = problem.agents;
  out.items[0] = problem.items[0];
  for (std::size_t k = 1; k < m; ++k) out.items[k] = problem.items[1] + "_" + std::to_string(k);
  return out;
}

Problem merge_parallel_items(const Problem& problem) {
  problem.validate();
  const std::size_t n = problem.num_agents();
  const std::size_t m = problem.num_items();
  auto parallel = [&](std::size_t a, std::size_t b) {
    double factor = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = problem.u(i, a), y = problem.u(i, b);
      if ((x == 0) != (y == 0)) return false;
      if (x == 0) continue;
      const double f = y / x;
      if (f <= 0) return false;
      if (factor == 0.0)
        factor = f;
      else if (std::fabs(f - factor) > 1e-12 * factor)
        return false;
    }
    return true;
  };
  std::vector<int> group(m, -1);
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t a = 0; a < m; ++a) {
    if (group[a] >= 0) continue;
    group[a] = int(groups.size());
    groups.push_back({a});
    for (std::size_t b = a + 1; b < m; ++b)
      if (group[b] < 0 && parallel(a, b)) {
        group[b] = group[a];
        groups.back().push_back(b);
      }
  }
  std::vector<std::vector<double>> rows(n, std::vector<double>(groups.size(), 0.0));
  for (std::size_t g = 0; g < groups.size(); ++g)
    for (std::size_t a : groups[g])
      for (std::size_t i = 0; i < n; ++i) rows[i][g] += problem.u(i, a) * problem.endowment[a];
  Problem out = make_problem<double>(rows, std::vector<double>(groups.size(), 1.0));
  out.agents = problem.agents;
  for (std::size_t g = 0; g < groups.size(); ++g) out.items[g] = problem.items[groups[g].front()];
  return out;
}

Problem two_bads_from_ratios(const std::vector<double>& ratios) {
  if (ratios.empty()) throw InputError("need at least one ratio");
  std::vector<std::vector<double>> rows;
  for (double r : ratios) {
    if (!(r > 0) || !std::isfinite(r)) throw InputError("ratios must be positive and finite");
    rows.push_back({-r, -1.0});
  }
  return make_problem<double>(rows);
}

std::vector<double> pattern_ratios(std::size_t n) {
  if (n == 0) throw InputError("pattern needs n ≥ 1");
  std::vector<double> r;
  // Group 0 holds positions 1, 2 in (0, t_1); group q ≥ 1 holds 3q..3q+2 in
  // (t_3q, t_3q+1), both thresholds capped at the last one.
  for (std::size_t q = 0; r.size() < n; ++q) {
    const std::size_t first = q == 0 ? 1 : 3 * q;
    const std::size_t last = std::min(n, q == 0 ? std::size_t(2) : 3 * q + 2);
    const double lo = q == 0 ? 0.0 : threshold(std::min(3 * q, n - 1), n);
    const double hi = q == 0 ? threshold(1, n) : threshold(std::min(3 * q + 1, n), n);
    const std::size_t size = last - first + 1;
    for (std::size_t k = 0; k < size; ++k) {
      const double v = std::isinf(hi) ? lo + double(k + 1) : lo + (hi - lo) * double(k + 1) / double(size + 1);
      r.push_back(v);
    }
  }
  if (n == 1) r = {1.0};
  return r;
}

DiscontinuityReport discontinuity_demo(const std::vector<double>& from, const std::vector<double>& to,
                                       std::size_t steps) {
  if (from.size() != to.size() || from.empty()) throw InputError("ratio paths need equal nonempty lengths");
  if (steps == 0) throw InputError("steps must be positive");
  DiscontinuityReport rep;
  for (std::size_t k = 0; k <= steps; ++k) {
    const double s = double(k) / double(steps);
    std::vector<double> r(from.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = (1 - s) * from[i] + s * to[i];
    const Problem p = two_bads_from_ratios(r);
    const EnumerationResult<double> res = enumerate_two_items(p);
    PathSample sample{s, ef_components_two_bads(p).count, res.profiles[select_index(res)]};
    if (!rep.samples.empty()) {
      double jump = 0.0;
      for (std::size_t i = 0; i < r.size(); ++i)
        jump = std::max(jump, std::fabs(sample.selected[i] - rep.samples.back().selected[i]));
      if (jump > rep.max_jump) {
        rep.max_jump = jump;
        rep.jump_index = k;
      }
    }
    rep.samples.push_back(std::move(sample));
  }
  return rep;
}

}  // namespace manna
