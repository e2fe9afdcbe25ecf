#include "manna/lp.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "manna/model.hpp"

namespace manna {
namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kReducedCostTol = 1e-9;
constexpr std::size_t kMaxIterations = 200000;

// A standard-form column stands for sign·x'[col] added to original var `var`.
struct StdColumn {
  std::size_t var;
  double sign;
};

enum class ColumnKind { Structural, Slack, Artificial };

// Solves M x = rhs (M square, row-major) with partial pivoting.
std::optional<std::vector<double>> solve_dense(std::vector<double> m, std::vector<double> rhs, std::size_t n) {
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(m[r * n + col]) > std::fabs(m[piv * n + col])) piv = r;
    if (std::fabs(m[piv * n + col]) < 1e-13) return std::nullopt;
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(m[piv * n + c], m[col * n + c]);
      std::swap(rhs[piv], rhs[col]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      double f = m[r * n + col] / m[col * n + col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) m[r * n + c] -= f * m[col * n + c];
      rhs[r] -= f * rhs[col];
    }
  }
  std::vector<double> x(n, 0.0);
  for (std::size_t k = n; k-- > 0;) {
    double s = rhs[k];
    for (std::size_t c = k + 1; c < n; ++c) s -= m[k * n + c] * x[c];
    x[k] = s / m[k * n + k];
  }
  return x;
}

class Tableau {
 public:
  Tableau(std::vector<double> a, std::vector<double> b, std::size_t rows, std::size_t cols)
      : t_(std::move(a)), rhs_(std::move(b)), rows_(rows), cols_(cols) {}

  double& at(std::size_t r, std::size_t c) { return t_[r * cols_ + c]; }
  double at(std::size_t r, std::size_t c) const { return t_[r * cols_ + c]; }
  double& rhs(std::size_t r) { return rhs_[r]; }

  void pivot(std::size_t pr, std::size_t pc) {
    const double p = at(pr, pc);
    for (std::size_t c = 0; c < cols_; ++c) at(pr, c) /= p;
    rhs_[pr] /= p;
    at(pr, pc) = 1.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < cols_; ++c) at(r, c) -= f * at(pr, c);
      rhs_[r] -= f * rhs_[pr];
      at(r, pc) = 0.0;
    }
  }

 private:
  std::vector<double> t_;
  std::vector<double> rhs_;
  std::size_t rows_;
  std::size_t cols_;
};

struct SimplexState {
  Tableau tab;
  std::vector<std::size_t> basis;   // per row
  std::vector<bool> active;         // rows not dropped as redundant
  std::vector<ColumnKind> kind;     // per column
  std::size_t rows;
  std::size_t cols;
  std::size_t iterations = 0;
};

enum class PhaseResult { Optimal, Unbounded, IterationLimit };

PhaseResult run_phase(SimplexState& s, const std::vector<double>& cost, bool allow_artificial) {
  std::vector<bool> is_basic(s.cols, false);
  for (std::size_t r = 0; r < s.rows; ++r)
    if (s.active[r]) is_basic[s.basis[r]] = true;
  while (true) {
    if (++s.iterations > kMaxIterations) return PhaseResult::IterationLimit;
    // Bland: first improving column.
    std::optional<std::size_t> entering;
    for (std::size_t j = 0; j < s.cols && !entering; ++j) {
      if (is_basic[j]) continue;
      if (!allow_artificial && s.kind[j] == ColumnKind::Artificial) continue;
      double d = cost[j];
      for (std::size_t r = 0; r < s.rows; ++r)
        if (s.active[r]) d -= cost[s.basis[r]] * s.tab.at(r, j);
      if (d > kReducedCostTol) entering = j;
    }
    if (!entering) return PhaseResult::Optimal;
    const std::size_t j = *entering;
    std::optional<std::size_t> leaving;
    double best = 0.0;
    for (std::size_t r = 0; r < s.rows; ++r) {
      if (!s.active[r]) continue;
      const double a = s.tab.at(r, j);
      if (a <= kPivotTol) continue;
      const double ratio = std::max(0.0, s.tab.rhs(r)) / a;
      if (!leaving || ratio < best - 1e-12 * std::max(1.0, std::fabs(best)) ||
          (std::fabs(ratio - best) <= 1e-12 * std::max(1.0, std::fabs(best)) && s.basis[r] < s.basis[*leaving])) {
        leaving = r;
        best = ratio;
      }
    }
    if (!leaving) return PhaseResult::Unbounded;
    is_basic[s.basis[*leaving]] = false;
    s.tab.pivot(*leaving, j);
    s.basis[*leaving] = j;
    is_basic[j] = true;
  }
}

}  // namespace

std::string to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::NumericFailure: return "numeric-failure";
  }
  return "unknown";
}

LpSolution solve_lp(const LpSpec& spec) {
  const std::size_t n = spec.num_vars();
  if (spec.lower.size() != n || spec.upper.size() != n) throw InputError("LP bound vectors differ from variable count");
  for (const auto& c : spec.constraints) {
    if (c.coefficients.size() != n) throw InputError("LP constraint length differs from variable count");
    for (double v : c.coefficients)
      if (!std::isfinite(v)) throw InputError("LP coefficients must be finite");
    if (!std::isfinite(c.rhs)) throw InputError("LP right-hand sides must be finite");
  }
  for (double v : spec.objective)
    if (!std::isfinite(v)) throw InputError("LP objective must be finite");

  // Standard form: x = offset + Σ sign·x', x' ≥ 0.
  std::vector<StdColumn> std_cols;
  std::vector<double> offset(n, 0.0);
  struct BoundRow {
    std::size_t col;
    double width;
  };
  std::vector<BoundRow> bound_rows;
  for (std::size_t j = 0; j < n; ++j) {
    const double lo = spec.lower[j];
    const double hi = spec.upper[j];
    if (lo > hi) {
      LpSolution out;
      out.status = LpStatus::Infeasible;
      return out;
    }
    if (std::isfinite(lo)) {
      offset[j] = lo;
      std_cols.push_back({j, 1.0});
      if (std::isfinite(hi)) bound_rows.push_back({std_cols.size() - 1, hi - lo});
    } else if (std::isfinite(hi)) {
      offset[j] = hi;
      std_cols.push_back({j, -1.0});
    } else {
      std_cols.push_back({j, 1.0});
      std_cols.push_back({j, -1.0});
    }
  }
  const std::size_t ns = std_cols.size();
  const std::size_t m = spec.constraints.size() + bound_rows.size();

  std::vector<double> a_std(m * ns, 0.0);
  std::vector<double> b(m, 0.0);
  std::vector<Relation> rel(m, Relation::LessEqual);
  for (std::size_t k = 0; k < spec.constraints.size(); ++k) {
    const auto& c = spec.constraints[k];
    double shift = 0.0;
    for (std::size_t j = 0; j < n; ++j) shift += c.coefficients[j] * offset[j];
    for (std::size_t col = 0; col < ns; ++col)
      a_std[k * ns + col] = c.coefficients[std_cols[col].var] * std_cols[col].sign;
    b[k] = c.rhs - shift;
    rel[k] = c.relation;
  }
  for (std::size_t k = 0; k < bound_rows.size(); ++k) {
    const std::size_t r = spec.constraints.size() + k;
    a_std[r * ns + bound_rows[k].col] = 1.0;
    b[r] = bound_rows[k].width;
    rel[r] = Relation::LessEqual;
  }
  std::vector<double> row_sign(m, 1.0);
  for (std::size_t r = 0; r < m; ++r) {
    if (b[r] < 0) {
      row_sign[r] = -1.0;
      b[r] = -b[r];
      for (std::size_t col = 0; col < ns; ++col) a_std[r * ns + col] = -a_std[r * ns + col];
      if (rel[r] == Relation::LessEqual)
        rel[r] = Relation::GreaterEqual;
      else if (rel[r] == Relation::GreaterEqual)
        rel[r] = Relation::LessEqual;
    }
  }

  std::size_t n_slack = 0;
  std::size_t n_art = 0;
  for (Relation r : rel) {
    if (r != Relation::Equal) ++n_slack;
    if (r != Relation::LessEqual) ++n_art;
  }
  const std::size_t width = ns + n_slack + n_art;
  std::vector<double> full(m * width, 0.0);
  std::vector<ColumnKind> kind(width, ColumnKind::Structural);
  std::vector<std::size_t> basis(m, 0);
  std::size_t next_slack = ns;
  std::size_t next_art = ns + n_slack;
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t col = 0; col < ns; ++col) full[r * width + col] = a_std[r * ns + col];
    if (rel[r] == Relation::LessEqual) {
      full[r * width + next_slack] = 1.0;
      kind[next_slack] = ColumnKind::Slack;
      basis[r] = next_slack++;
    } else {
      if (rel[r] == Relation::GreaterEqual) {
        full[r * width + next_slack] = -1.0;
        kind[next_slack] = ColumnKind::Slack;
        ++next_slack;
      }
      full[r * width + next_art] = 1.0;
      kind[next_art] = ColumnKind::Artificial;
      basis[r] = next_art++;
    }
  }

  SimplexState s{Tableau(full, b, m, width), basis, std::vector<bool>(m, true), kind, m, width};
  LpSolution out;
  out.dual.assign(spec.constraints.size(), 0.0);

  double b_scale = 1.0;
  for (double v : b) b_scale = std::max(b_scale, std::fabs(v));

  if (n_art > 0) {
    std::vector<double> phase1(width, 0.0);
    for (std::size_t j = 0; j < width; ++j)
      if (kind[j] == ColumnKind::Artificial) phase1[j] = -1.0;
    if (run_phase(s, phase1, true) == PhaseResult::IterationLimit) {
      out.iterations = s.iterations;
      return out;
    }
    double infeasibility = 0.0;
    for (std::size_t r = 0; r < m; ++r)
      if (kind[s.basis[r]] == ColumnKind::Artificial) infeasibility += std::fabs(s.tab.rhs(r));
    if (infeasibility > 1e-9 * b_scale) {
      out.status = LpStatus::Infeasible;
      out.iterations = s.iterations;
      return out;
    }
    for (std::size_t r = 0; r < m; ++r) {
      if (kind[s.basis[r]] != ColumnKind::Artificial) continue;
      std::optional<std::size_t> col;
      double best = kPivotTol;
      for (std::size_t j = 0; j < width; ++j) {
        if (kind[j] == ColumnKind::Artificial) continue;
        if (std::fabs(s.tab.at(r, j)) > best) {
          best = std::fabs(s.tab.at(r, j));
          col = j;
        }
      }
      if (col) {
        s.tab.pivot(r, *col);
        s.basis[r] = *col;
      } else {
        s.active[r] = false;
      }
    }
  }

  std::vector<double> cost(width, 0.0);
  double constant = 0.0;
  for (std::size_t j = 0; j < n; ++j) constant += spec.objective[j] * offset[j];
  for (std::size_t col = 0; col < ns; ++col) cost[col] = spec.objective[std_cols[col].var] * std_cols[col].sign;
  const PhaseResult phase2 = run_phase(s, cost, false);
  out.iterations = s.iterations;
  if (phase2 == PhaseResult::IterationLimit) return out;
  if (phase2 == PhaseResult::Unbounded) {
    out.status = LpStatus::Unbounded;
    return out;
  }

  // Re-solve the optimal basis directly for accuracy, then price it.
  std::vector<std::size_t> rows_in;
  for (std::size_t r = 0; r < m; ++r)
    if (s.active[r]) rows_in.push_back(r);
  const std::size_t k = rows_in.size();
  std::vector<double> bmat(k * k, 0.0);
  std::vector<double> bt(k * k, 0.0);
  std::vector<double> rhs_in(k, 0.0);
  std::vector<double> cost_b(k, 0.0);
  for (std::size_t p = 0; p < k; ++p) {
    rhs_in[p] = b[rows_in[p]];
    cost_b[p] = cost[s.basis[rows_in[p]]];
    for (std::size_t q = 0; q < k; ++q) {
      const double v = full[rows_in[p] * width + s.basis[rows_in[q]]];
      bmat[p * k + q] = v;
      bt[q * k + p] = v;
    }
  }
  auto xb = solve_dense(bmat, rhs_in, k);
  auto yb = solve_dense(bt, cost_b, k);
  if (!xb || !yb) return out;

  std::vector<double> xs(width, 0.0);
  for (std::size_t q = 0; q < k; ++q) {
    double v = (*xb)[q];
    if (v < 0) {
      if (v < -1e-9 * b_scale) return out;
      v = 0.0;
    }
    xs[s.basis[rows_in[q]]] = v;
  }
  std::vector<double> y(m, 0.0);
  for (std::size_t p = 0; p < k; ++p) y[rows_in[p]] = (*yb)[p];

  double cost_scale = 1.0;
  for (double c : cost) cost_scale = std::max(cost_scale, std::fabs(c));
  for (std::size_t j = 0; j < width; ++j) {
    if (kind[j] == ColumnKind::Artificial) continue;
    double d = cost[j];
    for (std::size_t r = 0; r < m; ++r) d -= y[r] * full[r * width + j];
    if (d > 1e-7 * cost_scale) return out;
  }

  out.point.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) out.point[j] = offset[j];
  for (std::size_t col = 0; col < ns; ++col) out.point[std_cols[col].var] += std_cols[col].sign * xs[col];
  out.value = 0.0;
  for (std::size_t j = 0; j < n; ++j) out.value += spec.objective[j] * out.point[j];
  out.dual_value = constant;
  for (std::size_t r = 0; r < m; ++r) out.dual_value += y[r] * b[r];
  for (std::size_t kk = 0; kk < spec.constraints.size(); ++kk) out.dual[kk] = row_sign[kk] * y[kk];

  for (const auto& c : spec.constraints) {
    double lhs = 0.0;
    for (std::size_t j = 0; j < n; ++j) lhs += c.coefficients[j] * out.point[j];
    const double tol = 1e-8 * std::max(1.0, std::fabs(c.rhs));
    const bool ok = (c.relation == Relation::LessEqual && lhs <= c.rhs + tol) ||
                    (c.relation == Relation::GreaterEqual && lhs >= c.rhs - tol) ||
                    (c.relation == Relation::Equal && std::fabs(lhs - c.rhs) <= tol);
    if (!ok) return out;
  }
  if (std::fabs(out.value - out.dual_value) > 1e-7 * std::max(1.0, std::fabs(out.value))) return out;
  out.status = LpStatus::Optimal;
  return out;
}

}  // namespace manna
