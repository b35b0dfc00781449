#include "desgrid/shed/simplex.hpp"

#include <cmath>
#include <limits>

#include "desgrid/error.hpp"

namespace desgrid::shed {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-9;

class Tableau {
 public:
  Tableau(std::size_t m, std::size_t cols) : m_(m), cols_(cols), t_((m + 1) * (cols + 1), 0.0) {}

  double& at(std::size_t r, std::size_t c) { return t_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols_); }
  double& obj(std::size_t c) { return at(m_, c); }

  void pivot(std::size_t pr, std::size_t pc) {
    double p = at(pr, pc);
    for (std::size_t c = 0; c <= cols_; ++c) at(pr, c) /= p;
    for (std::size_t r = 0; r <= m_; ++r) {
      if (r == pr) continue;
      double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= cols_; ++c) at(r, c) -= f * at(pr, c);
      at(r, pc) = 0.0;
    }
    basis[pr] = pc;
  }

  // Minimizes the objective row over the allowed columns. Returns false when
  // unbounded.
  bool optimize(const std::vector<bool>& allowed) {
    std::size_t degenerate = 0;
    const std::size_t cap = 200 * (m_ + cols_) + 1000;
    for (std::size_t iter = 0; iter < cap; ++iter) {
      bool bland = degenerate > 50;
      std::size_t pc = cols_;
      double best = -kCostTol;
      for (std::size_t c = 0; c < cols_; ++c) {
        if (!allowed[c]) continue;
        double rc = obj(c);
        if (rc < best) {
          pc = c;
          best = rc;
          if (bland) break;
        }
      }
      if (pc == cols_) return true;
      std::size_t pr = m_;
      double ratio = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < m_; ++r) {
        double a = at(r, pc);
        if (a <= kPivotTol) continue;
        double q = rhs(r) / a;
        if (q < ratio - 1e-12 || (std::abs(q - ratio) <= 1e-12 && basis[r] < basis[pr])) {
          ratio = q;
          pr = r;
        }
      }
      if (pr == m_) return false;
      degenerate = ratio <= 1e-12 ? degenerate + 1 : 0;
      pivot(pr, pc);
    }
    throw Error("simplex iteration limit reached");
  }

  std::vector<std::size_t> basis;

 private:
  std::size_t m_, cols_;
  std::vector<double> t_;
};

}  // namespace

LpResult solve_min(const LinearProgram& lp) {
  const std::size_t n = lp.cost.size();
  if (lp.rows.size() != lp.rhs.size() || lp.upper.size() != n)
    throw Error("linear program dimensions disagree");
  for (const auto& row : lp.rows)
    if (row.size() != n) throw Error("linear program row has wrong width");

  // Constraint rows followed by the upper bounds as rows.
  std::vector<const std::vector<double>*> a;
  std::vector<double> b;
  std::vector<std::vector<double>> bound_rows;
  bound_rows.reserve(n);
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    a.push_back(&lp.rows[i]);
    b.push_back(lp.rhs[i]);
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(lp.upper[j])) continue;
    if (lp.upper[j] < 0) return {LpStatus::Infeasible, {}, 0.0};
    bound_rows.emplace_back(n, 0.0);
    bound_rows.back()[j] = 1.0;
    a.push_back(&bound_rows.back());
    b.push_back(lp.upper[j]);
  }
  const std::size_t m = a.size();
  std::size_t n_art = 0;
  for (double v : b)
    if (v < 0) ++n_art;
  const std::size_t cols = n + m + n_art;
  Tableau t(m, cols);
  t.basis.assign(m, 0);

  std::size_t art = n + m;
  std::vector<bool> is_art(cols, false);
  for (std::size_t i = 0; i < m; ++i) {
    double sign = b[i] < 0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) t.at(i, j) = sign * (*a[i])[j];
    t.at(i, n + i) = sign;
    t.rhs(i) = sign * b[i];
    if (b[i] < 0) {
      t.at(i, art) = 1.0;
      is_art[art] = true;
      t.basis[i] = art++;
    } else {
      t.basis[i] = n + i;
    }
  }

  std::vector<bool> allowed(cols, true);
  if (n_art > 0) {
    // Phase one: minimize the sum of artificials.
    for (std::size_t c = 0; c <= cols; ++c) t.obj(c) = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      if (is_art[t.basis[i]])
        for (std::size_t c = 0; c <= cols; ++c)
          if (!is_art[c] || c == cols) t.obj(c) -= t.at(i, c);
    t.optimize(allowed);
    if (-t.obj(cols) > 1e-7 * std::max(1.0, std::abs(t.obj(cols)))) return {LpStatus::Infeasible, {}, 0.0};
    // Drive remaining zero-level artificials out of the basis.
    for (std::size_t i = 0; i < m; ++i) {
      if (!is_art[t.basis[i]]) continue;
      for (std::size_t c = 0; c < n + m; ++c)
        if (std::abs(t.at(i, c)) > kPivotTol) {
          t.pivot(i, c);
          break;
        }
    }
    for (std::size_t c = 0; c < cols; ++c)
      if (is_art[c]) allowed[c] = false;
  }

  // Phase two: reduced costs of the real objective.
  for (std::size_t c = 0; c <= cols; ++c) t.obj(c) = c < n ? lp.cost[c] : 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t bc = t.basis[i];
    if (bc >= n || is_art[bc]) continue;
    double f = t.obj(bc);
    if (f == 0.0) continue;
    for (std::size_t c = 0; c <= cols; ++c) t.obj(c) -= f * t.at(i, c);
  }
  if (!t.optimize(allowed)) return {LpStatus::Unbounded, {}, 0.0};

  LpResult r;
  r.status = LpStatus::Optimal;
  r.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    if (t.basis[i] < n) r.x[t.basis[i]] = std::max(0.0, t.rhs(i));
  for (std::size_t j = 0; j < n; ++j) {
    r.x[j] = std::min(r.x[j], lp.upper[j]);
    r.objective += lp.cost[j] * r.x[j];
  }
  return r;
}

}  // namespace desgrid::shed
