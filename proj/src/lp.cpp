#include "lobound/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lobound/errors.hpp"

namespace lobound::lp {

namespace {

constexpr int kDegenerateStreakForBland = 30;

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : m_(rows), n_(cols), t_((rows + 1) * (cols + 1), 0.0) {}

  double& at(std::size_t r, std::size_t c) { return t_[r * (n_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return t_[r * (n_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, n_); }
  // Row m_ holds reduced costs (entering when negative) and -objective in the rhs slot.
  double& cost(std::size_t c) { return at(m_, c); }

  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }

  void pivot(std::size_t pr, std::size_t pc) {
    const double inv = 1.0 / at(pr, pc);
    for (std::size_t c = 0; c <= n_; ++c) at(pr, c) *= inv;
    at(pr, pc) = 1.0;
    for (std::size_t r = 0; r <= m_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= n_; ++c) at(r, c) -= f * at(pr, c);
      at(r, pc) = 0.0;
    }
  }

 private:
  std::size_t m_, n_;
  std::vector<double> t_;
};

// Runs simplex iterations on columns [0, usable). Returns kOptimal or kUnbounded
// or kIterationLimit.
Status iterate(Tableau& tab, std::vector<std::size_t>& basis, std::size_t usable, double tol) {
  const std::size_t m = tab.rows();
  const int max_iter = 50 * static_cast<int>(m + usable) + 1000;
  int degenerate = 0;
  for (int iter = 0; iter < max_iter; ++iter) {
    const bool bland = degenerate >= kDegenerateStreakForBland;
    std::size_t enter = usable;
    double best = -tol;
    for (std::size_t c = 0; c < usable; ++c) {
      const double rc = tab.cost(c);
      if (rc < best) {
        enter = c;
        if (bland) break;
        best = rc;
      }
    }
    if (enter == usable) return Status::kOptimal;

    double colmax = 1.0;
    for (std::size_t r = 0; r < m; ++r) colmax = std::max(colmax, std::abs(tab.at(r, enter)));
    const double piv_tol = kPivotTol * colmax;
    std::size_t leave = m;
    double ratio = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < m; ++r) {
      const double a = tab.at(r, enter);
      if (a <= piv_tol) continue;
      const double q = tab.rhs(r) / a;
      bool take = q < ratio - 1e-15;
      if (!take && leave < m && q <= ratio + 1e-15)
        take = bland ? basis[r] < basis[leave] : a > tab.at(leave, enter);
      if (take) {
        ratio = q;
        leave = r;
      }
    }
    if (leave == m) return Status::kUnbounded;
    degenerate = (ratio <= tol) ? degenerate + 1 : 0;
    tab.pivot(leave, enter);
    basis[leave] = enter;
  }
  return Status::kIterationLimit;
}

}  // namespace

Solution maximize(const Problem& problem, double tol) {
  const std::size_t nvar = problem.objective.size();
  const std::size_t m = problem.rows.size();
  if (problem.relations.size() != m || problem.rhs.size() != m)
    throw InputError("lp::maximize: rows, relations and rhs differ in length");
  for (const auto& row : problem.rows)
    if (row.size() != nvar) throw InputError("lp::maximize: row length differs from objective length");

  // Flip rows so that every rhs is non-negative.
  std::vector<std::vector<double>> rows = problem.rows;
  std::vector<Relation> rel = problem.relations;
  std::vector<double> b = problem.rhs;
  for (std::size_t i = 0; i < m; ++i) {
    if (b[i] < 0.0) {
      for (double& v : rows[i]) v = -v;
      b[i] = -b[i];
      if (rel[i] == Relation::kLessEqual)
        rel[i] = Relation::kGreaterEqual;
      else if (rel[i] == Relation::kGreaterEqual)
        rel[i] = Relation::kLessEqual;
    }
  }

  std::size_t nslack = 0, nart = 0;
  for (Relation r : rel) {
    if (r != Relation::kEqual) ++nslack;
    if (r != Relation::kLessEqual) ++nart;
  }
  const std::size_t art0 = nvar + nslack;
  const std::size_t ncols = art0 + nart;

  Tableau tab(m, ncols);
  std::vector<std::size_t> basis(m);
  std::size_t slack = nvar, art = art0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < nvar; ++j) tab.at(i, j) = rows[i][j];
    tab.rhs(i) = b[i];
    if (rel[i] == Relation::kLessEqual) {
      tab.at(i, slack) = 1.0;
      basis[i] = slack++;
    } else {
      if (rel[i] == Relation::kGreaterEqual) tab.at(i, slack++) = -1.0;
      tab.at(i, art) = 1.0;
      basis[i] = art++;
    }
  }

  Solution sol;
  if (nart > 0) {
    // Phase 1: maximise -sum(artificials).
    for (std::size_t i = 0; i < m; ++i) {
      if (basis[i] < art0) continue;
      for (std::size_t c = 0; c <= ncols; ++c) tab.at(m, c) -= tab.at(i, c);
    }
    for (std::size_t c = art0; c < ncols; ++c) tab.cost(c) = 0.0;
    const Status s1 = iterate(tab, basis, ncols, tol);
    if (s1 == Status::kIterationLimit) {
      sol.status = s1;
      return sol;
    }
    double scale = 1.0;
    for (double v : b) scale = std::max(scale, std::abs(v));
    if (-tab.rhs(m) > 1e3 * tol * scale) {
      sol.status = Status::kInfeasible;
      return sol;
    }
    // Drive zero-level artificials out of the basis where possible.
    for (std::size_t i = 0; i < m; ++i) {
      if (basis[i] < art0) continue;
      std::size_t col = art0;
      double best = kPivotTol;
      for (std::size_t c = 0; c < art0; ++c) {
        if (std::abs(tab.at(i, c)) > best) {
          best = std::abs(tab.at(i, c));
          col = c;
        }
      }
      if (col < art0) {
        tab.pivot(i, col);
        basis[i] = col;
      }
      // Otherwise the row is redundant; the artificial stays basic at zero and
      // its column is excluded from phase 2 pricing.
    }
  }

  // Phase 2 cost row: -c for structural columns, then price out the basis.
  for (std::size_t c = 0; c <= ncols; ++c) tab.cost(c) = 0.0;
  for (std::size_t j = 0; j < nvar; ++j) tab.cost(j) = -problem.objective[j];
  for (std::size_t i = 0; i < m; ++i) {
    const double f = tab.cost(basis[i]);
    if (f == 0.0) continue;
    for (std::size_t c = 0; c <= ncols; ++c) tab.at(m, c) -= f * tab.at(i, c);
  }
  const Status s2 = iterate(tab, basis, art0, tol);
  sol.status = s2;
  if (s2 != Status::kOptimal) return sol;

  sol.x.assign(nvar, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < nvar) sol.x[basis[i]] = tab.rhs(i);
  sol.value = 0.0;
  for (std::size_t j = 0; j < nvar; ++j) sol.value += problem.objective[j] * sol.x[j];

  for (std::size_t i = 0; i < m; ++i) {
    double lhs = 0.0, mag = std::abs(problem.rhs[i]);
    for (std::size_t j = 0; j < nvar; ++j) {
      lhs += problem.rows[i][j] * sol.x[j];
      mag += std::abs(problem.rows[i][j] * sol.x[j]);
    }
    double viol = lhs - problem.rhs[i];
    if (problem.relations[i] == Relation::kEqual) viol = std::abs(viol);
    else if (problem.relations[i] == Relation::kGreaterEqual) viol = -viol;
    if (viol > 1e-7 * (1.0 + mag)) {
      sol.status = Status::kNumericalFailure;
      break;
    }
  }
  return sol;
}

}  // namespace lobound::lp
