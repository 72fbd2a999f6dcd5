#pragma once

#include <vector>

namespace lobound::lp {

inline constexpr double kPivotTol = 1e-9;

enum class Relation { kLessEqual, kEqual, kGreaterEqual };

/// maximize c^T x  subject to  rows[i] . x (rel[i]) rhs[i],  x >= 0.
struct Problem {
  std::vector<double> objective;
  std::vector<std::vector<double>> rows;
  std::vector<Relation> relations;
  std::vector<double> rhs;

  void add_row(std::vector<double> row, Relation rel, double b) {
    rows.push_back(std::move(row));
    relations.push_back(rel);
    rhs.push_back(b);
  }
};

/// kNumericalFailure: the final point violates a constraint beyond rounding level.
enum class Status { kOptimal, kInfeasible, kUnbounded, kIterationLimit, kNumericalFailure };

struct Solution {
  Status status = Status::kInfeasible;
  double value = 0.0;
  std::vector<double> x;
};

/// Dense two-phase tableau simplex. Dantzig pricing, switching to Bland's
/// rule after a run of degenerate pivots. `tol` applies to reduced costs;
/// pivot elements below kPivotTol times the column scale are never used.
Solution maximize(const Problem& problem, double tol = 1e-11);

}  // namespace lobound::lp
