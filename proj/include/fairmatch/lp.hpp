#pragma once

#include "fairmatch/rational.hpp"

#include <vector>

namespace fairmatch {

enum class Relation { LessEq, Equal, GreaterEq };

struct LinearConstraint {
  std::vector<Prob> coef;
  Relation rel;
  Prob rhs;
};

/// maximize objective . x  subject to constraints, x >= 0.
struct LinearProgram {
  int num_vars = 0;
  std::vector<Prob> objective;
  std::vector<LinearConstraint> constraints;

  explicit LinearProgram(int vars = 0) : num_vars(vars), objective(vars, Prob(0)) {}
  void add(std::vector<Prob> coef, Relation rel, Prob rhs);
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Prob value;
  std::vector<Prob> x;
};

/// Two-phase dense tableau simplex in exact arithmetic with Bland's rule.
LpResult solve_lp(const LinearProgram& lp);

}  // namespace fairmatch
