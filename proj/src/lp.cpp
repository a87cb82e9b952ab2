#include "fairmatch/lp.hpp"

#include <stdexcept>

namespace fairmatch {

void LinearProgram::add(std::vector<Prob> coef, Relation rel, Prob rhs) {
  if (static_cast<int>(coef.size()) != num_vars) throw std::invalid_argument("lp: constraint width mismatch");
  constraints.push_back(LinearConstraint{std::move(coef), rel, std::move(rhs)});
}

namespace {

struct Tableau {
  std::vector<std::vector<Prob>> rows;  // each row: columns..., rhs
  std::vector<int> basis;
  std::vector<Prob> reduced;            // reduced costs, last entry is -value
  int cols = 0;

  void pivot(int p, int e) {
    Prob piv = rows[p][e];
    for (auto& v : rows[p]) v /= piv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (static_cast<int>(i) == p || rows[i][e] == 0) continue;
      Prob f = rows[i][e];
      for (int j = 0; j <= cols; ++j) {
        if (rows[p][j] != 0) rows[i][j] -= f * rows[p][j];
      }
    }
    if (reduced[e] != 0) {
      Prob f = reduced[e];
      for (int j = 0; j <= cols; ++j) {
        if (rows[p][j] != 0) reduced[j] -= f * rows[p][j];
      }
    }
    basis[p] = e;
  }

  void price(const std::vector<Prob>& cost) {
    reduced.assign(cols + 1, Prob(0));
    for (int j = 0; j < cols; ++j) reduced[j] = cost[j];
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const Prob& cb = cost[basis[i]];
      if (cb == 0) continue;
      for (int j = 0; j <= cols; ++j) {
        if (rows[i][j] != 0) reduced[j] -= cb * rows[i][j];
      }
    }
  }

  // Returns false when unbounded. `allowed` limits entering columns.
  bool optimize(const std::vector<bool>& allowed) {
    while (true) {
      int e = -1;
      for (int j = 0; j < cols; ++j) {
        if (allowed[j] && reduced[j] > 0) {
          e = j;
          break;
        }
      }
      if (e < 0) return true;
      int p = -1;
      Prob best;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i][e] <= 0) continue;
        Prob ratio = rows[i][cols] / rows[i][e];
        if (p < 0 || ratio < best || (ratio == best && basis[i] < basis[p])) {
          p = static_cast<int>(i);
          best = ratio;
        }
      }
      if (p < 0) return false;
      pivot(p, e);
    }
  }

  Prob value() const { return -reduced[cols]; }
};

}  // namespace

LpResult solve_lp(const LinearProgram& lp) {
  const int n = lp.num_vars;
  const int m = static_cast<int>(lp.constraints.size());
  int slack_count = 0, art_count = 0;
  for (const auto& c : lp.constraints) {
    bool flip = c.rhs < 0;
    Relation rel = c.rel;
    if (flip && rel != Relation::Equal) rel = rel == Relation::LessEq ? Relation::GreaterEq : Relation::LessEq;
    if (rel != Relation::Equal) ++slack_count;
    if (rel != Relation::LessEq) ++art_count;
  }
  const int art_start = n + slack_count;
  Tableau t;
  t.cols = n + slack_count + art_count;
  t.rows.assign(m, std::vector<Prob>(t.cols + 1, Prob(0)));
  t.basis.assign(m, -1);
  int next_slack = n, next_art = art_start;
  for (int i = 0; i < m; ++i) {
    const auto& c = lp.constraints[i];
    bool flip = c.rhs < 0;
    Relation rel = c.rel;
    if (flip && rel != Relation::Equal) rel = rel == Relation::LessEq ? Relation::GreaterEq : Relation::LessEq;
    for (int j = 0; j < n; ++j) t.rows[i][j] = flip ? Prob(-c.coef[j]) : c.coef[j];
    t.rows[i][t.cols] = flip ? Prob(-c.rhs) : c.rhs;
    if (rel == Relation::LessEq) {
      t.rows[i][next_slack] = 1;
      t.basis[i] = next_slack++;
    } else if (rel == Relation::GreaterEq) {
      t.rows[i][next_slack++] = -1;
      t.rows[i][next_art] = 1;
      t.basis[i] = next_art++;
    } else {
      t.rows[i][next_art] = 1;
      t.basis[i] = next_art++;
    }
  }

  LpResult result;
  if (art_count > 0) {
    std::vector<Prob> cost1(t.cols, Prob(0));
    for (int j = art_start; j < t.cols; ++j) cost1[j] = -1;
    t.price(cost1);
    t.optimize(std::vector<bool>(t.cols, true));
    if (t.value() < 0) {
      result.status = LpStatus::Infeasible;
      return result;
    }
    // Drive remaining artificials out of the basis; drop redundant rows.
    for (int i = 0; i < static_cast<int>(t.rows.size());) {
      if (t.basis[i] < art_start) {
        ++i;
        continue;
      }
      int e = -1;
      for (int j = 0; j < art_start; ++j) {
        if (t.rows[i][j] != 0) {
          e = j;
          break;
        }
      }
      if (e >= 0) {
        t.pivot(i, e);
        ++i;
      } else {
        t.rows.erase(t.rows.begin() + i);
        t.basis.erase(t.basis.begin() + i);
      }
    }
  }
  std::vector<Prob> cost2(t.cols, Prob(0));
  for (int j = 0; j < n; ++j) cost2[j] = lp.objective[j];
  t.price(cost2);
  std::vector<bool> allowed(t.cols, false);
  for (int j = 0; j < art_start; ++j) allowed[j] = true;
  if (!t.optimize(allowed)) {
    result.status = LpStatus::Unbounded;
    return result;
  }
  result.status = LpStatus::Optimal;
  result.value = t.value();
  result.x.assign(n, Prob(0));
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (t.basis[i] < n) result.x[t.basis[i]] = t.rows[i][t.cols];
  }
  return result;
}

}  // namespace fairmatch
