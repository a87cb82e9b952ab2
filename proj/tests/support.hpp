#pragma once

// Independent oracles and generators shared by the unit tests and the acceptance binary.

#include "fairmatch/core.hpp"
#include "fairmatch/lp.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

namespace fairmatch::testing {

inline Prob q(long a, long b = 1) { return Prob(a) / b; }

inline Ranking random_ranking(int n, std::mt19937_64& rng) {
  Ranking r(n);
  std::iota(r.begin(), r.end(), 0);
  std::shuffle(r.begin(), r.end(), rng);
  return r;
}

/// Cluster sizes of one or two, which keeps hospital profile spaces under the default enumeration cap.
inline std::vector<int> small_cluster_sizes(int n, std::mt19937_64& rng) {
  std::vector<int> sizes;
  for (int left = n; left > 0;) {
    int take = std::min(left, std::uniform_int_distribution<int>(1, 2)(rng));
    sizes.push_back(take);
    left -= take;
  }
  return sizes;
}

/// Sub-stochastic row with denominators dividing `den`.
inline std::vector<Prob> random_subdistribution(int n, std::mt19937_64& rng, long den = 12) {
  std::vector<Prob> row(n, Prob(0));
  long left = std::uniform_int_distribution<long>(0, den)(rng);
  for (int k = 0; k < n && left > 0; ++k) {
    long take = std::uniform_int_distribution<long>(0, left)(rng);
    row[k] = Prob(take) / den;
    left -= take;
  }
  std::shuffle(row.begin(), row.end(), rng);
  return row;
}

/// Convex combination of random permutation matrices with random rational weights.
inline AllocationMatrix random_doubly_stochastic(int n, std::mt19937_64& rng) {
  int parts = std::uniform_int_distribution<int>(1, 2 * n)(rng);
  std::vector<long> raw(parts);
  long total = 0;
  for (auto& w : raw) total += w = std::uniform_int_distribution<long>(1, 9)(rng);
  AllocationMatrix P(n, std::vector<Prob>(n, Prob(0)));
  for (int p = 0; p < parts; ++p) {
    Ranking perm = random_ranking(n, rng);
    for (int i = 0; i < n; ++i) P[i][perm[i]] += Prob(raw[p]) / total;
  }
  return P;
}

/// min TV(q', q) over prospects q' (residual as the last outcome) that p weakly dominates under r.
inline Prob lp_piif_deficit(const std::vector<Prob>& p, const std::vector<Prob>& q, const Ranking& r) {
  const int n = static_cast<int>(r.size());
  const int m = n + 1;  // outcomes in rank order, residual last
  std::vector<Prob> qo(m, Prob(0));
  for (int k = 0; k < n; ++k) qo[k] = q[r[k]];
  qo[n] = Prob(1) - std::accumulate(q.begin(), q.end(), Prob(0));
  // Variables: x[0..m) deformed prospect, t[0..m) absolute deviations.
  LinearProgram lp(2 * m);
  for (int o = 0; o < m; ++o) lp.objective[m + o] = Prob(-1, 2);
  std::vector<Prob> total(2 * m, Prob(0));
  for (int o = 0; o < m; ++o) total[o] = 1;
  lp.add(total, Relation::Equal, Prob(1));
  for (int o = 0; o < m; ++o) {
    std::vector<Prob> up(2 * m, Prob(0)), down(2 * m, Prob(0));
    up[o] = 1;
    up[m + o] = -1;
    down[o] = -1;
    down[m + o] = -1;
    lp.add(up, Relation::LessEq, qo[o]);
    lp.add(down, Relation::LessEq, -qo[o]);
  }
  Prob prefix_p = 0;
  for (int k = 0; k < n; ++k) {
    prefix_p += p[r[k]];
    std::vector<Prob> c(2 * m, Prob(0));
    for (int o = 0; o <= k; ++o) c[o] = 1;
    lp.add(c, Relation::LessEq, prefix_p);
  }
  LpResult res = solve_lp(lp);
  return -res.value;
}

inline bool rows_equal_within_clusters(const AllocationMatrix& P, const Metric& metric) {
  for (const auto& c : metric.clusters()) {
    for (int d : c) {
      if (P[d] != P[c.front()]) return false;
    }
  }
  return true;
}

/// Brute-force classical stability of a deterministic matching.
inline bool classically_stable(const Matching& m, const std::vector<Ranking>& doctor_prefs,
                               const std::vector<Ranking>& hospital_orders) {
  const int n = static_cast<int>(m.size());
  std::vector<int> holder(n, -1);
  for (int d = 0; d < n; ++d) holder[m[d]] = d;
  auto pos = [](const Ranking& r, int x) { return static_cast<int>(std::find(r.begin(), r.end(), x) - r.begin()); };
  for (int d = 0; d < n; ++d) {
    for (int h = 0; h < n; ++h) {
      if (pos(doctor_prefs[d], h) < pos(doctor_prefs[d], m[d]) &&
          pos(hospital_orders[h], d) < pos(hospital_orders[h], holder[h])) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace fairmatch::testing
