#include "fairmatch/mechanisms.hpp"

#include "fairmatch/fairness.hpp"
#include "fairmatch/stability.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>

namespace fairmatch {

Matching gale_shapley(const std::vector<Ranking>& doctor_prefs, const std::vector<Ranking>& hospital_orders,
                      ProposingSide side) {
  const int n = static_cast<int>(doctor_prefs.size());
  const auto& proposer_prefs = side == ProposingSide::Doctors ? doctor_prefs : hospital_orders;
  const auto& acceptor_prefs = side == ProposingSide::Doctors ? hospital_orders : doctor_prefs;
  std::vector<std::vector<int>> acceptor_rank(n);
  for (int a = 0; a < n; ++a) acceptor_rank[a] = inverse_ranking(acceptor_prefs[a]);
  std::vector<int> next(n, 0), partner_of_proposer(n, -1), held_by(n, -1);
  while (true) {
    int p = 0;
    while (p < n && partner_of_proposer[p] != -1) ++p;
    if (p == n) break;
    int a = proposer_prefs[p][next[p]++];
    int current = held_by[a];
    if (current == -1) {
      held_by[a] = p;
      partner_of_proposer[p] = a;
    } else if (acceptor_rank[a][p] < acceptor_rank[a][current]) {
      held_by[a] = p;
      partner_of_proposer[p] = a;
      partner_of_proposer[current] = -1;
    }
  }
  if (side == ProposingSide::Doctors) return partner_of_proposer;
  return held_by;  // held_by[doctor] = hospital
}

MatchingDistribution compose_sample_gs(const Instance& inst, ProposingSide side, const EnumLimits& limits) {
  MatchingDistribution md;
  for (const auto& profile : enumerate_profiles(inst, limits)) {
    md.parts.push_back(WeightedMatching{profile.weight, gale_shapley(inst.doctor_prefs, profile.orders, side)});
  }
  md.normalize();
  return md;
}

std::vector<Prospect> psp(const std::vector<int>& cluster_doctors, const std::vector<Prob>& proposed,
                          const std::vector<Ranking>& doctor_prefs) {
  const int n = static_cast<int>(proposed.size());
  const int m = static_cast<int>(cluster_doctors.size());
  std::vector<Prospect> out(m, Prospect{Side::Hospitals, std::vector<Prob>(n, Prob(0))});
  std::vector<Prob> left = proposed;
  std::vector<std::size_t> cursor(m, 0);
  Prob t = 0;
  while (t < 1) {
    std::vector<int> eating(m, -1);
    std::vector<int> eaters(n, 0);
    for (int a = 0; a < m; ++a) {
      const Ranking& r = doctor_prefs[cluster_doctors[a]];
      while (cursor[a] < r.size() && left[r[cursor[a]]] <= 0) ++cursor[a];
      if (cursor[a] < r.size()) {
        eating[a] = r[cursor[a]];
        ++eaters[eating[a]];
      }
    }
    Prob dt = Prob(1) - t;
    bool any = false;
    for (int h = 0; h < n; ++h) {
      if (eaters[h] == 0) continue;
      any = true;
      Prob until = left[h] / eaters[h];
      if (until < dt) dt = until;
    }
    if (!any) break;
    for (int a = 0; a < m; ++a) {
      if (eating[a] < 0) continue;
      out[a].mass[eating[a]] += dt;
      left[eating[a]] -= dt;
    }
    t += dt;
  }
  return out;
}

Prospect rising_tide(const std::vector<Prob>& proposed, const Partition& clusters_best_first) {
  const int n = static_cast<int>(proposed.size());
  Prospect out{Side::Doctors, std::vector<Prob>(n, Prob(0))};
  std::vector<Prob> cap = proposed;
  Prob p = 1;
  std::size_t c = 0;
  while (p > 0 && c < clusters_best_first.size()) {
    const auto& cluster = clusters_best_first[c];
    int active = 0;
    Prob smallest = 0;
    for (int d : cluster) {
      if (cap[d] > 0) {
        if (active == 0 || cap[d] < smallest) smallest = cap[d];
        ++active;
      }
    }
    if (active == 0) {
      ++c;
      continue;
    }
    Prob x = min_of(p / active, smallest);
    for (int d : cluster) {
      if (cap[d] > 0) {
        cap[d] -= x;
        out.mass[d] += x;
      }
    }
    p -= x * active;
  }
  return out;
}

std::vector<int> strict_cluster_order(const HospitalPrefModel& model, const Metric& metric) {
  if (!metric.is_proto()) throw std::invalid_argument("strict cluster order requires a proto-metric");
  std::vector<int> order;
  switch (model.kind()) {
    case HospitalPrefModel::Kind::StrictIF:
      for (int c : model.cluster_order()) order.push_back(metric.cluster_of(model.clusters()[c].front()));
      break;
    case HospitalPrefModel::Kind::Deterministic:
    case HospitalPrefModel::Kind::Explicit: {
      if (!validate_strict_if(model, metric)) throw std::invalid_argument("hospital preferences are not strict-IF");
      const Ranking& r = model.kind() == HospitalPrefModel::Kind::Deterministic ? model.order()
                                                                                : model.support().front().order;
      for (int d : r) {
        int c = metric.cluster_of(d);
        if (order.empty() || order.back() != c) order.push_back(c);
      }
      break;
    }
  }
  std::vector<int> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  if (static_cast<std::size_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin()) != metric.clusters().size() ||
      sorted.size() != metric.clusters().size()) {
    throw std::invalid_argument("hospital preferences do not order every cluster exactly once");
  }
  return order;
}

namespace {

void check_tau(const ProposeOptions& opts) {
  if (opts.ignore_tau) {
    if (opts.max_rounds == 0) throw std::invalid_argument("ignore_tau requires a round cap");
    return;
  }
  if (opts.tau <= 0) throw std::invalid_argument("tau must be positive");
}

bool keep_going(const ProposeOptions& opts, const Prob& free_mass, std::size_t rounds, RoundTrace& trace) {
  if (opts.max_rounds != 0 && rounds >= opts.max_rounds) {
    if (free_mass > (opts.ignore_tau ? Prob(0) : opts.tau)) trace.capped = true;
    return false;
  }
  return opts.ignore_tau ? free_mass > 0 : free_mass > opts.tau;
}

MechanismResult finish(AllocationMatrix P, RoundTrace trace) {
  MechanismResult res;
  res.dist = bvn_decompose(P);
  res.matrix = std::move(P);
  res.trace = std::move(trace);
  return res;
}

}  // namespace

MechanismResult hospitals_first(const Instance& inst, const ProposeOptions& opts) {
  check_tau(opts);
  const int n = inst.n();
  const Partition& clusters = inst.metric.clusters();
  const int nc = static_cast<int>(clusters.size());
  std::vector<std::deque<int>> lists(n);
  for (int h = 0; h < n; ++h) {
    auto order = strict_cluster_order(inst.hospital_prefs[h], inst.metric);
    lists[h].assign(order.begin(), order.end());
  }
  std::vector<Prob> free(n, Prob(1));
  std::vector<std::vector<Prob>> pc(nc, std::vector<Prob>(n, Prob(0)));
  AllocationMatrix P = zero_matrix(n);
  RoundTrace trace;
  Prob total = n;
  while (keep_going(opts, total, trace.rounds.size(), trace)) {
    RoundRecord rec;
    for (int h = 0; h < n; ++h) {
      if (free[h] <= 0) continue;
      if (lists[h].empty()) throw std::logic_error("hospital exhausted its cluster list");
      int c = lists[h].front();
      pc[c][h] += free[h];
      rec.proposals.push_back(Transfer{h, c, free[h]});
      free[h] = 0;
    }
    for (int c = 0; c < nc; ++c) {
      auto eaten = psp(clusters[c], pc[c], inst.doctor_prefs);
      std::vector<Prob> used(n, Prob(0));
      for (std::size_t a = 0; a < clusters[c].size(); ++a) {
        for (int h = 0; h < n; ++h) {
          P[clusters[c][a]][h] = eaten[a].mass[h];
          used[h] += eaten[a].mass[h];
        }
      }
      for (int h = 0; h < n; ++h) {
        Prob s = pc[c][h] - used[h];
        if (s > 0) {
          free[h] += s;
          pc[c][h] -= s;
          if (auto it = std::find(lists[h].begin(), lists[h].end(), c); it != lists[h].end()) lists[h].erase(it);
          rec.rejections.push_back(Transfer{h, c, s});
        }
      }
    }
    total = sum(free);
    rec.free_mass = total;
    rec.matrix = P;
    trace.rounds.push_back(std::move(rec));
  }
  trace.leftover = total;
  for (int h = 0; h < n; ++h) {
    while (free[h] > 0) {
      int c = 0;
      Prob load = 0;
      for (; c < nc; ++c) {
        load = sum(pc[c]);
        if (load < static_cast<long>(clusters[c].size())) break;
      }
      if (c == nc) throw std::logic_error("no under-full cluster for leftover mass");
      Prob x = min_of(free[h], Prob(static_cast<long>(clusters[c].size())) - load);
      free[h] -= x;
      pc[c][h] += x;
      for (int d : clusters[c]) P[d][h] += x / static_cast<long>(clusters[c].size());
    }
  }
  return finish(std::move(P), std::move(trace));
}

MechanismResult doctors_first(const Instance& inst, const ProposeOptions& opts) {
  check_tau(opts);
  const int n = inst.n();
  const Partition& clusters = inst.metric.clusters();
  std::vector<Partition> tide_order(n);
  for (int h = 0; h < n; ++h) {
    for (int c : strict_cluster_order(inst.hospital_prefs[h], inst.metric)) tide_order[h].push_back(clusters[c]);
  }
  std::vector<std::deque<int>> lists(n);
  for (int d = 0; d < n; ++d) lists[d].assign(inst.doctor_prefs[d].begin(), inst.doctor_prefs[d].end());
  std::vector<Prob> free(n, Prob(1));
  std::vector<std::vector<Prob>> ph(n, std::vector<Prob>(n, Prob(0)));
  AllocationMatrix P = zero_matrix(n);
  RoundTrace trace;
  trace.side = ProposingSide::Doctors;
  Prob total = n;
  while (keep_going(opts, total, trace.rounds.size(), trace)) {
    RoundRecord rec;
    for (int d = 0; d < n; ++d) {
      if (free[d] <= 0) continue;
      if (lists[d].empty()) throw std::logic_error("doctor exhausted its hospital list");
      int h = lists[d].front();
      ph[h][d] += free[d];
      rec.proposals.push_back(Transfer{d, h, free[d]});
      free[d] = 0;
    }
    for (int h = 0; h < n; ++h) {
      Prospect got = rising_tide(ph[h], tide_order[h]);
      for (int d = 0; d < n; ++d) {
        P[d][h] = got.mass[d];
        Prob s = ph[h][d] - got.mass[d];
        if (s > 0) {
          free[d] += s;
          ph[h][d] -= s;
          if (auto it = std::find(lists[d].begin(), lists[d].end(), h); it != lists[d].end()) lists[d].erase(it);
          rec.rejections.push_back(Transfer{d, h, s});
        }
      }
    }
    total = sum(free);
    rec.free_mass = total;
    rec.matrix = P;
    trace.rounds.push_back(std::move(rec));
  }
  trace.leftover = total;
  std::vector<Prob> loads(n, Prob(0));
  for (int h = 0; h < n; ++h) loads[h] = sum(ph[h]);
  return finish(allocate_free_mass(std::move(P), std::move(free), std::move(loads)), std::move(trace));
}

AllocationMatrix allocate_free_mass(AllocationMatrix P, std::vector<Prob> doctor_residuals,
                                    std::vector<Prob> hospital_loads) {
  const std::size_t n = P.size();
  if (doctor_residuals.size() != n || hospital_loads.size() != n) throw std::invalid_argument("size mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t h = 0; h < n; ++h) {
      Prob p = min_of(doctor_residuals[i], Prob(1) - hospital_loads[h]);
      if (p <= 0) continue;
      P[i][h] += p;
      doctor_residuals[i] -= p;
      hospital_loads[h] += p;
    }
  }
  return P;
}

namespace {

// Kuhn's augmenting paths over the allowed cells.
bool has_perfect_matching(const std::vector<std::vector<bool>>& allowed) {
  const int n = static_cast<int>(allowed.size());
  std::vector<int> col_owner(n, -1);
  std::vector<bool> used_col(n, false);
  std::function<bool(int)> augment = [&](int r) {
    for (int c = 0; c < n; ++c) {
      if (!allowed[r][c] || used_col[c]) continue;
      used_col[c] = true;
      if (col_owner[c] == -1 || augment(col_owner[c])) {
        col_owner[c] = r;
        return true;
      }
    }
    return false;
  };
  for (int r = 0; r < n; ++r) {
    std::fill(used_col.begin(), used_col.end(), false);
    if (!augment(r)) return false;
  }
  return true;
}

}  // namespace

MatchingDistribution bvn_decompose(const AllocationMatrix& P) {
  if (!is_doubly_stochastic(P)) throw std::invalid_argument("matrix is not doubly stochastic");
  const int n = static_cast<int>(P.size());
  AllocationMatrix R = P;
  MatchingDistribution md;
  while (true) {
    std::vector<std::vector<bool>> allowed(n, std::vector<bool>(n, false));
    bool any = false;
    for (int i = 0; i < n; ++i) {
      for (int h = 0; h < n; ++h) {
        allowed[i][h] = R[i][h] > 0;
        any = any || allowed[i][h];
      }
    }
    if (!any) break;
    Matching m(n, -1);
    for (int i = 0; i < n; ++i) {
      for (int h = 0; h < n; ++h) {
        if (!allowed[i][h]) continue;
        auto trial = allowed;
        for (int c = 0; c < n; ++c) trial[i][c] = c == h;
        for (int r = 0; r < n; ++r) {
          if (r != i) trial[r][h] = false;
        }
        if (has_perfect_matching(trial)) {
          m[i] = h;
          allowed = std::move(trial);
          break;
        }
      }
      if (m[i] < 0) throw std::logic_error("positive support has no perfect matching");
    }
    Prob w = R[0][m[0]];
    for (int i = 1; i < n; ++i) w = min_of(w, R[i][m[i]]);
    for (int i = 0; i < n; ++i) R[i][m[i]] -= w;
    md.parts.push_back(WeightedMatching{w, m});
  }
  return md;
}

// ---------------------------------------------------------------- global stability

namespace {

// Law of pi(S): pairs draw without replacement from their cluster in insertion order; a pair whose
// cluster is exhausted returns its hospital to the pool. Leftovers are matched uniformly to the pool,
// by all bijections when full is true and by cyclic shifts otherwise (same marginals).
MatchingDistribution global_law(const Instance& inst, const std::vector<std::pair<int, int>>& pairs, bool full) {
  const int n = inst.n();
  const Partition& clusters = inst.metric.clusters();
  MatchingDistribution md;
  Matching m(n, -1);
  std::vector<bool> hospital_paired(n, false);
  std::function<void(std::size_t, Prob)> draw = [&](std::size_t k, Prob w) {
    if (k == pairs.size()) {
      std::vector<int> docs, pool;
      for (int d = 0; d < n; ++d) {
        if (m[d] == -1) docs.push_back(d);
      }
      std::vector<bool> taken(n, false);
      for (int d = 0; d < n; ++d) {
        if (m[d] >= 0) taken[m[d]] = true;
      }
      for (int h = 0; h < n; ++h) {
        if (!taken[h]) pool.push_back(h);
      }
      const int size = static_cast<int>(docs.size());
      if (size == 0) {
        md.parts.push_back(WeightedMatching{w, m});
        return;
      }
      if (full) {
        std::vector<int> perm = pool;
        long count = 1;
        for (int i = 2; i <= size; ++i) count *= i;
        do {
          Matching mm = m;
          for (int i = 0; i < size; ++i) mm[docs[i]] = perm[i];
          md.parts.push_back(WeightedMatching{w / count, mm});
        } while (std::next_permutation(perm.begin(), perm.end()));
      } else {
        for (int s = 0; s < size; ++s) {
          Matching mm = m;
          for (int i = 0; i < size; ++i) mm[docs[i]] = pool[(i + s) % size];
          md.parts.push_back(WeightedMatching{w / size, mm});
        }
      }
      return;
    }
    auto [h, c] = pairs[k];
    std::vector<int> avail;
    for (int d : clusters[c]) {
      if (m[d] == -1) avail.push_back(d);
    }
    if (avail.empty()) {
      draw(k + 1, w);
      return;
    }
    for (int d : avail) {
      m[d] = h;
      draw(k + 1, w / static_cast<long>(avail.size()));
      m[d] = -1;
    }
  };
  draw(0, Prob(1));
  md.normalize();
  return md;
}

}  // namespace

AllocationMatrix global_allocation_marginals(const Instance& inst, const std::vector<std::pair<int, int>>& pairs) {
  return marginals(global_law(inst, pairs, false), inst.n());
}

GlobalStabilityResult global_stability_solve(const Instance& inst, const EnumLimits& limits) {
  if (!inst.metric.is_proto()) throw std::invalid_argument("global stability requires a proto-metric");
  const int n = inst.n();
  const Partition& clusters = inst.metric.clusters();
  std::vector<std::vector<int>> order(n);
  for (int h = 0; h < n; ++h) {
    if (inst.hospital_prefs[h].kind() != HospitalPrefModel::Kind::StrictIF &&
        !validate_strict_if(inst.hospital_prefs[h], inst.metric)) {
      throw std::invalid_argument("global stability requires strict-IF hospital preferences");
    }
    order[h] = strict_cluster_order(inst.hospital_prefs[h], inst.metric);
  }
  GlobalStabilityResult res;
  std::vector<bool> in_pool(n, true);
  AllocationMatrix P = global_allocation_marginals(inst, res.pairs);
  while (true) {
    std::optional<std::pair<int, int>> next;
    for (int h = 0; h < n && !next; ++h) {
      if (!in_pool[h]) continue;
      for (int c : order[h]) {
        Prospect u{Side::Doctors, std::vector<Prob>(n, Prob(0))};
        for (int d : clusters[c]) u.mass[d] = Prob(1, static_cast<long>(clusters[c].size()));
        if (blocking_allocation_exists(P, inst, h, u)) {
          next = std::make_pair(h, c);
          break;
        }
      }
    }
    if (!next) break;
    in_pool[next->first] = false;
    res.pairs.push_back(*next);
    P = global_allocation_marginals(inst, res.pairs);
  }
  res.matrix = P;
  // Full joint law when small enough, otherwise a lexicographic BvN of the same marginals.
  unsigned long long branches = 1;
  for (auto [h, c] : res.pairs) branches *= clusters[c].size();
  unsigned long long completions = 1;
  int leftover = n - static_cast<int>(res.pairs.size());
  for (int i = 2; i <= leftover && completions <= limits.max_profiles; ++i) completions *= i;
  if (branches * completions <= limits.max_profiles) {
    res.dist = global_law(inst, res.pairs, true);
  } else {
    res.dist = bvn_decompose(P);
  }
  return res;
}

// ---------------------------------------------------------------- rank IF reduction

namespace {

void refine(const std::vector<std::vector<Prob>>& per_capita, std::vector<int> group, int r, int ranks,
            std::vector<int>& out) {
  if (r == ranks || group.size() == 1) {
    std::sort(group.begin(), group.end());
    out.insert(out.end(), group.begin(), group.end());
    return;
  }
  std::map<Prob, std::vector<int>, std::greater<Prob>> split;
  for (int c : group) split[per_capita[c][r]].push_back(c);
  for (auto& [p, sub] : split) refine(per_capita, sub, r + 1, ranks, out);
}

}  // namespace

HospitalPrefModel rank_to_cluster(const HospitalPrefModel& prefs, const Metric& metric) {
  if (!metric.is_proto()) throw std::invalid_argument("rank_to_cluster requires a proto-metric");
  if (!check_rank_if(prefs, metric).pass) throw std::invalid_argument("preferences are not rank-IF");
  const Partition& clusters = metric.clusters();
  const int n = prefs.size();
  const int nc = static_cast<int>(clusters.size());
  std::vector<std::vector<Prob>> per_capita(nc, std::vector<Prob>(n, Prob(0)));
  for (int c = 0; c < nc; ++c) {
    for (int d : clusters[c]) {
      auto dist = prefs.rank_distribution(d);
      for (int r = 0; r < n; ++r) per_capita[c][r] += dist[r];
    }
    for (int r = 0; r < n; ++r) per_capita[c][r] /= static_cast<long>(clusters[c].size());
  }
  std::vector<int> all(nc), order;
  std::iota(all.begin(), all.end(), 0);
  refine(per_capita, all, 0, n, order);
  return HospitalPrefModel::strict_if(order, clusters);
}

}  // namespace fairmatch
