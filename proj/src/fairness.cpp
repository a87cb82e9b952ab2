#include "fairmatch/fairness.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace fairmatch {

Prob piif_deficit(const AllocationMatrix& alloc, int i, int j, const Ranking& prefs_i, int& at_rank) {
  Prob best = 0, pi = 0, pj = 0;
  at_rank = 0;
  for (std::size_t pos = 0; pos < prefs_i.size(); ++pos) {
    pi += alloc[i][prefs_i[pos]];
    pj += alloc[j][prefs_i[pos]];
    Prob excess = pj - pi;
    if (excess > best) {
      best = excess;
      at_rank = static_cast<int>(pos) + 1;
    }
  }
  return best;
}

Prob piif_deficit(const AllocationMatrix& alloc, int i, int j, const Ranking& prefs_i) {
  int ignored = 0;
  return piif_deficit(alloc, i, j, prefs_i, ignored);
}

FairnessVerdict check_if(const AllocationMatrix& alloc, const Metric& metric) {
  const int n = static_cast<int>(alloc.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      Prob tv = tv_distance(doctor_prospect(alloc, i), doctor_prospect(alloc, j));
      if (tv > metric(i, j)) return FairnessVerdict{false, FairnessWitness{i, j, tv, metric(i, j), 0}};
    }
  }
  return {};
}

FairnessVerdict check_ef(const AllocationMatrix& alloc, const std::vector<Ranking>& doctor_prefs) {
  const int n = static_cast<int>(alloc.size());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      int k = 0;
      Prob deficit = piif_deficit(alloc, i, j, doctor_prefs[i], k);
      if (deficit > 0) return FairnessVerdict{false, FairnessWitness{i, j, deficit, Prob(0), k}};
    }
  }
  return {};
}

namespace {

FairnessVerdict piif_with_slack(const AllocationMatrix& alloc, const Metric& metric,
                                const std::vector<Ranking>& doctor_prefs, const Prob& tau) {
  const int n = static_cast<int>(alloc.size());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      Prob bound = min_of(metric(i, j) + tau, Prob(1));
      int k = 0;
      Prob deficit = piif_deficit(alloc, i, j, doctor_prefs[i], k);
      if (deficit > bound) return FairnessVerdict{false, FairnessWitness{i, j, deficit, bound, k}};
    }
  }
  return {};
}

}  // namespace

FairnessVerdict check_piif(const AllocationMatrix& alloc, const Metric& metric, const std::vector<Ranking>& doctor_prefs) {
  return piif_with_slack(alloc, metric, doctor_prefs, Prob(0));
}

FairnessVerdict check_tau_piif(const AllocationMatrix& alloc, const Metric& metric,
                               const std::vector<Ranking>& doctor_prefs, const Prob& tau) {
  if (tau < 0) throw std::invalid_argument("tau must be non-negative");
  return piif_with_slack(alloc, metric, doctor_prefs, tau);
}

bool validate_strict_if(const HospitalPrefModel& prefs, const Metric& metric) {
  if (!metric.is_proto() || prefs.size() != metric.size()) return false;
  const Partition& part = metric.clusters();
  if (prefs.kind() == HospitalPrefModel::Kind::StrictIF) {
    std::set<std::set<int>> a, b;
    for (const auto& c : part) a.insert(std::set<int>(c.begin(), c.end()));
    for (const auto& c : prefs.clusters()) b.insert(std::set<int>(c.begin(), c.end()));
    return a == b;
  }
  // Equal per-rank probabilities within each cluster.
  for (const auto& c : part) {
    auto ref = prefs.rank_distribution(c.front());
    for (int d : c) {
      if (prefs.rank_distribution(d) != ref) return false;
    }
  }
  // Clusters appear as contiguous blocks in one common order across the support.
  std::vector<WeightedOrder> support = prefs.kind() == HospitalPrefModel::Kind::Deterministic
                                           ? std::vector<WeightedOrder>{WeightedOrder{prefs.order(), Prob(1)}}
                                           : prefs.support();
  std::vector<int> common;
  for (const auto& wo : support) {
    std::vector<int> seq;
    for (int d : wo.order) {
      int c = metric.cluster_of(d);
      if (seq.empty() || seq.back() != c) seq.push_back(c);
    }
    if (static_cast<std::size_t>(seq.size()) != part.size()) return false;
    if (common.empty()) {
      common = seq;
    } else if (seq != common) {
      return false;
    }
  }
  return true;
}

FairnessVerdict check_mutual_replacement_if(const HospitalPrefModel& prefs, const Metric& metric,
                                            unsigned long long cap) {
  const int n = prefs.size();
  std::map<Ranking, Prob> law;
  for (auto& wo : prefs.expand(cap)) law[wo.order] += wo.weight;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      std::map<Ranking, Prob> swapped;
      for (const auto& [order, w] : law) {
        Ranking r = order;
        for (int& x : r) {
          if (x == i) x = j;
          else if (x == j) x = i;
        }
        swapped[r] += w;
      }
      Prob l1 = 0;
      for (const auto& [order, w] : law) {
        auto it = swapped.find(order);
        l1 += abs_of(w - (it == swapped.end() ? Prob(0) : it->second));
      }
      for (const auto& [order, w] : swapped) {
        if (!law.count(order)) l1 += w;
      }
      Prob tv = l1 / 2;
      if (tv > metric(i, j)) return FairnessVerdict{false, FairnessWitness{i, j, tv, metric(i, j), 0}};
    }
  }
  return {};
}

FairnessVerdict check_rank_if(const HospitalPrefModel& prefs, const Metric& metric) {
  const int n = prefs.size();
  std::vector<std::vector<Prob>> dist(n);
  for (int d = 0; d < n; ++d) dist[d] = prefs.rank_distribution(d);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      Prob l1 = 0;
      for (int r = 0; r < n; ++r) l1 += abs_of(dist[i][r] - dist[j][r]);
      Prob tv = l1 / 2;
      if (tv > metric(i, j)) return FairnessVerdict{false, FairnessWitness{i, j, tv, metric(i, j), 0}};
    }
  }
  return {};
}

}  // namespace fairmatch
