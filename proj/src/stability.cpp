#include "fairmatch/stability.hpp"

#include "fairmatch/fairness.hpp"
#include "fairmatch/flow.hpp"
#include "fairmatch/lp.hpp"
#include "subsets.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace fairmatch {

std::vector<std::pair<int, int>> blocking_pairs(const Matching& m, const std::vector<Ranking>& doctor_prefs,
                                                const std::vector<Ranking>& hospital_orders) {
  const int n = static_cast<int>(m.size());
  std::vector<int> holder(n);
  for (int d = 0; d < n; ++d) holder[m[d]] = d;
  std::vector<std::vector<int>> drank(n), hrank(n);
  for (int d = 0; d < n; ++d) drank[d] = inverse_ranking(doctor_prefs[d]);
  for (int h = 0; h < n; ++h) hrank[h] = inverse_ranking(hospital_orders[h]);
  std::vector<std::pair<int, int>> out;
  for (int d = 0; d < n; ++d) {
    for (int h = 0; h < n; ++h) {
      if (m[d] == h) continue;
      if (drank[d][h] < drank[d][m[d]] && hrank[h][d] < hrank[h][holder[h]]) out.emplace_back(d, h);
    }
  }
  return out;
}

// ---------------------------------------------------------------- contracts

namespace {

void require_proto(const Instance& inst, const char* who) {
  if (!inst.metric.is_proto()) throw std::invalid_argument(std::string(who) + ": contract stability requires a proto-metric");
}

}  // namespace

std::vector<Contract> active_contracts(const MatchingDistribution& md, const Instance& inst) {
  require_proto(inst, "active_contracts");
  const int n = inst.n();
  std::map<Contract, Prob> event;
  for (const auto& wm : md.parts) {
    if (wm.weight <= 0) continue;
    const Matching& m = wm.matching;
    for (int i = 0; i < n; ++i) {
      for (int i2 = 0; i2 < n; ++i2) {
        if (i == i2 || inst.metric(i, i2) != 1) continue;
        int h = m[i2], h2 = m[i];
        if (inst.prefers(i, h, h2)) event[Contract{h, i, h2, i2}] += wm.weight;
      }
    }
  }
  const AllocationMatrix P = marginals(md, n);
  std::vector<Contract> out;
  for (const auto& [c, mass] : event) {
    Prospect base = hospital_prospect(P, c.h);
    Prospect moved = base;
    moved.mass[c.i2] -= mass;
    moved.mass[c.i] += mass;
    if (dominates_by_hospital(moved, base, inst.hospital_prefs[c.h]) == Dominance::Strongly) out.push_back(c);
  }
  return out;
}

Prob contract_instability_mass(const MatchingDistribution& md, const Instance& inst) {
  const auto contracts = active_contracts(md, inst);
  Prob mass = 0;
  for (const auto& wm : md.parts) {
    for (const auto& c : contracts) {
      if (wm.matching[c.i2] == c.h && wm.matching[c.i] == c.h2) {
        mass += wm.weight;
        break;
      }
    }
  }
  return mass;
}

// ---------------------------------------------------------------- weak ex-ante

const char* to_string(StabilityStatus s) {
  switch (s) {
    case StabilityStatus::Stable: return "STABLE";
    case StabilityStatus::Unstable: return "UNSTABLE";
    case StabilityStatus::Unknown: return "UNKNOWN";
  }
  return "?";
}

namespace {

bool weakly_prefers_to_support(const Instance& inst, const AllocationMatrix& P, int d, int h) {
  for (int g = 0; g < inst.n(); ++g) {
    if (P[d][g] > 0 && inst.prefers(d, g, h)) return false;
  }
  return true;
}

bool strictly_prefers_support(const Instance& inst, const AllocationMatrix& P, int d, int h) {
  for (int g = 0; g < inst.n(); ++g) {
    if (P[d][g] > 0 && !inst.prefers(d, g, h)) return false;
  }
  return true;
}

}  // namespace

WeakStabilityVerdict check_weak_ex_ante(const AllocationMatrix& P, const Instance& inst, const EnumLimits& limits) {
  const int n = inst.n();
  WeakStabilityVerdict verdict;
  for (int h = 0; h < n; ++h) {
    const HospitalPrefModel& rh = inst.hospital_prefs[h];
    const std::vector<Prob> base = hospital_prefixes(hospital_prospect(P, h), rh);
    Prob base_total = sum(base);
    std::vector<int> candidates;
    for (int d = 0; d < n; ++d) {
      if (weakly_prefers_to_support(inst, P, d, h)) candidates.push_back(d);
    }
    if (static_cast<int>(candidates.size()) > limits.max_subset_n) {
      throw std::length_error("weak ex-ante check: candidate set exceeds the subset enumeration cap");
    }
    std::optional<AlternativeAllocation> found;
    detail::for_each_subset_by_size(candidates, 1, static_cast<int>(candidates.size()), [&](const std::vector<int>& ds) {
      ++verdict.candidates_examined;
      std::vector<bool> in(n, false);
      for (int d : ds) in[d] = true;
      for (int o = 0; o < n; ++o) {
        if (in[o]) continue;
        bool close = false;
        for (int d : ds) {
          if (inst.metric(o, d) < 1) close = true;
        }
        if (close && !strictly_prefers_support(inst, P, o, h)) return true;
      }
      const int m = static_cast<int>(ds.size());
      LinearProgram lp(m);
      lp.add(std::vector<Prob>(m, Prob(1)), Relation::Equal, Prob(1));
      for (int a = 0; a < m; ++a) {
        for (int b = a + 1; b < m; ++b) {
          std::vector<Prob> row(m, Prob(0));
          row[a] = 1;
          row[b] = -1;
          lp.add(row, Relation::LessEq, inst.metric(ds[a], ds[b]));
          row[a] = -1;
          row[b] = 1;
          lp.add(row, Relation::LessEq, inst.metric(ds[a], ds[b]));
        }
      }
      for (int k = 1; k <= n; ++k) {
        std::vector<Prob> row(m);
        for (int a = 0; a < m; ++a) {
          row[a] = rh.rank_prefix(ds[a], k);
          lp.objective[a] += row[a];
        }
        lp.add(row, Relation::GreaterEq, base[k - 1]);
      }
      LpResult res = solve_lp(lp);
      if (res.status != LpStatus::Optimal || res.value <= base_total) return true;
      AlternativeAllocation nu;
      nu.h = h;
      nu.doctors = ds;
      nu.sigma.assign(n, Prob(0));
      for (int a = 0; a < m; ++a) nu.sigma[ds[a]] = res.x[a];
      found = nu;
      return false;
    });
    if (found) {
      verdict.status = StabilityStatus::Unstable;
      verdict.witness = found;
      return verdict;
    }
  }
  return verdict;
}

WeakStabilityVerdict check_weak_ex_ante(const MatchingDistribution& md, const Instance& inst, const EnumLimits& limits) {
  return check_weak_ex_ante(marginals(md, inst.n()), inst, limits);
}

WeakStabilityVerdict tau_weak_ex_ante(const MatchingDistribution& md, const Instance& inst, const Prob& tau,
                                      const EnumLimits& limits) {
  if (tau < 0) throw std::invalid_argument("tau must be non-negative");
  WeakStabilityVerdict v = check_weak_ex_ante(md, inst, limits);
  if (v.status == StabilityStatus::Unstable) v.status = StabilityStatus::Unknown;
  return v;
}

bool blocking_allocation_exists(const AllocationMatrix& P, const Instance& inst, int h, const Prospect& sigma) {
  Prospect current = hospital_prospect(P, h);
  if (dominates_by_hospital(sigma, current, inst.hospital_prefs[h]) != Dominance::Strongly) return false;
  for (int d : sigma.support()) {
    if (!strictly_prefers_support(inst, P, d, h)) return false;
  }
  return true;
}

// ---------------------------------------------------------------- set contracts

const char* to_string(SetContractStatus s) {
  switch (s) {
    case SetContractStatus::Active: return "Active";
    case SetContractStatus::Inactive: return "Inactive";
    case SetContractStatus::NotAContract: return "NotAContract";
  }
  return "?";
}

MatchingDistribution apply_set_contract(const MatchingDistribution& md, const Instance& inst, const SetContract& mu) {
  const int n = inst.n();
  std::vector<bool> in_dprime(n, false);
  for (int d : mu.dprime) in_dprime[d] = true;
  MatchingDistribution out;
  for (const auto& wm : md.parts) {
    const Matching& m = wm.matching;
    int holder = static_cast<int>(std::find(m.begin(), m.end(), mu.h) - m.begin());
    if (!in_dprime[holder] || mu.a == 0) {
      out.parts.push_back(wm);
      continue;
    }
    if (mu.a < 1) out.parts.push_back(WeightedMatching{wm.weight * (Prob(1) - mu.a), m});
    for (int i = 0; i < n; ++i) {
      if (mu.sigma[i] == 0) continue;
      Prob w = wm.weight * mu.a * mu.sigma[i];
      if (inst.prefers(i, mu.h, m[i])) {
        Matching moved = m;
        moved[holder] = m[i];
        moved[i] = mu.h;
        out.parts.push_back(WeightedMatching{w, std::move(moved)});
      } else {
        out.parts.push_back(WeightedMatching{w, m});
      }
    }
  }
  out.normalize();
  return out;
}

SetContractVerdict check_set_contract(const MatchingDistribution& md, const Instance& inst, const SetContract& mu) {
  const int n = inst.n();
  auto reject = [](std::string why) { return SetContractVerdict{SetContractStatus::NotAContract, std::move(why)}; };
  if (mu.h < 0 || mu.h >= n) return reject("hospital out of range");
  if (mu.a < 0 || mu.a > 1) return reject("a outside [0,1]");
  if (static_cast<int>(mu.sigma.size()) != n) return reject("sigma has the wrong size");
  std::vector<bool> in_dprime(n, false);
  for (int d : mu.dprime) {
    if (d < 0 || d >= n) return reject("D' member out of range");
    in_dprime[d] = true;
  }
  Prob total = 0;
  for (int d = 0; d < n; ++d) {
    if (mu.sigma[d] < 0) return reject("sigma has a negative entry");
    if (mu.sigma[d] > 0 && in_dprime[d]) return reject("sigma puts mass on D'");
    total += mu.sigma[d];
  }
  if (total != 1) return reject("sigma does not sum to 1");
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (mu.sigma[a] > 0 && mu.sigma[b] > 0 && abs_of(mu.sigma[a] - mu.sigma[b]) > inst.metric(a, b)) {
        return reject("sigma is not individually fair on its support");
      }
    }
  }
  MatchingDistribution after = apply_set_contract(md, inst, mu);
  AllocationMatrix Pm = marginals(after, n);
  for (int x = 0; x < n; ++x) {
    if (in_dprime[x]) continue;
    for (int y : mu.dprime) {
      if (piif_deficit(Pm, x, y, inst.doctor_prefs[x]) > inst.metric(x, y) ||
          piif_deficit(Pm, y, x, inst.doctor_prefs[y]) > inst.metric(x, y)) {
        return reject("resulting allocation is not PIIF between " + inst.doctors[x] + " and " + inst.doctors[y]);
      }
    }
  }
  AllocationMatrix P = marginals(md, n);
  Dominance dom = dominates_by_hospital(hospital_prospect(Pm, mu.h), hospital_prospect(P, mu.h), inst.hospital_prefs[mu.h]);
  return SetContractVerdict{dom == Dominance::Strongly ? SetContractStatus::Active : SetContractStatus::Inactive, ""};
}

SetContractSearchResult set_contract_search(const MatchingDistribution& md, const Instance& inst, int grid,
                                            const EnumLimits& limits) {
  const int n = inst.n();
  if (grid < 1) throw std::invalid_argument("set contract search: grid must be positive");
  if (n > limits.max_subset_n) throw std::length_error("set contract search: instance exceeds the subset enumeration cap");
  SetContractSearchResult result;
  const AllocationMatrix P = marginals(md, n);
  std::vector<int> everyone(n);
  for (int d = 0; d < n; ++d) everyone[d] = d;
  for (int h = 0; h < n && !result.active; ++h) {
    const HospitalPrefModel& rh = inst.hospital_prefs[h];
    detail::for_each_subset_by_size(everyone, 1, n - 1, [&](const std::vector<int>& dprime) {
      std::vector<bool> in_dprime(n, false);
      Prob reach = 0;
      for (int d : dprime) {
        in_dprime[d] = true;
        reach += P[d][h];
      }
      if (reach == 0) return true;
      std::vector<int> rest;
      for (int d = 0; d < n; ++d) {
        if (!in_dprime[d]) rest.push_back(d);
      }
      const int m = static_cast<int>(rest.size());
      for (int step = 1; step <= grid; ++step) {
        Prob a = Prob(step) / Prob(grid);
        // delta[t][d][g]: marginal change per unit of sigma on rest[t].
        std::vector<AllocationMatrix> delta(m, zero_matrix(n));
        for (const auto& wm : md.parts) {
          const Matching& mt = wm.matching;
          int holder = static_cast<int>(std::find(mt.begin(), mt.end(), h) - mt.begin());
          if (!in_dprime[holder]) continue;
          for (int t = 0; t < m; ++t) {
            int i = rest[t];
            if (!inst.prefers(i, h, mt[i])) continue;
            Prob w = wm.weight * a;
            delta[t][holder][h] -= w;
            delta[t][i][mt[i]] -= w;
            delta[t][i][h] += w;
            delta[t][holder][mt[i]] += w;
          }
        }
        LinearProgram lp(m);
        lp.add(std::vector<Prob>(m, Prob(1)), Relation::Equal, Prob(1));
        for (int s = 0; s < m; ++s) {
          for (int t = s + 1; t < m; ++t) {
            std::vector<Prob> row(m, Prob(0));
            row[s] = 1;
            row[t] = -1;
            lp.add(row, Relation::LessEq, inst.metric(rest[s], rest[t]));
            row[s] = -1;
            row[t] = 1;
            lp.add(row, Relation::LessEq, inst.metric(rest[s], rest[t]));
          }
        }
        // PIIF between rest and D' in both directions: prefix(other) - prefix(self) <= d.
        auto add_piif = [&](int self, int other, const Prob& bound) {
          const Ranking& r = inst.doctor_prefs[self];
          Prob c0 = 0;
          std::vector<Prob> row(m, Prob(0));
          for (int pos = 0; pos < n; ++pos) {
            int g = r[pos];
            c0 += P[other][g] - P[self][g];
            for (int t = 0; t < m; ++t) row[t] += delta[t][other][g] - delta[t][self][g];
            lp.add(row, Relation::LessEq, bound - c0);
          }
        };
        for (int x : rest) {
          for (int y : dprime) {
            const Prob& d = inst.metric(x, y);
            if (d >= 1) continue;
            add_piif(x, y, d);
            add_piif(y, x, d);
          }
        }
        for (int k = 1; k <= n; ++k) {
          std::vector<Prob> row(m, Prob(0));
          for (int t = 0; t < m; ++t) {
            for (int d = 0; d < n; ++d) {
              if (delta[t][d][h] != 0) row[t] += delta[t][d][h] * rh.rank_prefix(d, k);
            }
            lp.objective[t] += row[t];
          }
          lp.add(row, Relation::GreaterEq, Prob(0));
        }
        ++result.examined;
        LpResult res = solve_lp(lp);
        if (res.status != LpStatus::Optimal || res.value <= 0) continue;
        SetContract mu{h, dprime, a, std::vector<Prob>(n, Prob(0))};
        for (int t = 0; t < m; ++t) mu.sigma[rest[t]] = res.x[t];
        if (check_set_contract(md, inst, mu).status == SetContractStatus::Active) {
          result.active = mu;
          return false;
        }
      }
      return true;
    });
  }
  return result;
}

// ---------------------------------------------------------------- local stability

std::vector<Profile> enumerate_profiles(const Instance& inst, const EnumLimits& limits) {
  const int n = inst.n();
  unsigned long long total = 1;
  for (const auto& m : inst.hospital_prefs) {
    unsigned long long s = m.support_size();
    if (s != 0 && total > limits.max_profiles / s) throw std::length_error("hospital profile space exceeds the enumeration cap");
    total *= s;
  }
  if (total > limits.max_profiles) throw std::length_error("hospital profile space exceeds the enumeration cap");
  std::vector<std::vector<WeightedOrder>> per(n);
  for (int h = 0; h < n; ++h) per[h] = inst.hospital_prefs[h].expand(limits.max_profiles);
  std::vector<Profile> out;
  out.reserve(total);
  std::vector<std::size_t> idx(n, 0);
  while (true) {
    Profile p;
    p.weight = 1;
    for (int h = 0; h < n; ++h) {
      p.orders.push_back(per[h][idx[h]].order);
      p.weight *= per[h][idx[h]].weight;
    }
    out.push_back(std::move(p));
    int pos = n - 1;
    while (pos >= 0 && ++idx[pos] == per[pos].size()) {
      idx[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return out;
}

LocalStabilityVerdict check_local_stability(const MatchingDistribution& md, const Instance& inst, const EnumLimits& limits) {
  const auto profiles = enumerate_profiles(inst, limits);
  const int np = static_cast<int>(profiles.size());
  const int nm = static_cast<int>(md.parts.size());
  FlowNetwork net(np + nm + 2);
  const int source = np + nm, sink = np + nm + 1;
  for (int p = 0; p < np; ++p) net.add_edge(source, p, profiles[p].weight);
  for (int m = 0; m < nm; ++m) net.add_edge(np + m, sink, md.parts[m].weight);
  for (int p = 0; p < np; ++p) {
    for (int m = 0; m < nm; ++m) {
      if (blocking_pairs(md.parts[m].matching, inst.doctor_prefs, profiles[p].orders).empty()) {
        net.add_edge(p, np + m, Prob(1));
      }
    }
  }
  LocalStabilityVerdict v;
  v.profiles = profiles.size();
  v.coupled_mass = net.max_flow(source, sink);
  v.pass = v.coupled_mass == 1;
  return v;
}

}  // namespace fairmatch
