// Prints one PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

#include "fairmatch/fairness.hpp"
#include "fairmatch/instances.hpp"
#include "fairmatch/mechanisms.hpp"
#include "fairmatch/stability.hpp"
#include "support.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

using namespace fairmatch;
using fairmatch::testing::q;

namespace {

// Tolerances and suite sizes.
const Prob kTauTables(1, 1024);
const Prob kTauSuite(1, 64);
constexpr int kSuite6 = 200;
constexpr int kSuite8 = 500;
constexpr int kSuite9 = 100;
constexpr int kSuite10 = 100;
constexpr int kSuite12 = 40;
constexpr int kSuite13 = 1000;
constexpr double kBudget1to3Seconds = 1.0;
constexpr double kBudget6Seconds = 60.0;

struct Outcome {
  bool pass = true;
  std::ostringstream note;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) note << what;
      pass = false;
    }
  }
};

std::map<Matching, Prob> law(const MatchingDistribution& md) {
  std::map<Matching, Prob> m;
  for (const auto& wm : md.parts) m[wm.matching] += wm.weight;
  return m;
}

Prob max_abs_diff(const AllocationMatrix& a, const AllocationMatrix& b) {
  Prob worst = 0;
  for (std::size_t r = 0; r < a.size(); ++r) {
    for (std::size_t c = 0; c < a[r].size(); ++c) worst = max_of(worst, abs_of(a[r][c] - b[r][c]));
  }
  return worst;
}

void composition(Outcome& o, const std::string& key, ProposingSide side, const std::string& dist, int rank) {
  NamedInstance ni = build(key);
  const Instance& inst = ni.only_case().instance;
  MatchingDistribution md = compose_sample_gs(inst, side);
  o.require(law(md) == law(ni.distributions.at(dist)), "law differs from the two printed matchings");
  o.require(md.parts.size() == 2 && md.parts[0].weight == q(1, 2), "expected two matchings of weight 1/2");
  FairnessVerdict v = check_piif(marginals(md, inst.n()), inst.metric, inst.doctor_prefs);
  o.require(!v.pass, "PIIF unexpectedly holds");
  if (v.witness) {
    o.require(v.witness->i == inst.doctor_index("i1") && v.witness->j == inst.doctor_index("i2"),
              "witness is not (i1, i2)");
    o.require(v.witness->value == q(1, 2), "deficit is not 1/2");
    o.require(v.witness->rank == rank, "deficit not attained at k=" + std::to_string(rank));
    o.note << "witness (i1, i2) deficit " << format_prob(v.witness->value) << " at k=" << v.witness->rank;
  }
}

void criterion1(Outcome& o) { composition(o, "gs-doctor-compose", ProposingSide::Doctors, "main/doctor-propose", 1); }
void criterion2(Outcome& o) {
  composition(o, "gs-hospital-compose", ProposingSide::Hospitals, "main/hospital-propose", 2);
}

void criterion3(Outcome& o) {
  // Doctors a, b, c eat loaves l1, l2, l3 with one unit each on offer.
  std::vector<Prob> loaves(3, Prob(1));
  std::vector<int> eaters = {0, 1, 2};
  auto table = [&](const std::vector<Ranking>& prefs) {
    AllocationMatrix P;
    for (const auto& p : psp(eaters, loaves, prefs)) P.push_back(p.mass);
    return P;
  };
  AllocationMatrix first = table({{0, 1, 2}, {1, 0, 2}, {2, 0, 1}});
  AllocationMatrix second = table({{0, 1, 2}, {0, 2, 1}, {1, 0, 2}});
  o.require(first == AllocationMatrix{{q(1), q(0), q(0)}, {q(0), q(1), q(0)}, {q(0), q(0), q(1)}},
            "example 1 is not the identity");
  o.require(second == AllocationMatrix{{q(1, 2), q(1, 4), q(1, 4)}, {q(1, 2), q(0), q(1, 2)}, {q(0), q(3, 4), q(1, 4)}},
            "example 2 differs from the printed table");
  o.note << "both tables exact";
}

void criterion4(Outcome& o) {
  NamedInstance ni = build("algs-differ");
  const Instance& inst = ni.only_case().instance;
  ProposeOptions po;
  po.tau = kTauTables;
  Prob d1 = max_abs_diff(hospitals_first(inst, po).matrix, ni.matrices.at("main/hospitals-first"));
  Prob d2 = max_abs_diff(doctors_first(inst, po).matrix, ni.matrices.at("main/doctors-first"));
  o.require(d1 <= 2 * kTauTables, "hospitals-first off by " + format_prob(d1));
  o.require(d2 <= 2 * kTauTables, "doctors-first off by " + format_prob(d2));
  if (o.pass) o.note << "max entry diffs " << format_prob(d1) << ", " << format_prob(d2);
}

void criterion5(Outcome& o) {
  NamedInstance ni = build("not-optimal");
  const Instance& inst = ni.only_case().instance;
  ProposeOptions po;
  po.tau = kTauTables;
  const auto& e1 = ni.matrices.at("main/hospitals-first");
  const auto& e2 = ni.matrices.at("main/doctors-first");
  o.require(max_abs_diff(hospitals_first(inst, po).matrix, e1) <= 2 * kTauTables, "hospitals-first off the printed limit");
  o.require(max_abs_diff(doctors_first(inst, po).matrix, e2) <= 2 * kTauTables, "doctors-first off the printed limit");
  for (int d = 0; d < inst.n(); ++d) {
    Dominance dom = dominates(doctor_prospect(e1, d), doctor_prospect(e2, d), inst.doctor_prefs[d]);
    if (!o.pass || dom != Dominance::Strongly) {
      o.note << (o.pass ? "" : "; ") << inst.doctors[d] << " " << to_string(dom);
    }
    o.require(dom == Dominance::Strongly, "");
  }
}

void criterion6(Outcome& o) {
  auto start = std::chrono::steady_clock::now();
  std::size_t max_hf = 0, max_df = 0;
  for (int s = 0; s < kSuite6 && o.pass; ++s) {
    const int n = 2 + s % 5;
    Instance inst = random_instance(n, {}, 6000 + s);
    const long nc = static_cast<long>(inst.metric.clusters().size());
    ProposeOptions po;
    po.tau = kTauSuite;
    MechanismResult hf = hospitals_first(inst, po);
    MechanismResult df = doctors_first(inst, po);
    const std::string tag = " (seed " + std::to_string(6000 + s) + ")";
    o.require(check_piif(hf.matrix, inst.metric, inst.doctor_prefs).pass, "hospitals-first not PIIF" + tag);
    o.require(contract_instability_mass(hf.dist, inst) <= kTauSuite, "hospitals-first contract mass > tau" + tag);
    o.require(check_tau_piif(df.matrix, inst.metric, inst.doctor_prefs, 2 * kTauSuite).pass,
              "doctors-first not 2tau-PIIF" + tag);
    o.require(contract_instability_mass(df.dist, inst) <= kTauSuite, "doctors-first contract mass > tau" + tag);
    o.require(Prob(static_cast<long>(hf.trace.rounds.size())) <= Prob(n * nc) / kTauSuite,
              "hospitals-first round bound" + tag);
    o.require(Prob(static_cast<long>(df.trace.rounds.size())) < Prob(n * n) / kTauSuite,
              "doctors-first round bound" + tag);
    max_hf = std::max(max_hf, hf.trace.rounds.size());
    max_df = std::max(max_df, df.trace.rounds.size());
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.require(secs < kBudget6Seconds, "over the runtime budget");
  if (o.pass) o.note << kSuite6 << " instances, max rounds " << max_hf << "/" << max_df << ", " << secs << " s";
}

void criterion7(Outcome& o) {
  for (const char* key : {"nonconv-hospitals-first", "nonconv-doctors-first"}) {
    NamedInstance ni = build(key);
    const Instance& inst = ni.only_case().instance;
    ProposeOptions po;
    po.ignore_tau = true;
    po.max_rounds = 21;
    MechanismResult r = std::string(key) == "nonconv-hospitals-first" ? hospitals_first(inst, po) : doctors_first(inst, po);
    const auto& rounds = r.trace.rounds;
    o.require(rounds.size() == 21, std::string(key) + ": stopped early");
    for (int k = 0; o.pass && k <= 10; ++k) {
      mpz_class scale = 1;
      scale <<= k;
      Prob expected = rounds[0].free_mass / Prob(scale);
      o.require(rounds[2 * k].free_mass == expected, std::string(key) + ": round " + std::to_string(2 * k + 1));
    }
  }
  if (o.pass) o.note << "free mass 2^-k after round 2k+1, k <= 10, both instances";
}

void criterion8(Outcome& o) {
  std::mt19937_64 rng(8);
  std::size_t most = 0;
  for (int s = 0; s < kSuite8 && o.pass; ++s) {
    const int n = 1 + s % 6;
    AllocationMatrix P = fairmatch::testing::random_doubly_stochastic(n, rng);
    MatchingDistribution md = bvn_decompose(P);
    o.require(marginals(md, n) == P, "recomposition differs");
    o.require(md.parts.size() <= static_cast<std::size_t>(n * n - 2 * n + 2), "too many parts");
    most = std::max(most, md.parts.size());
  }
  if (o.pass) o.note << kSuite8 << " matrices, at most " << most << " parts";
}

void criterion9(Outcome& o) {
  std::mt19937_64 rng(9);
  int contract_stable = 0;
  for (int s = 0; s < kSuite9 && o.pass; ++s) {
    const int n = 2 + s % 4;
    Instance inst = random_instance(n, fairmatch::testing::small_cluster_sizes(n, rng), 9000 + s);
    const std::string tag = " (seed " + std::to_string(9000 + s) + ")";
    for (ProposingSide side : {ProposingSide::Doctors, ProposingSide::Hospitals}) {
      MatchingDistribution md = compose_sample_gs(inst, side);
      o.require(check_local_stability(md, inst).pass, "sampled deferred acceptance not locally stable" + tag);
      o.require(active_contracts(md, inst).empty(), "locally stable output has an active contract" + tag);
    }
    ProposeOptions po;
    po.tau = kTauSuite;
    for (const MatchingDistribution& md :
         {compose_sample_gs(inst, ProposingSide::Doctors), compose_sample_gs(inst, ProposingSide::Hospitals),
          hospitals_first(inst, po).dist, global_stability_solve(inst).dist}) {
      if (!active_contracts(md, inst).empty()) continue;
      ++contract_stable;
      WeakStabilityVerdict v = check_weak_ex_ante(md, inst);
      o.require(v.status == StabilityStatus::Stable, "contract-stable allocation fails weak ex-ante" + tag);
    }
  }
  if (o.pass) o.note << kSuite9 << " instances, " << contract_stable << " contract-stable allocations audited";
}

void criterion10(Outcome& o) {
  for (int s = 0; s < kSuite10 && o.pass; ++s) {
    const int n = 1 + s % 5;
    Instance inst = random_instance(n, {}, 10000 + s);
    const std::string tag = " (seed " + std::to_string(10000 + s) + ")";
    GlobalStabilityResult r = global_stability_solve(inst);
    const auto& clusters = inst.metric.clusters();
    o.require(r.pairs.size() <= clusters.size(), "more pair additions than clusters" + tag);
    o.require(marginals(r.dist, n) == r.matrix, "distribution and matrix disagree" + tag);
    o.require(fairmatch::testing::rows_equal_within_clusters(r.matrix, inst.metric), "prospects differ in a cluster" + tag);
    o.require(check_piif(r.matrix, inst.metric, inst.doctor_prefs).pass, "not PIIF" + tag);
    for (int h = 0; h < n; ++h) {
      for (const auto& c : clusters) {
        Prospect u{Side::Doctors, std::vector<Prob>(n, Prob(0))};
        for (int d : c) u.mass[d] = Prob(1) / static_cast<long>(c.size());
        o.require(!blocking_allocation_exists(r.matrix, inst, h, u), "uniform blocking allocation exists" + tag);
      }
    }
  }
  if (o.pass) o.note << kSuite10 << " instances";
}

void criterion11(Outcome& o) {
  {
    NamedInstance ni = build("tilde-prefs");
    const Instance& inst = ni.only_case().instance;
    AllocationMatrix ranks = zero_matrix(inst.n());
    for (int d = 0; d < inst.n(); ++d) {
      auto dist = inst.hospital_prefs[0].rank_distribution(d);
      for (int r = 0; r < inst.n(); ++r) ranks[r][d] = dist[r];
    }
    o.require(ranks == ni.matrices.at("main/rank"), "tilde rank table differs");
    for (const auto& m : inst.hospital_prefs) {
      o.require(check_mutual_replacement_if(m, inst.metric).pass, "tilde prefs not mutual-replacement IF");
    }
  }
  auto nu_str = [](const AlternativeAllocation& nu, const Instance& inst) {
    std::string s = "(" + inst.hospitals[nu.h] + ",{";
    for (std::size_t k = 0; k < nu.doctors.size(); ++k) {
      const int d = nu.doctors[k];
      s += (k ? ", " : "") + inst.doctors[d] + ":" + format_prob(nu.sigma[d]);
    }
    return s + "})";
  };
  for (const char* key : {"imposs-unfair-lahp", "imposs-metric-ladp"}) {
    NamedInstance ni = build(key);
    for (const auto& w : ni.witnesses) {
      const Instance& inst = ni.cases[w.case_index].instance;
      WeakStabilityVerdict v = check_weak_ex_ante(ni.distributions.at(w.allocation), inst);
      bool ok = v.status == StabilityStatus::Unstable && v.witness && v.witness->h == w.nu.h &&
                v.witness->doctors == w.nu.doctors && v.witness->sigma == w.nu.sigma;
      if (!ok) {
        o.note << (o.pass ? "" : "; ") << key << " " << w.allocation << ": " << to_string(v.status);
        if (v.witness) o.note << " via " << nu_str(*v.witness, inst);
        o.note << ", expected " << nu_str(w.nu, inst);
      }
      o.require(ok, "");
    }
  }
  {
    NamedInstance ni = build("imposs-unfair-lahp");
    const Instance& inst = ni.find_case("case-1").instance;
    WeakStabilityVerdict v = check_weak_ex_ante(ni.distributions.at("case-1/pi-star"), inst);
    if (v.status != StabilityStatus::Stable) o.note << (o.pass ? "" : "; ") << "pi-star of case 1 not stable";
    o.require(v.status == StabilityStatus::Stable, "");
  }
}

void criterion12(Outcome& o) {
  std::mt19937_64 rng(12);
  for (int s = 0; s < kSuite12 && o.pass; ++s) {
    const int n = 2 + s % 4;
    Instance inst = random_instance(n, {}, 12000 + s);
    for (const auto& m : inst.hospital_prefs) {
      HospitalPrefModel expanded = HospitalPrefModel::explicit_support(m.expand(1000000));
      HospitalPrefModel back = rank_to_cluster(expanded, inst.metric);
      o.require(strict_cluster_order(back, inst.metric) == strict_cluster_order(m, inst.metric),
                "rank_to_cluster lost the cluster order (seed " + std::to_string(12000 + s) + ")");
    }
  }
  int examined = 0;
  for (int s = 0; s < kSuite12 && o.pass; ++s) {
    const int n = 2 + s % 3;
    Instance original = random_rank_if_instance(n, {}, 12500 + s);
    Instance reduced = original;
    for (auto& m : reduced.hospital_prefs) m = rank_to_cluster(m, reduced.metric);
    reduced.finalize();
    ProposeOptions po;
    po.tau = kTauSuite;
    MechanismResult r = doctors_first(reduced, po);
    const std::string tag = " (seed " + std::to_string(12500 + s) + ")";
    o.require(contract_instability_mass(r.dist, reduced) <= kTauSuite, "contract mass > tau under reduced prefs" + tag);
    SetContractSearchResult sc = set_contract_search(r.dist, original);
    examined += static_cast<int>(sc.examined);
    if (sc.active) {
      o.note << "active set contract at hospital " << original.hospitals[sc.active->h] << " with a="
             << format_prob(sc.active->a) << tag;
    }
    o.require(!sc.active, "");
  }
  if (o.pass) o.note << kSuite12 << " reductions, " << examined << " set contracts examined";
}

void criterion13(Outcome& o) {
  std::mt19937_64 rng(13);
  for (int s = 0; s < kSuite13 && o.pass; ++s) {
    const int n = 1 + s % 5;
    AllocationMatrix rows = {fairmatch::testing::random_subdistribution(n, rng),
                             fairmatch::testing::random_subdistribution(n, rng)};
    Ranking r = fairmatch::testing::random_ranking(n, rng);
    Prob closed = piif_deficit(rows, 0, 1, r);
    Prob lp = fairmatch::testing::lp_piif_deficit(rows[0], rows[1], r);
    o.require(closed == lp, "pair " + std::to_string(s) + ": closed form " + format_prob(closed) + " vs LP " +
                                format_prob(lp));
  }
  if (o.pass) o.note << kSuite13 << " pairs agree exactly";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"composition failure, doctor-propose", criterion1},
      {"composition failure, hospital-propose", criterion2},
      {"eating tables", criterion3},
      {"mechanism divergence", criterion4},
      {"non-optimality", criterion5},
      {"theorem guarantees on random instances", criterion6},
      {"non-convergence", criterion7},
      {"Birkhoff-von Neumann", criterion8},
      {"stability implication chain", criterion9},
      {"global stability", criterion10},
      {"impossibility-instance audits", criterion11},
      {"reduction from rank-IF", criterion12},
      {"PIIF oracle equivalence", criterion13},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    auto start = std::chrono::steady_clock::now();
    try {
      criteria[k].second(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (k < 3 && secs >= kBudget1to3Seconds) o.require(false, "over the 1 s budget");
    if (!o.pass) ++failed;
    std::cout << "criterion " << k + 1 << ": " << (o.pass ? "PASS" : "FAIL") << "  " << criteria[k].first;
    const std::string note = o.note.str();
    if (!note.empty()) std::cout << " [" << note << "]";
    std::cout << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
