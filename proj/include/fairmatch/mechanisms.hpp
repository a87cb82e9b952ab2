#pragma once

#include "fairmatch/core.hpp"
#include "fairmatch/limits.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace fairmatch {

enum class ProposingSide { Doctors, Hospitals };

/// Deferred acceptance on deterministic preferences; the lowest-index free proposer moves first.
/// hospital_orders[h] ranks doctors best-first.
Matching gale_shapley(const std::vector<Ranking>& doctor_prefs, const std::vector<Ranking>& hospital_orders,
                      ProposingSide side);

/// Exact output law of sampling a hospital profile and running gale_shapley on it.
MatchingDistribution compose_sample_gs(const Instance& inst, ProposingSide side,
                                       const EnumLimits& limits = EnumLimits{});

/// Eating procedure for one cluster; proposed[h] is the mass offered by hospital h.
/// Returns one hospital-side prospect per entry of cluster_doctors.
std::vector<Prospect> psp(const std::vector<int>& cluster_doctors, const std::vector<Prob>& proposed,
                          const std::vector<Ranking>& doctor_prefs);

/// Water-filling of one unit over proposed[d], clusters visited best-first.
Prospect rising_tide(const std::vector<Prob>& proposed, const Partition& clusters_best_first);

/// Cluster indices (into metric.clusters()) best-first for a strict-IF model.
/// Accepts StrictIF, Deterministic over singleton clusters, and Explicit models passing validate_strict_if.
std::vector<int> strict_cluster_order(const HospitalPrefModel& model, const Metric& metric);

struct ProposeOptions {
  Prob tau = Prob(1, 64);
  std::size_t max_rounds = 0;  // 0: no cap
  bool ignore_tau = false;     // keep iterating until no free mass or max_rounds
};

struct Transfer {
  int source = -1;  // proposer index
  int target = -1;  // receiving hospital or cluster index
  Prob mass;
};

struct RoundRecord {
  std::vector<Transfer> proposals;
  std::vector<Transfer> rejections;
  Prob free_mass;  // total free mass after the round
  AllocationMatrix matrix;  // P after the round
};

struct RoundTrace {
  ProposingSide side = ProposingSide::Hospitals;  // hospitals propose to clusters, doctors to hospitals
  std::vector<RoundRecord> rounds;
  Prob leftover;  // free mass handed to the completion step
  bool capped = false;
};

struct MechanismResult {
  MatchingDistribution dist;
  AllocationMatrix matrix;
  RoundTrace trace;
};

MechanismResult hospitals_first(const Instance& inst, const ProposeOptions& opts = ProposeOptions{});
MechanismResult doctors_first(const Instance& inst, const ProposeOptions& opts = ProposeOptions{});

/// Greedy doctor-major completion. hospital_loads[h] is the mass already held by h.
AllocationMatrix allocate_free_mass(AllocationMatrix P, std::vector<Prob> doctor_residuals,
                                    std::vector<Prob> hospital_loads);

/// Throws std::invalid_argument unless P is exactly doubly stochastic.
MatchingDistribution bvn_decompose(const AllocationMatrix& P);

struct GlobalStabilityResult {
  std::vector<std::pair<int, int>> pairs;  // (hospital, cluster index) in insertion order
  AllocationMatrix matrix;
  MatchingDistribution dist;
};

/// Marginals of pi(S) for the given (hospital, cluster) pairs.
AllocationMatrix global_allocation_marginals(const Instance& inst, const std::vector<std::pair<int, int>>& pairs);
GlobalStabilityResult global_stability_solve(const Instance& inst, const EnumLimits& limits = EnumLimits{});

/// Strict cluster order derived from a rank-IF model; ties fall back to cluster index.
HospitalPrefModel rank_to_cluster(const HospitalPrefModel& prefs, const Metric& metric);

}  // namespace fairmatch
