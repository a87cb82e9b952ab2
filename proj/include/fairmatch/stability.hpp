#pragma once

#include "fairmatch/core.hpp"
#include "fairmatch/limits.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fairmatch {

/// All (doctor, hospital) pairs that prefer each other to their partners in m.
/// hospital_orders[h] ranks doctors best-first.
std::vector<std::pair<int, int>> blocking_pairs(const Matching& m, const std::vector<Ranking>& doctor_prefs,
                                                const std::vector<Ranking>& hospital_orders);

/// (h, i; h2, i2): i would leave h2 for h, displacing i2 to h2.
struct Contract {
  int h = -1;
  int i = -1;
  int h2 = -1;
  int i2 = -1;
  auto operator<=>(const Contract&) const = default;
};

/// Contracts of a proto-metric instance whose triggering event has positive probability, in
/// lexicographic (h, i, h2, i2) order. Throws for non-proto metrics.
std::vector<Contract> active_contracts(const MatchingDistribution& md, const Instance& inst);
/// Probability that some active contract's swap event occurs.
Prob contract_instability_mass(const MatchingDistribution& md, const Instance& inst);

/// nu = (h, D*, sigma); sigma has one entry per doctor and vanishes outside D*.
struct AlternativeAllocation {
  int h = -1;
  std::vector<int> doctors;
  std::vector<Prob> sigma;
};

enum class StabilityStatus { Stable, Unstable, Unknown };
const char* to_string(StabilityStatus s);

struct WeakStabilityVerdict {
  StabilityStatus status = StabilityStatus::Stable;
  std::optional<AlternativeAllocation> witness;
  std::size_t candidates_examined = 0;
};

/// Searches hospitals in index order and D* by size then lexicographically.
WeakStabilityVerdict check_weak_ex_ante(const AllocationMatrix& alloc, const Instance& inst,
                                        const EnumLimits& limits = EnumLimits{});
WeakStabilityVerdict check_weak_ex_ante(const MatchingDistribution& md, const Instance& inst,
                                        const EnumLimits& limits = EnumLimits{});
/// Stable when check_weak_ex_ante passes; otherwise Unknown carrying the witness.
WeakStabilityVerdict tau_weak_ex_ante(const MatchingDistribution& md, const Instance& inst, const Prob& tau,
                                      const EnumLimits& limits = EnumLimits{});

/// sigma strongly dominates pi(h) and every supp(sigma) doctor strictly prefers h to its whole support.
bool blocking_allocation_exists(const AllocationMatrix& alloc, const Instance& inst, int h, const Prospect& sigma);

/// mu = (h, D', a, sigma), sigma a distribution over doctors outside D'.
struct SetContract {
  int h = -1;
  std::vector<int> dprime;
  Prob a;
  std::vector<Prob> sigma;
};

enum class SetContractStatus { Active, Inactive, NotAContract };
const char* to_string(SetContractStatus s);

struct SetContractVerdict {
  SetContractStatus status = SetContractStatus::Inactive;
  std::string reason;
};

/// Exact law of the allocation after executing mu on md.
MatchingDistribution apply_set_contract(const MatchingDistribution& md, const Instance& inst, const SetContract& mu);
SetContractVerdict check_set_contract(const MatchingDistribution& md, const Instance& inst, const SetContract& mu);

struct SetContractSearchResult {
  std::optional<SetContract> active;
  std::size_t examined = 0;
};

/// Heuristic: D' over nonempty proper subsets, a over {1/grid, ..., 1}, sigma from an LP.
SetContractSearchResult set_contract_search(const MatchingDistribution& md, const Instance& inst, int grid = 4,
                                            const EnumLimits& limits = EnumLimits{});

struct LocalStabilityVerdict {
  bool pass = false;
  Prob coupled_mass;
  std::size_t profiles = 0;
};

/// Coupling feasibility between independent hospital profiles and md, restricted to stable cells.
LocalStabilityVerdict check_local_stability(const MatchingDistribution& md, const Instance& inst,
                                            const EnumLimits& limits = EnumLimits{});

/// Product law over deterministic hospital profiles. Throws std::length_error above the cap.
struct Profile {
  std::vector<Ranking> orders;
  Prob weight;
};
std::vector<Profile> enumerate_profiles(const Instance& inst, const EnumLimits& limits);

}  // namespace fairmatch
