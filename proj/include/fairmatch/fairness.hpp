#pragma once

#include "fairmatch/core.hpp"

#include <optional>

namespace fairmatch {

struct FairnessWitness {
  int i = -1;
  int j = -1;
  Prob value;  // violated quantity
  Prob bound;  // required bound
  int rank = 0;  // rank k (1-based) where a prefix deficit peaks, 0 if not applicable
};

struct FairnessVerdict {
  bool pass = true;
  std::optional<FairnessWitness> witness;
};

/// Smallest TV budget that deforms pi(j) into a prospect pi(i) weakly dominates under r_i.
Prob piif_deficit(const AllocationMatrix& alloc, int i, int j, const Ranking& prefs_i);
/// Same, also reporting the first rank attaining the maximum (0 when the deficit is 0).
Prob piif_deficit(const AllocationMatrix& alloc, int i, int j, const Ranking& prefs_i, int& at_rank);

FairnessVerdict check_if(const AllocationMatrix& alloc, const Metric& metric);
FairnessVerdict check_ef(const AllocationMatrix& alloc, const std::vector<Ranking>& doctor_prefs);
FairnessVerdict check_piif(const AllocationMatrix& alloc, const Metric& metric, const std::vector<Ranking>& doctor_prefs);
FairnessVerdict check_tau_piif(const AllocationMatrix& alloc, const Metric& metric,
                               const std::vector<Ranking>& doctor_prefs, const Prob& tau);

bool validate_strict_if(const HospitalPrefModel& prefs, const Metric& metric);
FairnessVerdict check_mutual_replacement_if(const HospitalPrefModel& prefs, const Metric& metric,
                                            unsigned long long cap = 1000000);
FairnessVerdict check_rank_if(const HospitalPrefModel& prefs, const Metric& metric);

}  // namespace fairmatch
