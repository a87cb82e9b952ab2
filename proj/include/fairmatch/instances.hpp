#pragma once

#include "fairmatch/core.hpp"
#include "fairmatch/stability.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace fairmatch {

struct NamedCase {
  std::string label;
  Instance instance;
};

/// An expected alternative allocation for a named allocation of one case.
struct ExpectedWitness {
  std::size_t case_index = 0;
  std::string allocation;  // key into NamedInstance::distributions
  AlternativeAllocation nu;
};

struct NamedInstance {
  std::string key;
  std::string title;
  std::vector<NamedCase> cases;
  /// Expected or reference allocations, keyed by label; the case is encoded as "<case label>/<name>".
  std::map<std::string, MatchingDistribution> distributions;
  /// Expected matrices (marginals or rank tables), keyed the same way.
  std::map<std::string, AllocationMatrix> matrices;
  std::vector<ExpectedWitness> witnesses;

  const NamedCase& only_case() const;
  const NamedCase& find_case(const std::string& label) const;
};

/// Keys accepted by build(); parametric keys are listed with their default alpha.
std::vector<std::string> catalog_keys();
/// Accepts "key", "key(alpha)" and "key:alpha" for the parametric entries. Throws std::invalid_argument.
NamedInstance build(const std::string& key);

NamedInstance build_unfair_lahp_alpha(const Prob& alpha);
NamedInstance build_metric_lahp_alpha(const Prob& alpha);

/// The 18-order distribution over block[0..3] with deterministic prefix and suffix, as doctor indices.
HospitalPrefModel tilde_model(const std::vector<int>& prefix, const std::vector<int>& block,
                              const std::vector<int>& suffix);

/// Proto-metric instance with strict-IF hospitals. Empty cluster_sizes draws a random partition.
Instance random_instance(int n, const std::vector<int>& cluster_sizes, std::uint64_t seed);
/// Rank-IF (generally not strict-IF) hospitals: each is a mixture of within-cluster symmetrized cluster orders.
Instance random_rank_if_instance(int n, const std::vector<int>& cluster_sizes, std::uint64_t seed);

}  // namespace fairmatch
