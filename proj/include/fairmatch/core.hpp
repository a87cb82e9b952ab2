#pragma once

#include "fairmatch/rational.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fairmatch {

/// Strict order given best-first: ranking[pos] is the index ranked pos+1.
using Ranking = std::vector<int>;
/// ranks[x] is the 0-based position of x in the ranking.
std::vector<int> inverse_ranking(const Ranking& ranking);
bool is_permutation_of(const Ranking& ranking, int n);

using Partition = std::vector<std::vector<int>>;

class Metric {
 public:
  enum class Kind { Proto, General };

  Metric() = default;
  /// Throws if the clusters do not partition {0..n-1}.
  static Metric proto(Partition clusters, int n);
  /// Throws unless symmetric, zero diagonal, in [0,1] and satisfying the triangle inequality.
  static Metric general(std::vector<std::vector<Prob>> distances);

  Kind kind() const { return kind_; }
  int size() const { return static_cast<int>(dist_.size()); }
  const Prob& operator()(int i, int j) const { return dist_[i][j]; }
  const std::vector<std::vector<Prob>>& matrix() const { return dist_; }

  /// True when every distance is 0 or 1, in which case clusters() is the induced partition.
  bool is_proto() const { return has_partition_; }
  const Partition& clusters() const { return clusters_; }
  int cluster_of(int doctor) const { return cluster_of_[doctor]; }

 private:
  void derive_partition();

  Kind kind_ = Kind::General;
  std::vector<std::vector<Prob>> dist_;
  bool has_partition_ = false;
  Partition clusters_;
  std::vector<int> cluster_of_;
};

struct WeightedOrder {
  Ranking order;
  Prob weight;
};

/// A hospital's (possibly random) ordinal preference over doctors.
class HospitalPrefModel {
 public:
  enum class Kind { Deterministic, StrictIF, Explicit };

  HospitalPrefModel() = default;
  static HospitalPrefModel deterministic(Ranking order);
  /// cluster_order lists cluster indices of `clusters` best-first.
  static HospitalPrefModel strict_if(std::vector<int> cluster_order, Partition clusters);
  /// Merges duplicate orders; throws unless weights are positive and sum to 1.
  static HospitalPrefModel explicit_support(std::vector<WeightedOrder> support);

  Kind kind() const { return kind_; }
  int size() const { return n_; }
  const Ranking& order() const { return order_; }
  const std::vector<int>& cluster_order() const { return order_; }
  const Partition& clusters() const { return clusters_; }
  const std::vector<WeightedOrder>& support() const { return support_; }

  /// Pr[rank of doctor <= k]; k ranges over 0..n.
  Prob rank_prefix(int doctor, int k) const;
  /// Pr[rank of doctor = r+1] for r = 0..n-1.
  std::vector<Prob> rank_distribution(int doctor) const;
  /// Number of orders in the support (StrictIF: product of cluster factorials).
  unsigned long long support_size() const;
  /// Full support as weighted orders. Throws if support_size() exceeds cap.
  std::vector<WeightedOrder> expand(unsigned long long cap) const;

 private:
  Kind kind_ = Kind::Deterministic;
  int n_ = 0;
  Ranking order_;
  Partition clusters_;
  std::vector<int> cluster_rank_;   // StrictIF: cluster -> position in order_
  std::vector<int> cluster_of_;     // StrictIF: doctor -> cluster
  std::vector<int> before_;         // StrictIF: doctor -> total size of preferred clusters
  std::vector<WeightedOrder> support_;
  std::vector<std::vector<Prob>> rank_dist_;  // Explicit/Deterministic cache
};

struct Instance {
  std::vector<std::string> doctors;
  std::vector<std::string> hospitals;
  Metric metric;
  std::vector<Ranking> doctor_prefs;  // per doctor, hospitals best-first
  std::vector<HospitalPrefModel> hospital_prefs;

  int n() const { return static_cast<int>(doctors.size()); }
  /// Validates all invariants and fills the rank cache. Throws std::invalid_argument.
  void finalize();
  int doctor_index(const std::string& id) const;
  int hospital_index(const std::string& id) const;
  /// 0-based position of hospital h in doctor d's order.
  int doctor_rank(int d, int h) const { return doctor_rank_[d][h]; }
  /// True iff doctor d strictly prefers hospital a to hospital b.
  bool prefers(int d, int a, int b) const { return doctor_rank_[d][a] < doctor_rank_[d][b]; }

 private:
  std::vector<std::vector<int>> doctor_rank_;
};

enum class Side { Hospitals, Doctors };

/// Sub-distribution over one side; the residual 1 - total() is a virtual last outcome.
struct Prospect {
  Side side = Side::Hospitals;
  std::vector<Prob> mass;

  Prob total() const;
  Prob residual() const { return Prob(1) - total(); }
  std::vector<int> support() const;
};

using AllocationMatrix = std::vector<std::vector<Prob>>;

/// matching[d] is the hospital assigned to doctor d.
using Matching = std::vector<int>;

struct WeightedMatching {
  Prob weight;
  Matching matching;
};

struct MatchingDistribution {
  std::vector<WeightedMatching> parts;

  /// Merges identical matchings (first occurrence keeps its position) and drops zero weights.
  void normalize();
  /// Throws unless weights are positive, sum to 1 and every matching is a bijection on n.
  void validate(int n) const;
};

enum class Dominance { No, Weakly, Strongly };
const char* to_string(Dominance d);

/// Sum of p's mass on the k best outcomes of ranking; 1 <= k <= n.
Prob prefix_prob(const Prospect& p, const Ranking& ranking, int k);
Dominance compare_prefixes(const std::vector<Prob>& p, const std::vector<Prob>& q);
Dominance dominates(const Prospect& p, const Prospect& q, const Ranking& ranking);

/// Pr[hospital ranks the outcome within top k] for a prospect over doctors, 1 <= k <= n.
Prob hospital_prefix(const Prospect& p, const HospitalPrefModel& prefs, int k);
std::vector<Prob> hospital_prefixes(const Prospect& p, const HospitalPrefModel& prefs);
Dominance dominates_by_hospital(const Prospect& p, const Prospect& q, const HospitalPrefModel& prefs);

/// Half the L1 distance, residuals included as a shared virtual outcome.
Prob tv_distance(const Prospect& p, const Prospect& q);

AllocationMatrix zero_matrix(int n);
AllocationMatrix marginals(const MatchingDistribution& md, int n);
Prospect doctor_prospect(const AllocationMatrix& P, int doctor);
Prospect hospital_prospect(const AllocationMatrix& P, int hospital);
/// Exact row and column sums all equal to 1 and entries non-negative.
bool is_doubly_stochastic(const AllocationMatrix& P);
/// Entries non-negative with all row and column sums at most 1.
bool is_sub_doubly_stochastic(const AllocationMatrix& P);

}  // namespace fairmatch
