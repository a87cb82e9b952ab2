#include "fairmatch/core.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace fairmatch {

std::vector<int> inverse_ranking(const Ranking& ranking) {
  std::vector<int> inv(ranking.size(), -1);
  for (std::size_t pos = 0; pos < ranking.size(); ++pos) inv[ranking[pos]] = static_cast<int>(pos);
  return inv;
}

bool is_permutation_of(const Ranking& ranking, int n) {
  if (static_cast<int>(ranking.size()) != n) return false;
  std::vector<bool> seen(n, false);
  for (int x : ranking) {
    if (x < 0 || x >= n || seen[x]) return false;
    seen[x] = true;
  }
  return true;
}

// ---------------------------------------------------------------- Metric

Metric Metric::proto(Partition clusters, int n) {
  std::vector<int> owner(n, -1);
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    if (clusters[c].empty()) throw std::invalid_argument("metric: empty cluster");
    for (int d : clusters[c]) {
      if (d < 0 || d >= n) throw std::invalid_argument("metric: cluster member out of range");
      if (owner[d] != -1) throw std::invalid_argument("metric: doctor appears in two clusters");
      owner[d] = static_cast<int>(c);
    }
  }
  for (int d = 0; d < n; ++d) {
    if (owner[d] == -1) throw std::invalid_argument("metric: clusters do not cover every doctor");
  }
  Metric m;
  m.kind_ = Kind::Proto;
  m.dist_.assign(n, std::vector<Prob>(n, Prob(1)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (owner[i] == owner[j]) m.dist_[i][j] = 0;
    }
  }
  m.has_partition_ = true;
  m.clusters_ = std::move(clusters);
  m.cluster_of_ = std::move(owner);
  return m;
}

Metric Metric::general(std::vector<std::vector<Prob>> distances) {
  const int n = static_cast<int>(distances.size());
  for (const auto& row : distances) {
    if (static_cast<int>(row.size()) != n) throw std::invalid_argument("metric: distance matrix is not square");
  }
  for (int i = 0; i < n; ++i) {
    if (distances[i][i] != 0) throw std::invalid_argument("metric: nonzero diagonal");
    for (int j = 0; j < n; ++j) {
      if (distances[i][j] < 0 || distances[i][j] > 1) throw std::invalid_argument("metric: distance outside [0,1]");
      if (distances[i][j] != distances[j][i]) throw std::invalid_argument("metric: matrix is not symmetric");
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        if (distances[i][k] > distances[i][j] + distances[j][k]) {
          throw std::invalid_argument("metric: triangle inequality violated");
        }
      }
    }
  }
  Metric m;
  m.kind_ = Kind::General;
  m.dist_ = std::move(distances);
  m.derive_partition();
  return m;
}

void Metric::derive_partition() {
  const int n = size();
  for (const auto& row : dist_) {
    for (const auto& v : row) {
      if (v != 0 && v != 1) return;
    }
  }
  has_partition_ = true;
  cluster_of_.assign(n, -1);
  clusters_.clear();
  for (int i = 0; i < n; ++i) {
    if (cluster_of_[i] != -1) continue;
    std::vector<int> members;
    for (int j = i; j < n; ++j) {
      if (dist_[i][j] == 0) {
        cluster_of_[j] = static_cast<int>(clusters_.size());
        members.push_back(j);
      }
    }
    clusters_.push_back(std::move(members));
  }
}

// ---------------------------------------------------------------- HospitalPrefModel

namespace {

unsigned long long factorial_capped(std::size_t k) {
  unsigned long long f = 1;
  for (std::size_t i = 2; i <= k; ++i) {
    if (f > (~0ULL) / i) return ~0ULL;
    f *= i;
  }
  return f;
}

unsigned long long mul_capped(unsigned long long a, unsigned long long b) {
  if (a != 0 && b > (~0ULL) / a) return ~0ULL;
  return a * b;
}

std::vector<std::vector<Prob>> rank_table(const std::vector<WeightedOrder>& support, int n) {
  std::vector<std::vector<Prob>> t(n, std::vector<Prob>(n, Prob(0)));
  for (const auto& wo : support) {
    for (int pos = 0; pos < n; ++pos) t[wo.order[pos]][pos] += wo.weight;
  }
  return t;
}

}  // namespace

HospitalPrefModel HospitalPrefModel::deterministic(Ranking order) {
  const int n = static_cast<int>(order.size());
  if (!is_permutation_of(order, n)) throw std::invalid_argument("hospital preference is not a permutation");
  HospitalPrefModel m;
  m.kind_ = Kind::Deterministic;
  m.n_ = n;
  m.order_ = std::move(order);
  m.rank_dist_ = rank_table({WeightedOrder{m.order_, Prob(1)}}, n);
  return m;
}

HospitalPrefModel HospitalPrefModel::strict_if(std::vector<int> cluster_order, Partition clusters) {
  const int c = static_cast<int>(clusters.size());
  if (!is_permutation_of(cluster_order, c)) throw std::invalid_argument("cluster order is not a permutation of the clusters");
  int n = 0;
  for (const auto& cl : clusters) n += static_cast<int>(cl.size());
  HospitalPrefModel m;
  m.kind_ = Kind::StrictIF;
  m.n_ = n;
  m.order_ = std::move(cluster_order);
  m.clusters_ = std::move(clusters);
  m.cluster_rank_ = inverse_ranking(m.order_);
  m.cluster_of_.assign(n, -1);
  for (int ci = 0; ci < c; ++ci) {
    if (m.clusters_[ci].empty()) throw std::invalid_argument("empty cluster in strict_if preference");
    for (int d : m.clusters_[ci]) {
      if (d < 0 || d >= n || m.cluster_of_[d] != -1) throw std::invalid_argument("strict_if clusters are not a partition");
      m.cluster_of_[d] = ci;
    }
  }
  m.before_.assign(n, 0);
  int acc = 0;
  std::vector<int> before_cluster(c, 0);
  for (int pos = 0; pos < c; ++pos) {
    before_cluster[m.order_[pos]] = acc;
    acc += static_cast<int>(m.clusters_[m.order_[pos]].size());
  }
  for (int d = 0; d < n; ++d) m.before_[d] = before_cluster[m.cluster_of_[d]];
  return m;
}

HospitalPrefModel HospitalPrefModel::explicit_support(std::vector<WeightedOrder> support) {
  if (support.empty()) throw std::invalid_argument("explicit preference has empty support");
  const int n = static_cast<int>(support.front().order.size());
  std::vector<WeightedOrder> merged;
  std::map<Ranking, std::size_t> where;
  Prob total = 0;
  for (auto& wo : support) {
    if (!is_permutation_of(wo.order, n)) throw std::invalid_argument("explicit preference contains a non-permutation");
    if (wo.weight <= 0) throw std::invalid_argument("explicit preference weight must be positive");
    total += wo.weight;
    auto it = where.find(wo.order);
    if (it == where.end()) {
      where.emplace(wo.order, merged.size());
      merged.push_back(std::move(wo));
    } else {
      merged[it->second].weight += wo.weight;
    }
  }
  if (total != 1) throw std::invalid_argument("explicit preference weights sum to " + format_prob(total) + ", expected 1");
  HospitalPrefModel m;
  m.kind_ = Kind::Explicit;
  m.n_ = n;
  m.support_ = std::move(merged);
  m.rank_dist_ = rank_table(m.support_, n);
  return m;
}

Prob HospitalPrefModel::rank_prefix(int doctor, int k) const {
  if (k <= 0) return 0;
  if (k >= n_) return 1;
  if (kind_ == Kind::StrictIF) {
    const Prob size = static_cast<long>(clusters_[cluster_of_[doctor]].size());
    Prob v = Prob(k - before_[doctor]) / size;
    if (v < 0) return 0;
    if (v > 1) return 1;
    return v;
  }
  Prob acc = 0;
  for (int r = 0; r < k; ++r) acc += rank_dist_[doctor][r];
  return acc;
}

std::vector<Prob> HospitalPrefModel::rank_distribution(int doctor) const {
  if (kind_ != Kind::StrictIF) return rank_dist_[doctor];
  std::vector<Prob> out(n_);
  for (int r = 0; r < n_; ++r) out[r] = rank_prefix(doctor, r + 1) - rank_prefix(doctor, r);
  return out;
}

unsigned long long HospitalPrefModel::support_size() const {
  switch (kind_) {
    case Kind::Deterministic: return 1;
    case Kind::Explicit: return support_.size();
    case Kind::StrictIF: {
      unsigned long long total = 1;
      for (const auto& cl : clusters_) total = mul_capped(total, factorial_capped(cl.size()));
      return total;
    }
  }
  return 0;
}

std::vector<WeightedOrder> HospitalPrefModel::expand(unsigned long long cap) const {
  if (support_size() > cap) throw std::length_error("hospital preference support exceeds enumeration cap");
  if (kind_ == Kind::Deterministic) return {WeightedOrder{order_, Prob(1)}};
  if (kind_ == Kind::Explicit) return support_;
  // StrictIF: uniform over within-cluster permutations, clusters laid out in order.
  std::vector<std::vector<int>> blocks;
  for (int c : order_) {
    auto b = clusters_[c];
    std::sort(b.begin(), b.end());
    blocks.push_back(std::move(b));
  }
  std::vector<WeightedOrder> out;
  const Prob w = Prob(1) / Prob(static_cast<long>(support_size()));
  std::vector<std::vector<int>> current = blocks;
  // Odometer over next_permutation of each block.
  while (true) {
    Ranking r;
    for (const auto& b : current) r.insert(r.end(), b.begin(), b.end());
    out.push_back(WeightedOrder{std::move(r), w});
    int idx = static_cast<int>(current.size()) - 1;
    while (idx >= 0 && !std::next_permutation(current[idx].begin(), current[idx].end())) --idx;
    if (idx < 0) break;
  }
  return out;
}

// ---------------------------------------------------------------- Instance

void Instance::finalize() {
  const int n = static_cast<int>(doctors.size());
  if (n < 1) throw std::invalid_argument("instance: at least one doctor required");
  if (static_cast<int>(hospitals.size()) != n) throw std::invalid_argument("instance: doctors and hospitals differ in number");
  auto check_unique = [](const std::vector<std::string>& ids, const char* what) {
    std::vector<std::string> s = ids;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
      throw std::invalid_argument(std::string("instance: duplicate ") + what + " id");
    }
  };
  check_unique(doctors, "doctor");
  check_unique(hospitals, "hospital");
  if (metric.size() != n) throw std::invalid_argument("instance: metric size does not match the doctors");
  if (static_cast<int>(doctor_prefs.size()) != n) throw std::invalid_argument("instance: missing doctor preferences");
  if (static_cast<int>(hospital_prefs.size()) != n) throw std::invalid_argument("instance: missing hospital preferences");
  doctor_rank_.assign(n, {});
  for (int d = 0; d < n; ++d) {
    if (!is_permutation_of(doctor_prefs[d], n)) {
      throw std::invalid_argument("instance: doctor_prefs." + doctors[d] + " is not a permutation of the hospitals");
    }
    doctor_rank_[d] = inverse_ranking(doctor_prefs[d]);
  }
  for (int h = 0; h < n; ++h) {
    const auto& m = hospital_prefs[h];
    if (m.size() != n) throw std::invalid_argument("instance: hospital_prefs." + hospitals[h] + " has the wrong size");
    if (m.kind() == HospitalPrefModel::Kind::StrictIF) {
      if (!metric.is_proto()) {
        throw std::invalid_argument("instance: hospital_prefs." + hospitals[h] + " is strict_if but the metric is not a proto-metric");
      }
      for (const auto& cl : m.clusters()) {
        int owner = metric.cluster_of(cl.front());
        for (int d : cl) {
          if (metric.cluster_of(d) != owner) {
            throw std::invalid_argument("instance: hospital_prefs." + hospitals[h] + " clusters differ from the metric partition");
          }
        }
        if (cl.size() != metric.clusters()[owner].size()) {
          throw std::invalid_argument("instance: hospital_prefs." + hospitals[h] + " clusters differ from the metric partition");
        }
      }
    }
  }
}

int Instance::doctor_index(const std::string& id) const {
  for (int i = 0; i < n(); ++i) {
    if (doctors[i] == id) return i;
  }
  throw std::invalid_argument("unknown doctor id '" + id + "'");
}

int Instance::hospital_index(const std::string& id) const {
  for (int i = 0; i < n(); ++i) {
    if (hospitals[i] == id) return i;
  }
  throw std::invalid_argument("unknown hospital id '" + id + "'");
}

// ---------------------------------------------------------------- Prospects

Prob Prospect::total() const { return sum(mass); }

std::vector<int> Prospect::support() const {
  std::vector<int> s;
  for (std::size_t i = 0; i < mass.size(); ++i) {
    if (mass[i] > 0) s.push_back(static_cast<int>(i));
  }
  return s;
}

void MatchingDistribution::normalize() {
  std::vector<WeightedMatching> merged;
  std::map<Matching, std::size_t> where;
  for (auto& wm : parts) {
    if (wm.weight == 0) continue;
    auto it = where.find(wm.matching);
    if (it == where.end()) {
      where.emplace(wm.matching, merged.size());
      merged.push_back(std::move(wm));
    } else {
      merged[it->second].weight += wm.weight;
    }
  }
  parts = std::move(merged);
}

void MatchingDistribution::validate(int n) const {
  Prob total = 0;
  for (const auto& wm : parts) {
    if (wm.weight <= 0) throw std::invalid_argument("matching distribution: weights must be positive");
    if (!is_permutation_of(wm.matching, n)) throw std::invalid_argument("matching distribution: matching is not a bijection");
    total += wm.weight;
  }
  if (total != 1) throw std::invalid_argument("matching distribution: weights sum to " + format_prob(total));
}

const char* to_string(Dominance d) {
  switch (d) {
    case Dominance::No: return "No";
    case Dominance::Weakly: return "WeaklyDominates";
    case Dominance::Strongly: return "StronglyDominates";
  }
  return "?";
}

Prob prefix_prob(const Prospect& p, const Ranking& ranking, int k) {
  const int n = static_cast<int>(ranking.size());
  if (k < 1 || k > n) throw std::out_of_range("prefix_prob: k out of range");
  if (p.mass.size() != ranking.size()) throw std::invalid_argument("prefix_prob: ranking does not cover the prospect");
  Prob acc = 0;
  for (int pos = 0; pos < k; ++pos) acc += p.mass[ranking[pos]];
  return acc;
}

Dominance compare_prefixes(const std::vector<Prob>& p, const std::vector<Prob>& q) {
  bool strict = false;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] < q[k]) return Dominance::No;
    if (p[k] > q[k]) strict = true;
  }
  return strict ? Dominance::Strongly : Dominance::Weakly;
}

namespace {

std::vector<Prob> prefixes(const Prospect& p, const Ranking& ranking) {
  std::vector<Prob> out(ranking.size());
  Prob acc = 0;
  for (std::size_t pos = 0; pos < ranking.size(); ++pos) {
    acc += p.mass[ranking[pos]];
    out[pos] = acc;
  }
  return out;
}

}  // namespace

Dominance dominates(const Prospect& p, const Prospect& q, const Ranking& ranking) {
  if (p.side != q.side) throw std::invalid_argument("dominates: prospects over different sides");
  if (p.mass.size() != ranking.size() || q.mass.size() != ranking.size()) {
    throw std::invalid_argument("dominates: ranking does not cover the prospects");
  }
  return compare_prefixes(prefixes(p, ranking), prefixes(q, ranking));
}

Prob hospital_prefix(const Prospect& p, const HospitalPrefModel& prefs, int k) {
  const int n = prefs.size();
  if (k < 1 || k > n) throw std::out_of_range("hospital_prefix: k out of range");
  Prob acc = 0;
  for (int d = 0; d < n; ++d) {
    if (p.mass[d] != 0) acc += p.mass[d] * prefs.rank_prefix(d, k);
  }
  return acc;
}

std::vector<Prob> hospital_prefixes(const Prospect& p, const HospitalPrefModel& prefs) {
  if (p.side != Side::Doctors) throw std::invalid_argument("hospital_prefixes: prospect must be over doctors");
  std::vector<Prob> out(prefs.size());
  for (int k = 1; k <= prefs.size(); ++k) out[k - 1] = hospital_prefix(p, prefs, k);
  return out;
}

Dominance dominates_by_hospital(const Prospect& p, const Prospect& q, const HospitalPrefModel& prefs) {
  if (p.side != Side::Doctors || q.side != Side::Doctors) {
    throw std::invalid_argument("dominates_by_hospital: prospects must be over doctors");
  }
  return compare_prefixes(hospital_prefixes(p, prefs), hospital_prefixes(q, prefs));
}

Prob tv_distance(const Prospect& p, const Prospect& q) {
  if (p.side != q.side || p.mass.size() != q.mass.size()) throw std::invalid_argument("tv_distance: incompatible prospects");
  Prob acc = abs_of(p.residual() - q.residual());
  for (std::size_t i = 0; i < p.mass.size(); ++i) acc += abs_of(p.mass[i] - q.mass[i]);
  return acc / 2;
}

AllocationMatrix zero_matrix(int n) { return AllocationMatrix(n, std::vector<Prob>(n, Prob(0))); }

AllocationMatrix marginals(const MatchingDistribution& md, int n) {
  AllocationMatrix P = zero_matrix(n);
  for (const auto& wm : md.parts) {
    for (int d = 0; d < n; ++d) P[d][wm.matching[d]] += wm.weight;
  }
  return P;
}

Prospect doctor_prospect(const AllocationMatrix& P, int doctor) {
  return Prospect{Side::Hospitals, P[doctor]};
}

Prospect hospital_prospect(const AllocationMatrix& P, int hospital) {
  Prospect p{Side::Doctors, std::vector<Prob>(P.size())};
  for (std::size_t d = 0; d < P.size(); ++d) p.mass[d] = P[d][hospital];
  return p;
}

bool is_sub_doubly_stochastic(const AllocationMatrix& P) {
  const std::size_t n = P.size();
  std::vector<Prob> col(n, Prob(0));
  for (const auto& row : P) {
    if (row.size() != n) return false;
    Prob r = 0;
    for (std::size_t h = 0; h < n; ++h) {
      if (row[h] < 0) return false;
      r += row[h];
      col[h] += row[h];
    }
    if (r > 1) return false;
  }
  for (const auto& c : col) {
    if (c > 1) return false;
  }
  return true;
}

bool is_doubly_stochastic(const AllocationMatrix& P) {
  if (!is_sub_doubly_stochastic(P)) return false;
  const std::size_t n = P.size();
  for (std::size_t i = 0; i < n; ++i) {
    Prob r = 0, c = 0;
    for (std::size_t j = 0; j < n; ++j) {
      r += P[i][j];
      c += P[j][i];
    }
    if (r != 1 || c != 1) return false;
  }
  return true;
}

}  // namespace fairmatch
