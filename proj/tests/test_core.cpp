#include "fairmatch/core.hpp"
#include "fairmatch/instances.hpp"
#include "support.hpp"

#include <doctest.h>

#include <map>
#include <random>

using namespace fairmatch;
using fairmatch::testing::q;

TEST_CASE("rationals parse and format canonically") {
  CHECK(format_prob(parse_prob("3/6")) == "1/2");
  CHECK(format_prob(parse_prob("4/2")) == "2");
  CHECK(format_prob(parse_prob("-2/8")) == "-1/4");
  CHECK(format_prob(parse_prob("0")) == "0");
  CHECK(parse_prob("1/3") + parse_prob("2/3") == 1);
  CHECK_THROWS_AS(parse_prob("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_prob("0.5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_prob(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_prob("1/"), std::invalid_argument);
}

TEST_CASE("proto metric from a partition") {
  Metric m = Metric::proto({{0, 2}, {1}}, 3);
  CHECK(m.is_proto());
  CHECK(m(0, 2) == 0);
  CHECK(m(0, 1) == 1);
  CHECK(m.cluster_of(2) == m.cluster_of(0));
  CHECK_THROWS_AS(Metric::proto({{0}, {0, 1}}, 2), std::invalid_argument);
  CHECK_THROWS_AS(Metric::proto({{0}}, 2), std::invalid_argument);
}

TEST_CASE("general metric validation") {
  Metric ok = Metric::general({{q(0), q(1, 3), q(1)}, {q(1, 3), q(0), q(1)}, {q(1), q(1), q(0)}});
  CHECK_FALSE(ok.is_proto());
  Metric zero_one = Metric::general({{q(0), q(0)}, {q(0), q(0)}});
  CHECK(zero_one.is_proto());
  CHECK(zero_one.clusters().size() == 1);
  CHECK_THROWS_AS(Metric::general({{q(0), q(1, 2)}, {q(1, 3), q(0)}}), std::invalid_argument);
  CHECK_THROWS_AS(Metric::general({{q(1), q(0)}, {q(0), q(0)}}), std::invalid_argument);
  CHECK_THROWS_AS(Metric::general({{q(0), q(1, 4), q(1)}, {q(1, 4), q(0), q(1, 4)}, {q(1), q(1, 4), q(0)}}),
                  std::invalid_argument);
}

TEST_CASE("strict-IF rank prefixes match the expanded support") {
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + trial % 5;
    Instance inst = random_instance(n, {}, 100 + trial);
    const HospitalPrefModel& m = inst.hospital_prefs[0];
    auto support = m.expand(100000);
    CHECK(support.size() == m.support_size());
    Prob total = 0;
    for (const auto& wo : support) total += wo.weight;
    CHECK(total == 1);
    for (int d = 0; d < n; ++d) {
      for (int k = 0; k <= n; ++k) {
        Prob brute = 0;
        for (const auto& wo : support) {
          for (int pos = 0; pos < k; ++pos) {
            if (wo.order[pos] == d) brute += wo.weight;
          }
        }
        CHECK(m.rank_prefix(d, k) == brute);
      }
    }
  }
}

TEST_CASE("explicit preference models merge duplicates and validate weights") {
  auto m = HospitalPrefModel::explicit_support({{{0, 1}, q(1, 4)}, {{1, 0}, q(1, 2)}, {{0, 1}, q(1, 4)}});
  CHECK(m.support().size() == 2);
  CHECK(m.rank_distribution(0) == std::vector<Prob>{q(1, 2), q(1, 2)});
  CHECK_THROWS_AS(HospitalPrefModel::explicit_support({{{0, 1}, q(1, 2)}}), std::invalid_argument);
  CHECK_THROWS_AS(HospitalPrefModel::explicit_support({{{0, 0}, q(1)}}), std::invalid_argument);
  CHECK_THROWS_AS(HospitalPrefModel::explicit_support({}), std::invalid_argument);
}

TEST_CASE("deterministic preference ranks") {
  auto m = HospitalPrefModel::deterministic({2, 0, 1});
  CHECK(m.rank_prefix(2, 1) == 1);
  CHECK(m.rank_prefix(0, 1) == 0);
  CHECK(m.rank_prefix(0, 2) == 1);
  CHECK(m.support_size() == 1);
  CHECK_THROWS_AS(HospitalPrefModel::deterministic({0, 0, 1}), std::invalid_argument);
}

TEST_CASE("prefix comparison classifies domination") {
  CHECK(compare_prefixes({q(1, 2), q(1)}, {q(1, 2), q(1)}) == Dominance::Weakly);
  CHECK(compare_prefixes({q(2, 3), q(1)}, {q(1, 2), q(1)}) == Dominance::Strongly);
  CHECK(compare_prefixes({q(1, 3), q(1)}, {q(1, 2), q(3, 4)}) == Dominance::No);
}

TEST_CASE("residual mass acts as the worst outcome") {
  Prospect p{Side::Hospitals, {q(1, 2), q(0)}};
  Prospect full{Side::Hospitals, {q(1, 2), q(1, 2)}};
  Ranking r = {0, 1};
  CHECK(prefix_prob(p, r, 2) == q(1, 2));
  CHECK(dominates(full, p, r) == Dominance::Strongly);
  CHECK(dominates(p, full, r) == Dominance::No);
  CHECK(tv_distance(p, full) == q(1, 2));
  CHECK(tv_distance(p, p) == 0);
}

TEST_CASE("tv distance matches half the L1 norm including residuals") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 5;
    Prospect a{Side::Hospitals, fairmatch::testing::random_subdistribution(n, rng)};
    Prospect b{Side::Hospitals, fairmatch::testing::random_subdistribution(n, rng)};
    Prob l1 = abs_of(a.residual() - b.residual());
    for (int k = 0; k < n; ++k) l1 += abs_of(a.mass[k] - b.mass[k]);
    CHECK(tv_distance(a, b) == l1 / 2);
    CHECK(tv_distance(a, b) == tv_distance(b, a));
  }
}

TEST_CASE("hospital prefixes average over the preference law") {
  auto m = HospitalPrefModel::strict_if({1, 0}, {{0, 1}, {2}});
  Prospect sigma{Side::Doctors, {q(1, 2), q(0), q(1, 2)}};
  CHECK(hospital_prefixes(sigma, m) == std::vector<Prob>{q(1, 2), q(3, 4), q(1)});
  Prospect point{Side::Doctors, {q(0), q(0), q(1)}};
  CHECK(dominates_by_hospital(point, sigma, m) == Dominance::Strongly);
}

TEST_CASE("marginals of a matching distribution") {
  MatchingDistribution md{{{q(1, 3), {0, 1}}, {q(2, 3), {1, 0}}}};
  AllocationMatrix P = marginals(md, 2);
  CHECK(P == AllocationMatrix{{q(1, 3), q(2, 3)}, {q(2, 3), q(1, 3)}});
  CHECK(is_doubly_stochastic(P));
  CHECK(doctor_prospect(P, 0).mass == std::vector<Prob>{q(1, 3), q(2, 3)});
  CHECK(hospital_prospect(P, 0).mass == std::vector<Prob>{q(1, 3), q(2, 3)});
  P[0][0] = 0;
  CHECK_FALSE(is_doubly_stochastic(P));
  CHECK(is_sub_doubly_stochastic(P));
}

TEST_CASE("matching distributions normalize and validate") {
  MatchingDistribution md{{{q(1, 4), {0, 1}}, {q(1, 2), {1, 0}}, {q(1, 4), {0, 1}}}};
  md.normalize();
  REQUIRE(md.parts.size() == 2);
  CHECK(md.parts[0].weight == q(1, 2));
  CHECK(md.parts[0].matching == Matching{0, 1});
  CHECK_NOTHROW(md.validate(2));
  MatchingDistribution bad{{{q(1), {0, 0}}}};
  CHECK_THROWS_AS(bad.validate(2), std::invalid_argument);
  MatchingDistribution light{{{q(1, 2), {0, 1}}}};
  CHECK_THROWS_AS(light.validate(2), std::invalid_argument);
}

TEST_CASE("instance finalize rejects inconsistent data") {
  Instance inst = random_instance(3, {2, 1}, 5);
  CHECK_NOTHROW(inst.finalize());
  Instance dup = inst;
  dup.doctors[1] = dup.doctors[0];
  CHECK_THROWS_AS(dup.finalize(), std::invalid_argument);
  Instance bad_pref = inst;
  bad_pref.doctor_prefs[0] = {0, 0, 1};
  CHECK_THROWS_AS(bad_pref.finalize(), std::invalid_argument);
  Instance bad_clusters = inst;
  bad_clusters.hospital_prefs[0] = HospitalPrefModel::strict_if({0}, {{0, 1, 2}});
  CHECK_THROWS_AS(bad_clusters.finalize(), std::invalid_argument);
  CHECK(inst.doctor_index("d2") == 2);
  CHECK_THROWS_AS(inst.hospital_index("nope"), std::invalid_argument);
}

TEST_CASE("doctor ranks follow the preference list") {
  Instance inst = random_instance(4, {}, 9);
  for (int d = 0; d < 4; ++d) {
    for (int pos = 0; pos < 4; ++pos) CHECK(inst.doctor_rank(d, inst.doctor_prefs[d][pos]) == pos);
    CHECK(inst.prefers(d, inst.doctor_prefs[d][0], inst.doctor_prefs[d][3]));
  }
}
