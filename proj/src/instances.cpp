#include "fairmatch/instances.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <tuple>

namespace fairmatch {

const NamedCase& NamedInstance::only_case() const {
  if (cases.size() != 1) throw std::logic_error(key + " has more than one case");
  return cases.front();
}

const NamedCase& NamedInstance::find_case(const std::string& label) const {
  for (const auto& c : cases) {
    if (c.label == label) return c;
  }
  throw std::invalid_argument(key + ": no case " + label);
}

HospitalPrefModel tilde_model(const std::vector<int>& prefix, const std::vector<int>& block,
                              const std::vector<int>& suffix) {
  if (block.size() != 4) throw std::invalid_argument("tilde block needs four doctors");
  // First-ranked block member and its weight (in 36ths); the other three follow in every order.
  const std::pair<int, int> leads[] = {{1, 2}, {0, 3}, {2, 1}};
  std::vector<WeightedOrder> support;
  for (auto [lead, w] : leads) {
    std::vector<int> rest;
    for (int b = 0; b < 4; ++b) {
      if (b != lead) rest.push_back(b);
    }
    do {
      Ranking r = prefix;
      r.push_back(block[lead]);
      for (int b : rest) r.push_back(block[b]);
      r.insert(r.end(), suffix.begin(), suffix.end());
      support.push_back(WeightedOrder{r, Prob(w) / 36});
    } while (std::next_permutation(rest.begin(), rest.end()));
  }
  return HospitalPrefModel::explicit_support(std::move(support));
}

namespace {

using Names = std::vector<std::string>;

class Builder {
 public:
  Builder(Names docs, Names hosps) {
    inst_.doctors = std::move(docs);
    inst_.hospitals = std::move(hosps);
    const int n = static_cast<int>(inst_.doctors.size());
    inst_.doctor_prefs.assign(n, {});
    inst_.hospital_prefs.assign(n, {});
  }

  int d(const std::string& name) const { return index_of(inst_.doctors, name); }
  int h(const std::string& name) const { return index_of(inst_.hospitals, name); }
  int n() const { return static_cast<int>(inst_.doctors.size()); }

  std::vector<int> ds(const Names& names) const {
    std::vector<int> out;
    for (const auto& s : names) out.push_back(d(s));
    return out;
  }

  /// Listed clusters; every unlisted doctor is a singleton.
  void proto(const std::vector<Names>& clusters) {
    Partition part;
    std::vector<bool> seen(n(), false);
    for (const auto& c : clusters) {
      part.push_back(ds(c));
      for (int x : part.back()) seen[x] = true;
    }
    for (int x = 0; x < n(); ++x) {
      if (!seen[x]) part.push_back({x});
    }
    inst_.metric = Metric::proto(std::move(part), n());
  }

  /// All distances 1 except the listed pairs.
  void general(const std::vector<std::tuple<std::string, std::string, Prob>>& close) {
    std::vector<std::vector<Prob>> m(n(), std::vector<Prob>(n(), Prob(1)));
    for (int x = 0; x < n(); ++x) m[x][x] = 0;
    for (const auto& [a, b, v] : close) {
      m[d(a)][d(b)] = v;
      m[d(b)][d(a)] = v;
    }
    inst_.metric = Metric::general(std::move(m));
  }

  void doctor(const std::string& name, const Names& order) {
    Ranking r;
    for (const auto& s : order) r.push_back(h(s));
    inst_.doctor_prefs[d(name)] = std::move(r);
  }

  void det(const std::string& hosp, const Names& order) {
    inst_.hospital_prefs[h(hosp)] = HospitalPrefModel::deterministic(ds(order));
  }

  /// Clusters best-first, each named by one member.
  void strict(const std::string& hosp, const Names& representatives) {
    const Partition& part = inst_.metric.clusters();
    std::vector<int> order;
    for (const auto& s : representatives) order.push_back(inst_.metric.cluster_of(d(s)));
    inst_.hospital_prefs[h(hosp)] = HospitalPrefModel::strict_if(order, part);
  }

  void tilde(const std::string& hosp, const Names& prefix, const Names& block, const Names& suffix) {
    inst_.hospital_prefs[h(hosp)] = tilde_model(ds(prefix), ds(block), ds(suffix));
  }

  Matching matching(const std::vector<std::pair<std::string, std::string>>& pairs) const {
    Matching m(n(), -1);
    for (const auto& [doc, hosp] : pairs) m[d(doc)] = h(hosp);
    for (int x : m) {
      if (x < 0) throw std::logic_error("incomplete catalog matching");
    }
    return m;
  }

  Instance make() {
    Instance out = inst_;
    out.finalize();
    return out;
  }

 private:
  static int index_of(const Names& v, const std::string& s) {
    auto it = std::find(v.begin(), v.end(), s);
    if (it == v.end()) throw std::logic_error("catalog name " + s + " not declared");
    return static_cast<int>(it - v.begin());
  }

  Instance inst_;
};

MatchingDistribution point(Matching m) { return MatchingDistribution{{WeightedMatching{Prob(1), std::move(m)}}}; }

MatchingDistribution halves(Matching a, Matching b) {
  return MatchingDistribution{{WeightedMatching{Prob(1, 2), std::move(a)}, WeightedMatching{Prob(1, 2), std::move(b)}}};
}

AlternativeAllocation alternative(const Builder& s, const std::string& hosp,
                                  const std::vector<std::pair<std::string, Prob>>& sigma) {
  AlternativeAllocation nu;
  nu.h = s.h(hosp);
  nu.sigma.assign(s.n(), Prob(0));
  for (const auto& [doc, p] : sigma) {
    nu.doctors.push_back(s.d(doc));
    nu.sigma[s.d(doc)] = p;
  }
  std::sort(nu.doctors.begin(), nu.doctors.end());
  return nu;
}

Prob q(long a, long b = 1) { return Prob(a) / b; }

// i1, i2, j with clusters {i1, i2}, {j}.
Builder three_doctor_builder() {
  Builder s({"i1", "i2", "j"}, {"A", "B", "C"});
  s.proto({{"i1", "i2"}});
  s.doctor("i1", {"A", "B", "C"});
  s.doctor("i2", {"A", "C", "B"});
  s.doctor("j", {"C", "A", "B"});
  s.strict("A", {"j", "i1"});
  s.strict("B", {"i1", "j"});
  s.strict("C", {"i1", "j"});
  return s;
}

// i1, i2, j, k with clusters {i1, i2}, {j}, {k}.
Builder four_doctor_builder() {
  Builder s({"i1", "i2", "j", "k"}, {"A", "B", "C", "D"});
  s.proto({{"i1", "i2"}});
  s.doctor("i1", {"A", "B", "C", "D"});
  s.doctor("i2", {"B", "A", "D", "C"});
  s.doctor("j", {"C", "B", "A", "D"});
  s.doctor("k", {"D", "A", "B", "C"});
  s.strict("A", {"i1", "j", "k"});
  s.strict("B", {"j", "i1", "k"});
  s.strict("C", {"i1", "j", "k"});
  s.strict("D", {"i1", "k", "j"});
  return s;
}

NamedInstance gs_doctor_compose() {
  Builder s = three_doctor_builder();
  NamedInstance ni{"gs-doctor-compose", "Doctor-proposing composition with strict-IF hospitals", {}, {}, {}, {}};
  ni.cases.push_back({"main", s.make()});
  ni.distributions["main/doctor-propose"] =
      halves(s.matching({{"i1", "B"}, {"i2", "C"}, {"j", "A"}}), s.matching({{"i1", "B"}, {"i2", "A"}, {"j", "C"}}));
  return ni;
}

NamedInstance gs_hospital_compose() {
  Builder s = four_doctor_builder();
  NamedInstance ni{"gs-hospital-compose", "Hospital-proposing composition with strict-IF hospitals", {}, {}, {}, {}};
  ni.cases.push_back({"main", s.make()});
  ni.distributions["main/hospital-propose"] =
      halves(s.matching({{"i1", "A"}, {"i2", "B"}, {"j", "C"}, {"k", "D"}}),
             s.matching({{"i1", "C"}, {"i2", "A"}, {"j", "B"}, {"k", "D"}}));
  return ni;
}

NamedInstance nonconv_hospitals_first() {
  Builder s = four_doctor_builder();
  NamedInstance ni{"nonconv-hospitals-first", "Hospitals-first free mass halves every two rounds", {}, {}, {}, {}};
  ni.cases.push_back({"main", s.make()});
  // Rows i1, i2, j, k; columns A, B, C, D.
  ni.matrices["main/round-1"] = {{q(1, 2), q(0), q(1, 2), q(0)},
                                 {q(1, 2), q(0), q(0), q(1, 2)},
                                 {q(0), q(1), q(0), q(0)},
                                 {q(0), q(0), q(0), q(0)}};
  ni.matrices["main/round-2"] = {{q(1, 2), q(0), q(1, 2), q(0)},
                                 {q(1, 2), q(0), q(0), q(1, 2)},
                                 {q(0), q(1, 2), q(1, 2), q(0)},
                                 {q(0), q(0), q(0), q(1, 2)}};
  ni.matrices["main/round-3"] = {{q(3, 4), q(0), q(1, 4), q(0)},
                                 {q(1, 4), q(1, 2), q(0), q(1, 4)},
                                 {q(0), q(1, 2), q(1, 2), q(0)},
                                 {q(0), q(0), q(0), q(1, 2)}};
  return ni;
}

NamedInstance nonconv_doctors_first() {
  Builder s = three_doctor_builder();
  NamedInstance ni{"nonconv-doctors-first", "Doctors-first free mass halves every two rounds", {}, {}, {}, {}};
  ni.cases.push_back({"main", s.make()});
  // Rows i1, i2, j; columns A, B, C.
  ni.matrices["main/round-1"] = {{q(1, 2), q(0), q(0)}, {q(1, 2), q(0), q(0)}, {q(0), q(0), q(1)}};
  ni.matrices["main/round-2"] = {{q(1, 2), q(1, 2), q(0)}, {q(1, 2), q(0), q(1, 2)}, {q(0), q(0), q(1, 2)}};
  ni.matrices["main/round-3"] = {{q(1, 4), q(1, 2), q(0)}, {q(1, 4), q(0), q(1, 2)}, {q(1, 2), q(0), q(1, 2)}};
  return ni;
}

NamedInstance algs_differ() {
  Builder s({"i1", "i2", "j1", "j2"}, {"A", "B", "C", "D"});
  s.proto({{"i1", "i2"}, {"j1", "j2"}});
  s.doctor("i1", {"A", "B", "C", "D"});
  s.doctor("i2", {"B", "A", "D", "C"});
  s.doctor("j1", {"C", "A", "B", "D"});
  s.doctor("j2", {"A", "D", "B", "C"});
  s.strict("A", {"j1", "i1"});
  s.strict("B", {"j1", "i1"});
  s.strict("C", {"i1", "j1"});
  s.strict("D", {"j1", "i1"});
  NamedInstance ni{"algs-differ", "The two propose-and-reject directions disagree", {}, {}, {}, {}};
  ni.cases.push_back({"main", s.make()});
  ni.matrices["main/hospitals-first"] = {{q(0), q(1, 4), q(3, 4), q(0)},
                                         {q(0), q(1, 4), q(1, 4), q(1, 2)},
                                         {q(1, 2), q(1, 2), q(0), q(0)},
                                         {q(1, 2), q(0), q(0), q(1, 2)}};
  ni.matrices["main/doctors-first"] = {{q(0), q(1, 2), q(1, 2), q(0)},
                                       {q(0), q(1, 2), q(0), q(1, 2)},
                                       {q(1, 2), q(0), q(1, 2), q(0)},
                                       {q(1, 2), q(0), q(0), q(1, 2)}};
  return ni;
}

NamedInstance not_optimal() {
  Builder s({"i1", "i2", "i3"}, {"A", "B", "C"});
  s.proto({{"i1", "i2", "i3"}});
  s.doctor("i1", {"A", "B", "C"});
  s.doctor("i2", {"A", "C", "B"});
  s.doctor("i3", {"C", "A", "B"});
  for (const char* hosp : {"A", "B", "C"}) s.strict(hosp, {"i1"});
  NamedInstance ni{"not-optimal", "Doctors-first is not doctor-optimal", {}, {}, {}, {}};
  ni.cases.push_back({"main", s.make()});
  ni.matrices["main/hospitals-first"] = {
      {q(1, 2), q(1, 2), q(0)}, {q(1, 2), q(1, 4), q(1, 4)}, {q(0), q(1, 4), q(3, 4)}};
  ni.matrices["main/doctors-first"] = {
      {q(1, 3), q(2, 3), q(0)}, {q(1, 3), q(1, 6), q(1, 2)}, {q(1, 3), q(1, 6), q(1, 2)}};
  return ni;
}

// Six doctors i, j, k, l, x, y and hospitals A-F shared by both doctors-propose impossibility instances.
void six_doctor_prefs(Builder& s) {
  s.doctor("i", {"A", "B", "C", "D", "E", "F"});
  s.doctor("j", {"F", "A", "B", "C", "D", "E"});
  s.doctor("k", {"A", "B", "C", "D", "E", "F"});
  s.doctor("l", {"E", "A", "B", "C", "D", "F"});
  s.doctor("x", {"F", "D", "A", "B", "C", "E"});
  s.doctor("y", {"E", "C", "A", "B", "D", "F"});
}

const Names kSix = {"i", "j", "k", "l", "x", "y"};
const Names kSixH = {"A", "B", "C", "D", "E", "F"};

NamedInstance imposs_unfair_ladp() {
  NamedInstance ni{"imposs-unfair-ladp", "Doctors propose, unfair hospital preferences", {}, {}, {}, {}};
  for (int c = 1; c <= 2; ++c) {
    Builder s(kSix, kSixH);
    s.proto({{"i", "j"}, {"k", "l"}});
    six_doctor_prefs(s);
    s.det("A", {"j", "k", "i", "l", "x", "y"});
    s.det("B", {"j", "k", "i", "l", "x", "y"});
    s.det("C", {"y", "x", "j", "k", "i", "l"});
    s.det("D", {"y", "x", "j", "k", "i", "l"});
    if (c == 1) {
      s.det("F", {"j", "x", "k", "i", "l", "y"});
      s.det("E", {"l", "y", "k", "i", "j", "x"});
      ni.distributions["case-1/pi-star"] =
          point(s.matching({{"k", "A"}, {"i", "B"}, {"y", "C"}, {"x", "D"}, {"l", "E"}, {"j", "F"}}));
    } else {
      s.det("F", {"x", "j", "k", "i", "l", "y"});
      s.det("E", {"y", "l", "k", "i", "j", "x"});
    }
    ni.cases.push_back({"case-" + std::to_string(c), s.make()});
  }
  return ni;
}

NamedInstance imposs_metric_ladp() {
  NamedInstance ni{"imposs-metric-ladp", "Doctors propose, general metric, mutual-replacement-IF preferences", {}, {}, {}, {}};
  const Names jkil = {"j", "k", "i", "l"};
  for (int c = 1; c <= 2; ++c) {
    Builder s(kSix, kSixH);
    s.general({{"k", "l", q(1, 3)}, {"i", "j", q(1, 3)}});
    six_doctor_prefs(s);
    s.tilde("A", {}, jkil, {"x", "y"});
    s.tilde("B", {}, jkil, {"x", "y"});
    s.tilde("C", {"y", "x"}, jkil, {});
    s.tilde("D", {"x", "y"}, jkil, {});
    if (c == 1) {
      s.tilde("F", {}, jkil, {"x", "y"});
      s.tilde("E", {}, {"l", "j", "k", "i"}, {"x", "y"});
      ni.distributions["case-1/pi-star"] =
          point(s.matching({{"k", "A"}, {"i", "B"}, {"y", "C"}, {"x", "D"}, {"l", "E"}, {"j", "F"}}));
    } else {
      s.tilde("F", {"x"}, jkil, {"y"});
      s.tilde("E", {"y"}, {"l", "j", "k", "i"}, {"x"});
      ni.distributions["case-2/a-to-k"] =
          point(s.matching({{"k", "A"}, {"i", "B"}, {"j", "C"}, {"l", "D"}, {"y", "E"}, {"x", "F"}}));
      ni.witnesses.push_back({1, "case-2/a-to-k", alternative(s, "A", {{"i", q(1, 3)}, {"j", q(2, 3)}})});
    }
    ni.cases.push_back({"case-" + std::to_string(c), s.make()});
  }
  return ni;
}

// Hospitals-propose impossibility family. beta = 0 gives the four-doctor instance.
NamedInstance lahp_family(bool general_metric, int beta, const std::string& key) {
  NamedInstance ni{key,
                   general_metric ? "Hospitals propose, general metric, mutual-replacement-IF preferences"
                                  : "Hospitals propose, unfair hospital preferences",
                   {}, {}, {}, {}};
  Names docs = {"i", "j", "k", "l"}, hosps = {"A", "B", "C", "D"};
  Names dm, hm;
  for (int m = 1; m <= beta; ++m) {
    dm.push_back("d" + std::to_string(m));
    hm.push_back("H" + std::to_string(m));
  }
  docs.insert(docs.end(), dm.begin(), dm.end());
  hosps.insert(hosps.end(), hm.begin(), hm.end());
  auto cat = [](Names a, const Names& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };
  for (int c = 1; c <= 2; ++c) {
    Builder s(docs, hosps);
    if (general_metric) {
      s.general({{"i", "j", q(1, 3)}, {"k", "l", q(1, 3)}});
    } else {
      s.proto({{"i", "j"}, {"k", "l"}});
    }
    if (general_metric && beta > 0) {
      s.doctor("i", cat(cat({"A", "B", "C"}, hm), {"D"}));
    } else {
      s.doctor("i", cat({"A", "B", "C", "D"}, hm));
    }
    s.doctor("k", cat({"A", "B", "C", "D"}, hm));
    for (int m = 1; m <= beta; ++m) {
      Names order = {"A", hm[m - 1]};
      for (int o = 1; o <= beta; ++o) {
        if (o != m) order.push_back(hm[o - 1]);
      }
      s.doctor(dm[m - 1], cat(order, {"B", "C", "D"}));
    }
    if (c == 1) {
      s.doctor("j", cat({"A", "B", "C", "D"}, hm));
      s.doctor("l", cat({"A", "B", "D", "C"}, hm));
    } else {
      s.doctor("j", cat({"D", "A", "B", "C"}, hm));
      s.doctor("l", cat({"C", "B", "A", "D"}, hm));
    }
    auto others = [&](int m) {
      Names order = {dm[m - 1]};
      for (int o = 1; o <= beta; ++o) {
        if (o != m) order.push_back(dm[o - 1]);
      }
      return order;
    };
    if (general_metric) {
      s.tilde("A", {}, {"j", "k", "i", "l"}, dm);
      s.tilde("B", {}, {"j", "k", "i", "l"}, dm);
      s.tilde("C", {}, {"k", "j", "l", "i"}, dm);
      s.tilde("D", dm, {"j", "l", "i", "k"}, {});
      for (int m = 1; m <= beta; ++m) s.tilde(hm[m - 1], others(m), {"i", "k", "j", "l"}, {});
    } else {
      s.det("A", cat({"j", "k", "i", "l"}, dm));
      s.det("B", cat({"j", "k", "i", "l"}, dm));
      s.det("C", cat({"k", "j", "l", "i"}, dm));
      s.det("D", cat(dm, {"j", "l", "i", "k"}));
      for (int m = 1; m <= beta; ++m) s.det(hm[m - 1], cat(others(m), {"i", "k", "j", "l"}));
    }
    std::vector<std::pair<std::string, std::string>> base;
    for (int m = 1; m <= beta; ++m) base.emplace_back(dm[m - 1], hm[m - 1]);
    if (c == 1 && beta == 0 && !general_metric) {
      auto with = [&](std::vector<std::pair<std::string, std::string>> p) {
        p.insert(p.end(), base.begin(), base.end());
        return s.matching(p);
      };
      ni.distributions["case-1/pi-star"] = halves(with({{"i", "A"}, {"j", "B"}, {"k", "C"}, {"l", "D"}}),
                                                  with({{"j", "A"}, {"i", "B"}, {"k", "C"}, {"l", "D"}}));
      ni.distributions["case-1/a-to-k"] = point(with({{"k", "A"}, {"i", "B"}, {"j", "C"}, {"l", "D"}}));
      ni.distributions["case-1/a-to-kl"] = halves(with({{"k", "A"}, {"i", "B"}, {"j", "C"}, {"l", "D"}}),
                                                  with({{"l", "A"}, {"j", "B"}, {"i", "C"}, {"k", "D"}}));
      auto nu = alternative(s, "A", {{"i", q(1, 2)}, {"j", q(1, 2)}});
      ni.witnesses.push_back({0, "case-1/a-to-k", nu});
      ni.witnesses.push_back({0, "case-1/a-to-kl", nu});
    }
    if (c == 2) {
      auto p = base;
      p.insert(p.end(), {{"k", "A"}, {"j", "D"}, {"l", "C"}, {"i", "B"}});
      ni.distributions["case-2/pi-star"] = point(s.matching(p));
    }
    ni.cases.push_back({"case-" + std::to_string(c), s.make()});
  }
  return ni;
}

int beta_of(const Prob& alpha) {
  if (alpha <= 0 || alpha > 1) throw std::invalid_argument("alpha must lie in (0, 1]");
  mpz_class num = alpha.get_den();
  mpz_class den = alpha.get_num();
  mpz_class beta = (num + den - 1) / den;
  if (beta > 64) throw std::invalid_argument("alpha too small: more than 64 auxiliary doctors");
  return static_cast<int>(beta.get_si());
}

NamedInstance tilde_prefs() {
  Builder s({"d1", "d2", "d3", "d4"}, {"h1", "h2", "h3", "h4"});
  s.general({{"d1", "d3", q(1, 3)}, {"d2", "d4", q(1, 3)}});
  for (const char* doc : {"d1", "d2", "d3", "d4"}) s.doctor(doc, {"h1", "h2", "h3", "h4"});
  for (const char* hosp : {"h1", "h2", "h3", "h4"}) s.tilde(hosp, {}, {"d1", "d2", "d3", "d4"}, {});
  NamedInstance ni{"tilde-prefs", "Mutual-replacement-IF distribution over four doctors", {}, {}, {}, {}};
  ni.cases.push_back({"main", s.make()});
  std::vector<Prob> tail = {q(1, 6), q(2, 9), q(5, 18), q(1, 3)};
  ni.matrices["main/rank"] = {{q(1, 2), q(1, 3), q(1, 6), q(0)}, tail, tail, tail};
  return ni;
}

const Prob kDefaultAlpha(1, 2);

}  // namespace

NamedInstance build_unfair_lahp_alpha(const Prob& alpha) {
  return lahp_family(false, beta_of(alpha), "imposs-unfair-lahp-alpha(" + format_prob(alpha) + ")");
}

NamedInstance build_metric_lahp_alpha(const Prob& alpha) {
  return lahp_family(true, beta_of(alpha), "imposs-metric-lahp-alpha(" + format_prob(alpha) + ")");
}

std::vector<std::string> catalog_keys() {
  return {"gs-doctor-compose",
          "gs-hospital-compose",
          "nonconv-hospitals-first",
          "nonconv-doctors-first",
          "algs-differ",
          "not-optimal",
          "imposs-unfair-ladp",
          "imposs-unfair-lahp",
          "imposs-unfair-lahp-alpha(" + format_prob(kDefaultAlpha) + ")",
          "imposs-metric-ladp",
          "imposs-metric-lahp",
          "imposs-metric-lahp-alpha(" + format_prob(kDefaultAlpha) + ")",
          "tilde-prefs"};
}

NamedInstance build(const std::string& key) {
  std::string base = key;
  std::optional<Prob> alpha;
  if (auto open = key.find('('); open != std::string::npos) {
    if (key.back() != ')') throw std::invalid_argument("malformed catalog key: " + key);
    base = key.substr(0, open);
    alpha = parse_prob(key.substr(open + 1, key.size() - open - 2));
  } else if (auto colon = key.find(':'); colon != std::string::npos) {
    base = key.substr(0, colon);
    alpha = parse_prob(key.substr(colon + 1));
  }
  if (base == "imposs-unfair-lahp-alpha") return build_unfair_lahp_alpha(alpha.value_or(kDefaultAlpha));
  if (base == "imposs-metric-lahp-alpha") return build_metric_lahp_alpha(alpha.value_or(kDefaultAlpha));
  if (alpha) throw std::invalid_argument("catalog key takes no parameter: " + base);
  if (base == "gs-doctor-compose") return gs_doctor_compose();
  if (base == "gs-hospital-compose") return gs_hospital_compose();
  if (base == "nonconv-hospitals-first") return nonconv_hospitals_first();
  if (base == "nonconv-doctors-first") return nonconv_doctors_first();
  if (base == "algs-differ") return algs_differ();
  if (base == "not-optimal") return not_optimal();
  if (base == "imposs-unfair-ladp") return imposs_unfair_ladp();
  if (base == "imposs-unfair-lahp") return lahp_family(false, 0, "imposs-unfair-lahp");
  if (base == "imposs-metric-ladp") return imposs_metric_ladp();
  if (base == "imposs-metric-lahp") return lahp_family(true, 0, "imposs-metric-lahp");
  if (base == "tilde-prefs") return tilde_prefs();
  throw std::invalid_argument("unknown catalog key: " + key);
}

// ---------------------------------------------------------------- random instances

namespace {

Partition random_partition(int n, const std::vector<int>& cluster_sizes, std::mt19937_64& rng) {
  std::vector<int> sizes = cluster_sizes;
  if (sizes.empty()) {
    int k = std::uniform_int_distribution<int>(1, n)(rng);
    std::vector<int> cuts(n - 1);
    std::iota(cuts.begin(), cuts.end(), 1);
    std::shuffle(cuts.begin(), cuts.end(), rng);
    cuts.resize(k - 1);
    std::sort(cuts.begin(), cuts.end());
    int prev = 0;
    for (int c : cuts) {
      sizes.push_back(c - prev);
      prev = c;
    }
    sizes.push_back(n - prev);
  }
  if (std::accumulate(sizes.begin(), sizes.end(), 0) != n ||
      std::any_of(sizes.begin(), sizes.end(), [](int s) { return s < 1; })) {
    throw std::invalid_argument("cluster sizes must be positive and sum to n");
  }
  std::vector<int> docs(n);
  std::iota(docs.begin(), docs.end(), 0);
  std::shuffle(docs.begin(), docs.end(), rng);
  Partition part;
  int at = 0;
  for (int s : sizes) {
    std::vector<int> c(docs.begin() + at, docs.begin() + at + s);
    std::sort(c.begin(), c.end());
    part.push_back(c);
    at += s;
  }
  return part;
}

Instance random_skeleton(int n, const std::vector<int>& cluster_sizes, std::mt19937_64& rng) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  Instance inst;
  for (int x = 0; x < n; ++x) {
    inst.doctors.push_back("d" + std::to_string(x));
    inst.hospitals.push_back("h" + std::to_string(x));
  }
  inst.metric = Metric::proto(random_partition(n, cluster_sizes, rng), n);
  for (int x = 0; x < n; ++x) {
    Ranking r(n);
    std::iota(r.begin(), r.end(), 0);
    std::shuffle(r.begin(), r.end(), rng);
    inst.doctor_prefs.push_back(r);
  }
  return inst;
}

std::vector<int> random_cluster_order(int k, std::mt19937_64& rng) {
  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

}  // namespace

Instance random_instance(int n, const std::vector<int>& cluster_sizes, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Instance inst = random_skeleton(n, cluster_sizes, rng);
  const Partition& part = inst.metric.clusters();
  for (int h = 0; h < n; ++h) {
    inst.hospital_prefs.push_back(
        HospitalPrefModel::strict_if(random_cluster_order(static_cast<int>(part.size()), rng), part));
  }
  inst.finalize();
  return inst;
}

Instance random_rank_if_instance(int n, const std::vector<int>& cluster_sizes, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Instance inst = random_skeleton(n, cluster_sizes, rng);
  const Partition& part = inst.metric.clusters();
  const Prob first_weights[] = {Prob(1, 4), Prob(1, 3), Prob(1, 2)};
  for (int h = 0; h < n; ++h) {
    const int k = static_cast<int>(part.size());
    Prob w = first_weights[std::uniform_int_distribution<int>(0, 2)(rng)];
    std::vector<WeightedOrder> support;
    for (const Prob& weight : {w, Prob(Prob(1) - w)}) {
      auto tmpl = HospitalPrefModel::strict_if(random_cluster_order(k, rng), part);
      for (auto& wo : tmpl.expand(1000000)) support.push_back(WeightedOrder{wo.order, wo.weight * weight});
    }
    inst.hospital_prefs.push_back(HospitalPrefModel::explicit_support(std::move(support)));
  }
  inst.finalize();
  return inst;
}

}  // namespace fairmatch
