#include "fairmatch/cli.hpp"

#include "fairmatch/fairness.hpp"
#include "fairmatch/instances.hpp"
#include "fairmatch/io.hpp"
#include "fairmatch/mechanisms.hpp"
#include "fairmatch/stability.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace fairmatch {

namespace {

struct Options {
  std::string alg;
  std::string property;
  std::string input;
  std::string instance_key;
  std::string case_label;
  std::string allocation;
  std::string output;
  std::string tau_text = "1/64";
  std::string side = "doctors";
  std::string matrix_file;
  std::string key;
  bool json = false;
  bool trace = false;
};

struct Loaded {
  Instance inst;
  std::optional<NamedInstance> named;
  std::string case_label;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write file: " + path);
  out << text;
}

Loaded load_instance(const Options& o) {
  if (o.input.empty() == o.instance_key.empty()) {
    throw std::invalid_argument("exactly one of --input or --instance is required");
  }
  Loaded l;
  if (!o.input.empty()) {
    l.inst = parse_instance(read_file(o.input));
    return l;
  }
  l.named = build(o.instance_key);
  const NamedCase& c = o.case_label.empty() ? l.named->cases.front() : l.named->find_case(o.case_label);
  l.inst = c.instance;
  l.case_label = c.label;
  return l;
}

MatchingDistribution load_allocation(const Options& o, const Loaded& l) {
  if (o.allocation.empty()) throw std::invalid_argument("--allocation is required for this property");
  std::ifstream probe(o.allocation);
  if (probe || !l.named) return parse_allocation(read_file(o.allocation), l.inst);
  for (const std::string& name : {o.allocation, l.case_label + "/" + o.allocation}) {
    auto it = l.named->distributions.find(name);
    if (it != l.named->distributions.end()) return it->second;
  }
  throw std::invalid_argument("--allocation: no file or catalog allocation named \"" + o.allocation + "\"");
}

Prob parse_tau(const std::string& text) {
  Prob tau;
  try {
    tau = parse_prob(text);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("--tau: ") + e.what());
  }
  if (tau <= 0) throw std::invalid_argument("--tau must be positive");
  return tau;
}

std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

std::string matching_text(const Matching& m, const Instance& inst) {
  std::string s;
  for (int d = 0; d < inst.n(); ++d) {
    if (d) s += ' ';
    s += inst.doctors[d] + "->" + inst.hospitals[m[d]];
  }
  return s;
}

std::string law_text(const MatchingDistribution& md, const Instance& inst) {
  std::string s;
  for (const auto& wm : md.parts) s += "  " + format_prob(wm.weight) + "  " + matching_text(wm.matching, inst) + "\n";
  return s;
}

std::string labeled_matrix(const AllocationMatrix& P, const std::vector<std::string>& rows,
                           const std::vector<std::string>& cols) {
  std::size_t w = 1, lw = 1;
  for (const auto& r : rows) lw = std::max(lw, r.size());
  for (const auto& c : cols) w = std::max(w, c.size());
  for (const auto& row : P) {
    for (const auto& v : row) w = std::max(w, format_prob(v).size());
  }
  auto pad = [](const std::string& s, std::size_t width) { return std::string(width - s.size(), ' ') + s; };
  std::string out = "  " + std::string(lw, ' ');
  for (const auto& c : cols) out += ' ' + pad(c, w);
  out += '\n';
  for (std::size_t r = 0; r < P.size(); ++r) {
    out += "  " + pad(rows[r], lw);
    for (const auto& v : P[r]) out += ' ' + pad(format_prob(v), w);
    out += '\n';
  }
  return out;
}

bool same_law(const MatchingDistribution& a, const MatchingDistribution& b) {
  auto law = [](const MatchingDistribution& md) {
    std::map<Matching, Prob> m;
    for (const auto& wm : md.parts) m[wm.matching] += wm.weight;
    return m;
  };
  return law(a) == law(b);
}

Prob max_abs_diff(const AllocationMatrix& a, const AllocationMatrix& b) {
  if (a.size() != b.size()) return Prob(1);
  Prob worst = 0;
  for (std::size_t r = 0; r < a.size(); ++r) {
    for (std::size_t c = 0; c < a[r].size(); ++c) worst = max_of(worst, abs_of(a[r][c] - b[r][c]));
  }
  return worst;
}

Json nu_json(const AlternativeAllocation& nu, const Instance& inst) {
  Json j;
  j["h"] = inst.hospitals[nu.h];
  Json d = Json::array();
  Json s = Json::object();
  for (int x : nu.doctors) {
    d.push_back(inst.doctors[x]);
    s[inst.doctors[x]] = format_prob(nu.sigma[x]);
  }
  j["doctors"] = d;
  j["sigma"] = s;
  return j;
}

std::string nu_text(const AlternativeAllocation& nu, const Instance& inst) {
  std::string s = "(" + inst.hospitals[nu.h] + ", {";
  for (std::size_t k = 0; k < nu.doctors.size(); ++k) {
    if (k) s += ", ";
    s += inst.doctors[nu.doctors[k]] + ":" + format_prob(nu.sigma[nu.doctors[k]]);
  }
  return s + "})";
}

bool same_nu(const AlternativeAllocation& a, const AlternativeAllocation& b) {
  return a.h == b.h && a.doctors == b.doctors && a.sigma == b.sigma;
}

// ---------------------------------------------------------------- solve

int run_solve(const Options& o, std::ostream& out) {
  const bool propose = o.alg == "hospitals-first" || o.alg == "doctors-first";
  Prob tau = propose ? parse_tau(o.tau_text) : Prob(0);
  Loaded l = load_instance(o);
  const Instance& inst = l.inst;
  const EnumLimits limits = EnumLimits::from_env();
  const ProposingSide side = o.side == "hospitals" ? ProposingSide::Hospitals : ProposingSide::Doctors;

  MatchingDistribution md;
  std::optional<RoundTrace> trace;
  if (o.alg == "gs") {
    std::vector<Ranking> orders;
    for (int h = 0; h < inst.n(); ++h) {
      if (inst.hospital_prefs[h].kind() != HospitalPrefModel::Kind::Deterministic) {
        throw std::invalid_argument("hospital_prefs." + inst.hospitals[h] +
                                    ": gs needs deterministic preferences (use sampled-gs)");
      }
      orders.push_back(inst.hospital_prefs[h].order());
    }
    md.parts.push_back(WeightedMatching{Prob(1), gale_shapley(inst.doctor_prefs, orders, side)});
  } else if (o.alg == "sampled-gs") {
    md = compose_sample_gs(inst, side, limits);
  } else if (propose) {
    ProposeOptions po;
    po.tau = tau;
    MechanismResult r = o.alg == "hospitals-first" ? hospitals_first(inst, po) : doctors_first(inst, po);
    md = std::move(r.dist);
    trace = std::move(r.trace);
  } else {
    md = global_stability_solve(inst, limits).dist;
  }

  const RoundTrace* tp = (o.trace && trace) ? &*trace : nullptr;
  if (!o.output.empty()) write_file(o.output, serialize_allocation(md, inst, tp));
  if (o.json) {
    out << serialize_allocation(md, inst, tp);
    return 0;
  }
  out << "matchings:\n" << law_text(md, inst);
  out << "marginals:\n" << labeled_matrix(marginals(md, inst.n()), inst.doctors, inst.hospitals);
  if (tp) {
    out << "rounds: " << tp->rounds.size() << (tp->capped ? " (capped)" : "") << "\n";
    for (std::size_t r = 0; r < tp->rounds.size(); ++r) {
      out << "  round " << r + 1 << ": free mass " << format_prob(tp->rounds[r].free_mass) << "\n";
    }
    out << "leftover: " << format_prob(tp->leftover) << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------- verify

struct Report {
  std::string property;
  bool pass = true;
  std::string detail;
  Json witness;
};

Report fairness_report(const std::string& property, const FairnessVerdict& v, const Instance& inst,
                       const std::string& what) {
  Report r{property, v.pass, {}, nullptr};
  if (v.witness) {
    const auto& w = *v.witness;
    r.witness = Json{{"i", inst.doctors[w.i]}, {"j", inst.doctors[w.j]}, {"value", format_prob(w.value)},
                     {"bound", format_prob(w.bound)}};
    if (w.rank > 0) r.witness["rank"] = w.rank;
    r.detail = "(" + inst.doctors[w.i] + ", " + inst.doctors[w.j] + ") " + what + " " + format_prob(w.value) +
               " > " + format_prob(w.bound) + (w.rank > 0 ? " at k=" + std::to_string(w.rank) : "");
  }
  return r;
}

Report prefs_report(const std::string& property, const Instance& inst) {
  for (int h = 0; h < inst.n(); ++h) {
    const HospitalPrefModel& m = inst.hospital_prefs[h];
    if (property == "strict-if-prefs") {
      if (!validate_strict_if(m, inst.metric)) {
        return Report{property, false, "(" + inst.hospitals[h] + ")", Json{{"hospital", inst.hospitals[h]}}};
      }
      continue;
    }
    FairnessVerdict v = property == "rank-if-prefs" ? check_rank_if(m, inst.metric)
                                                    : check_mutual_replacement_if(m, inst.metric);
    if (!v.pass) {
      Report r = fairness_report(property, v, inst, "distance");
      r.witness["hospital"] = inst.hospitals[h];
      r.detail = inst.hospitals[h] + ": " + r.detail;
      return r;
    }
  }
  return Report{property, true, {}, nullptr};
}

Report allocation_report(const std::string& property, const Prob& tau, const Instance& inst,
                         const MatchingDistribution& md) {
  const EnumLimits limits = EnumLimits::from_env();
  const AllocationMatrix P = marginals(md, inst.n());
  if (property == "if") return fairness_report(property, check_if(P, inst.metric), inst, "distance");
  if (property == "ef") return fairness_report(property, check_ef(P, inst.doctor_prefs), inst, "deficit");
  if (property == "piif") {
    return fairness_report(property, check_piif(P, inst.metric, inst.doctor_prefs), inst, "deficit");
  }
  if (property == "tau-piif") {
    return fairness_report(property, check_tau_piif(P, inst.metric, inst.doctor_prefs, tau), inst, "deficit");
  }
  if (property == "contract") {
    auto active = active_contracts(md, inst);
    Report r{property, active.empty(), {}, nullptr};
    if (!active.empty()) {
      const Contract& c = active.front();
      r.witness = Json{{"h", inst.hospitals[c.h]}, {"i", inst.doctors[c.i]}, {"h2", inst.hospitals[c.h2]},
                       {"i2", inst.doctors[c.i2]}};
      r.detail = "(" + inst.hospitals[c.h] + ", " + inst.doctors[c.i] + "; " + inst.hospitals[c.h2] + ", " +
                 inst.doctors[c.i2] + ") and " + std::to_string(active.size() - 1) + " more";
    }
    return r;
  }
  if (property == "tau-contract") {
    Prob mass = contract_instability_mass(md, inst);
    Report r{property, mass <= tau, {}, nullptr};
    r.witness = Json{{"mass", format_prob(mass)}, {"tau", format_prob(tau)}};
    r.detail = "instability mass " + format_prob(mass) + (mass <= tau ? " <= " : " > ") + format_prob(tau);
    return r;
  }
  if (property == "weak-ex-ante") {
    WeakStabilityVerdict v = check_weak_ex_ante(md, inst, limits);
    Report r{property, v.status == StabilityStatus::Stable, {}, nullptr};
    if (v.witness) {
      r.witness = nu_json(*v.witness, inst);
      r.detail = nu_text(*v.witness, inst);
    }
    return r;
  }
  LocalStabilityVerdict v = check_local_stability(md, inst, limits);
  Report r{property, v.pass, {}, nullptr};
  r.witness = Json{{"coupled_mass", format_prob(v.coupled_mass)}, {"profiles", v.profiles}};
  r.detail = "coupled mass " + format_prob(v.coupled_mass) + " over " + std::to_string(v.profiles) + " profiles";
  return r;
}

int run_verify(const Options& o, std::ostream& out) {
  const bool prefs_only = o.property == "strict-if-prefs" || o.property == "rank-if-prefs" ||
                          o.property == "mr-if-prefs";
  const bool uses_tau = o.property == "tau-piif" || o.property == "tau-contract";
  Prob tau = uses_tau ? parse_tau(o.tau_text) : Prob(0);
  if (!prefs_only && o.allocation.empty()) throw std::invalid_argument("--allocation is required for this property");
  Loaded l = load_instance(o);
  Report r = prefs_only ? prefs_report(o.property, l.inst)
                        : allocation_report(o.property, tau, l.inst, load_allocation(o, l));
  if (o.json) {
    Json j{{"property", r.property}, {"pass", r.pass}};
    j["witness"] = r.witness;
    out << j.dump(2) << "\n";
  } else {
    out << upper(r.property) << ": " << (r.pass ? "PASS" : "FAIL");
    if (!r.detail.empty()) out << " " << r.detail;
    out << "\n";
  }
  return r.pass ? 0 : 1;
}

// ---------------------------------------------------------------- decompose

int run_decompose(const Options& o, std::ostream& out) {
  AllocationMatrix P = parse_matrix(read_file(o.matrix_file));
  std::optional<Loaded> l;
  if (!o.input.empty() || !o.instance_key.empty()) {
    l = load_instance(o);
    if (l->inst.n() != static_cast<int>(P.size())) throw std::invalid_argument("matrix size does not match the instance");
  }
  MatchingDistribution md = bvn_decompose(P);
  if (l) {
    out << (o.json ? serialize_allocation(md, l->inst) : law_text(md, l->inst));
    return 0;
  }
  if (o.json) {
    Json parts = Json::array();
    for (const auto& wm : md.parts) parts.push_back(Json{{"weight", format_prob(wm.weight)}, {"permutation", wm.matching}});
    out << Json{{"matchings", parts}}.dump(2) << "\n";
    return 0;
  }
  for (const auto& wm : md.parts) {
    out << "  " << format_prob(wm.weight) << " ";
    for (int h : wm.matching) out << " " << h;
    out << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------- reproduce

struct Check {
  std::string name;
  bool match = false;
  std::string detail;
};

struct Reproduction {
  std::string text;
  std::vector<Check> checks;

  void check(std::string name, bool match, std::string detail = {}) {
    checks.push_back(Check{std::move(name), match, std::move(detail)});
  }
};

void reproduce_compose(const NamedInstance& ni, ProposingSide side, const std::string& dist_key, Reproduction& rep) {
  const Instance& inst = ni.only_case().instance;
  MatchingDistribution md = compose_sample_gs(inst, side, EnumLimits::from_env());
  rep.text += "law:\n" + law_text(md, inst);
  rep.check("law matches " + dist_key, same_law(md, ni.distributions.at(dist_key)));
  FairnessVerdict v = check_piif(marginals(md, inst.n()), inst.metric, inst.doctor_prefs);
  if (v.pass) {
    rep.text += "PIIF: PASS\n";
  } else {
    const auto& w = *v.witness;
    rep.text += "PIIF: FAIL (" + inst.doctors[w.i] + ", " + inst.doctors[w.j] + ") deficit " + format_prob(w.value) +
                " at k=" + std::to_string(w.rank) + "\n";
  }
  const bool expected = !v.pass && v.witness->i == inst.doctor_index("i1") && v.witness->j == inst.doctor_index("i2");
  rep.check("PIIF fails on (i1, i2)", expected);
}

void reproduce_nonconv(const NamedInstance& ni, bool hospitals, Reproduction& rep) {
  const Instance& inst = ni.only_case().instance;
  ProposeOptions po;
  po.ignore_tau = true;
  po.max_rounds = 21;
  MechanismResult r = hospitals ? hospitals_first(inst, po) : doctors_first(inst, po);
  const auto& rounds = r.trace.rounds;
  for (std::size_t k = 0; k < rounds.size(); ++k) {
    rep.text += "round " + std::to_string(k + 1) + ": free mass " + format_prob(rounds[k].free_mass) + "\n";
  }
  for (int k = 1; k <= 3; ++k) {
    std::string key = "main/round-" + std::to_string(k);
    bool ok = static_cast<int>(rounds.size()) >= k && rounds[k - 1].matrix == ni.matrices.at(key);
    if (static_cast<int>(rounds.size()) >= k) {
      rep.text += key + ":\n" + labeled_matrix(rounds[k - 1].matrix, inst.doctors, inst.hospitals);
    }
    rep.check(key + " exact", ok);
  }
  bool decay = rounds.size() >= 21;
  for (int k = 0; decay && k <= 10; ++k) {
    Prob expected = rounds[0].free_mass;
    mpz_class scale = 1;
    scale <<= k;
    expected /= scale;
    decay = rounds[2 * k].free_mass == expected;
  }
  rep.check("free mass after round 2k+1 is 2^-k of round 1 (k <= 10)", decay);
}

void reproduce_mechanisms(const NamedInstance& ni, Reproduction& rep, bool domination) {
  const Instance& inst = ni.only_case().instance;
  ProposeOptions po;
  po.tau = Prob(1, 1024);
  const Prob tol = 2 * po.tau;
  AllocationMatrix p1 = hospitals_first(inst, po).matrix;
  AllocationMatrix p2 = doctors_first(inst, po).matrix;
  rep.text += "hospitals-first (tau 1/1024):\n" + labeled_matrix(p1, inst.doctors, inst.hospitals);
  rep.text += "doctors-first (tau 1/1024):\n" + labeled_matrix(p2, inst.doctors, inst.hospitals);
  Prob d1 = max_abs_diff(p1, ni.matrices.at("main/hospitals-first"));
  Prob d2 = max_abs_diff(p2, ni.matrices.at("main/doctors-first"));
  rep.check("hospitals-first within 1/512", d1 <= tol, "max diff " + format_prob(d1));
  rep.check("doctors-first within 1/512", d2 <= tol, "max diff " + format_prob(d2));
  if (!domination) return;
  const auto& e1 = ni.matrices.at("main/hospitals-first");
  const auto& e2 = ni.matrices.at("main/doctors-first");
  bool all = true;
  for (int d = 0; d < inst.n(); ++d) {
    Dominance dom = dominates(doctor_prospect(e1, d), doctor_prospect(e2, d), inst.doctor_prefs[d]);
    rep.text += "  " + inst.doctors[d] + ": hospitals-first vs doctors-first " + to_string(dom) + "\n";
    all = all && dom == Dominance::Strongly;
  }
  rep.check("hospitals-first strongly dominates doctors-first for every doctor", all);
}

void reproduce_impossibility(const NamedInstance& ni, Reproduction& rep) {
  const EnumLimits limits = EnumLimits::from_env();
  std::map<std::string, WeakStabilityVerdict> verdicts;
  for (const auto& [name, md] : ni.distributions) {
    const std::string label = name.substr(0, name.find('/'));
    const Instance& inst = ni.find_case(label).instance;
    WeakStabilityVerdict v = check_weak_ex_ante(md, inst, limits);
    rep.text += name + ": weak ex-ante " + to_string(v.status);
    if (v.witness) rep.text += " " + nu_text(*v.witness, inst);
    rep.text += "\n";
    verdicts[name] = v;
  }
  for (const auto& w : ni.witnesses) {
    const Instance& inst = ni.cases[w.case_index].instance;
    const auto& v = verdicts.at(w.allocation);
    bool ok = v.status == StabilityStatus::Unstable && v.witness && same_nu(*v.witness, w.nu);
    rep.check(w.allocation + " blocked by " + nu_text(w.nu, inst), ok);
  }
}

void reproduce_tilde(const NamedInstance& ni, Reproduction& rep) {
  const Instance& inst = ni.only_case().instance;
  // Rows are ranks, columns doctors.
  AllocationMatrix ranks = zero_matrix(inst.n());
  for (int d = 0; d < inst.n(); ++d) {
    auto dist = inst.hospital_prefs[0].rank_distribution(d);
    for (int r = 0; r < inst.n(); ++r) ranks[r][d] = dist[r];
  }
  std::vector<std::string> rows;
  for (int r = 1; r <= inst.n(); ++r) rows.push_back("rank " + std::to_string(r));
  rep.text += "rank distribution of " + inst.hospitals[0] + ":\n" + labeled_matrix(ranks, rows, inst.doctors);
  rep.check("rank table exact", ranks == ni.matrices.at("main/rank"));
  bool mr = true;
  for (const auto& m : inst.hospital_prefs) mr = mr && check_mutual_replacement_if(m, inst.metric).pass;
  rep.text += std::string("MR-IF-PREFS: ") + (mr ? "PASS" : "FAIL") + "\n";
  rep.check("mutual-replacement IF", mr);
}

int run_reproduce(const Options& o, std::ostream& out) {
  NamedInstance ni = build(o.key);
  Reproduction rep;
  const std::string& k = ni.key;
  if (k == "gs-doctor-compose") {
    reproduce_compose(ni, ProposingSide::Doctors, "main/doctor-propose", rep);
  } else if (k == "gs-hospital-compose") {
    reproduce_compose(ni, ProposingSide::Hospitals, "main/hospital-propose", rep);
  } else if (k == "nonconv-hospitals-first" || k == "nonconv-doctors-first") {
    reproduce_nonconv(ni, k == "nonconv-hospitals-first", rep);
  } else if (k == "algs-differ" || k == "not-optimal") {
    reproduce_mechanisms(ni, rep, k == "not-optimal");
  } else if (k == "tilde-prefs") {
    reproduce_tilde(ni, rep);
  } else {
    reproduce_impossibility(ni, rep);
  }
  bool all = std::all_of(rep.checks.begin(), rep.checks.end(), [](const Check& c) { return c.match; });
  if (o.json) {
    Json checks = Json::array();
    for (const auto& c : rep.checks) checks.push_back(Json{{"name", c.name}, {"match", c.match}, {"detail", c.detail}});
    out << Json{{"key", ni.key}, {"match", all}, {"checks", checks}}.dump(2) << "\n";
  } else {
    out << ni.key << ": " << ni.title << "\n" << rep.text;
    for (const auto& c : rep.checks) {
      out << (c.match ? "match    " : "MISMATCH ") << c.name;
      if (!c.detail.empty()) out << " (" << c.detail << ")";
      out << "\n";
    }
    out << (all ? "expected artifacts reproduced\n" : "expected artifacts NOT reproduced\n");
  }
  return all ? 0 : 1;
}

int run_list(const Options& o, std::ostream& out) {
  Json entries = Json::array();
  for (const auto& key : catalog_keys()) {
    NamedInstance ni = build(key);
    if (o.json) {
      entries.push_back(Json{{"key", key}, {"title", ni.title}});
    } else {
      out << key << "  " << ni.title << "\n";
    }
  }
  if (o.json) out << entries.dump(2) << "\n";
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Fair and stable probabilistic matching toolkit", "fairmatch"};
  app.require_subcommand(1);
  app.add_flag("--json", o.json, "Machine-readable output");

  auto add_instance = [&](CLI::App* sub) {
    sub->add_option("--input", o.input, "Instance JSON file");
    sub->add_option("--instance", o.instance_key, "Catalog key instead of --input");
    sub->add_option("--case", o.case_label, "Case label for multi-case catalog entries");
    sub->add_flag("--json", o.json, "Machine-readable output");
  };

  CLI::App* solve = app.add_subcommand("solve", "Run a mechanism on an instance");
  solve->add_option("--alg", o.alg, "Mechanism")
      ->required()
      ->check(CLI::IsMember({"gs", "sampled-gs", "hospitals-first", "doctors-first", "global"}));
  solve->add_option("--tau", o.tau_text, "Free-mass threshold as p/q")->capture_default_str();
  solve->add_option("--side", o.side, "Proposing side for gs and sampled-gs")
      ->check(CLI::IsMember({"doctors", "hospitals"}))
      ->capture_default_str();
  solve->add_option("--output", o.output, "Write the allocation JSON here");
  solve->add_flag("--trace", o.trace, "Include the round trace");
  add_instance(solve);

  CLI::App* verify = app.add_subcommand("verify", "Check a fairness or stability property");
  verify->add_option("--property", o.property, "Property")
      ->required()
      ->check(CLI::IsMember({"if", "ef", "piif", "tau-piif", "contract", "tau-contract", "weak-ex-ante", "local",
                             "strict-if-prefs", "rank-if-prefs", "mr-if-prefs"}));
  verify->add_option("--allocation", o.allocation, "Allocation JSON file or catalog allocation name");
  verify->add_option("--tau", o.tau_text, "Tolerance as p/q")->capture_default_str();
  add_instance(verify);

  CLI::App* decompose = app.add_subcommand("decompose", "Birkhoff-von Neumann decomposition of a matrix");
  decompose->add_option("matrix", o.matrix_file, "Matrix file (JSON rows or text rows)")->required();
  add_instance(decompose);

  CLI::App* reproduce = app.add_subcommand("reproduce", "Run a catalog entry and diff against its expected artifacts");
  reproduce->add_option("key", o.key, "Catalog key")->required();
  reproduce->add_flag("--json", o.json, "Machine-readable output");

  CLI::App* list = app.add_subcommand("list", "List catalog keys");
  list->add_flag("--json", o.json, "Machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*solve) return run_solve(o, out);
    if (*verify) return run_verify(o, out);
    if (*decompose) return run_decompose(o, out);
    if (*reproduce) return run_reproduce(o, out);
    return run_list(o, out);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::length_error& e) {
    err << "error: " << e.what() << " (raise FAIRMATCH_MAX_ENUM)\n";
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
  }
  return 2;
}

}  // namespace fairmatch
