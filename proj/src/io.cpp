#include "fairmatch/io.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace fairmatch {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw std::invalid_argument(field + ": " + what);
}

const Json& member(const Json& j, const std::string& key, const std::string& field) {
  if (!j.is_object() || !j.contains(key)) fail(field, "missing \"" + key + "\"");
  return j.at(key);
}

Prob rational_from_json(const Json& j, const std::string& field) {
  try {
    if (j.is_string()) return parse_prob(j.get<std::string>());
    if (j.is_number_integer()) return Prob(j.get<long>());
  } catch (const std::invalid_argument& e) {
    fail(field, e.what());
  }
  fail(field, "expected a rational string such as \"1/3\"");
}

Json rational_to_json(const Prob& p) { return format_prob(p); }

std::vector<std::string> id_list(const Json& j, const std::string& field) {
  if (!j.is_array()) fail(field, "expected an array of ids");
  std::vector<std::string> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_string()) fail(field + "[" + std::to_string(k) + "]", "expected a string id");
    out.push_back(j[k].get<std::string>());
  }
  return out;
}

std::vector<int> indices(const std::vector<std::string>& ids, const std::vector<std::string>& universe,
                         const std::string& field) {
  std::vector<int> out;
  for (const auto& id : ids) {
    auto it = std::find(universe.begin(), universe.end(), id);
    if (it == universe.end()) fail(field, "unknown id \"" + id + "\"");
    out.push_back(static_cast<int>(it - universe.begin()));
  }
  return out;
}

Json names(const std::vector<int>& idx, const std::vector<std::string>& universe) {
  Json a = Json::array();
  for (int x : idx) a.push_back(universe[x]);
  return a;
}

HospitalPrefModel hospital_pref_from_json(const Json& j, const Instance& inst, const std::string& field) {
  const std::string type = member(j, "type", field).is_string() ? j.at("type").get<std::string>() : "";
  if (type == "deterministic") {
    return HospitalPrefModel::deterministic(
        indices(id_list(member(j, "order", field), field + ".order"), inst.doctors, field + ".order"));
  }
  if (type == "strict_if") {
    const Json& order = member(j, "order", field);
    if (!order.is_array()) fail(field + ".order", "expected an array of clusters");
    Partition clusters;
    std::vector<int> cluster_order;
    for (std::size_t c = 0; c < order.size(); ++c) {
      std::string f = field + ".order[" + std::to_string(c) + "]";
      clusters.push_back(indices(id_list(order[c], f), inst.doctors, f));
      cluster_order.push_back(static_cast<int>(c));
    }
    try {
      return HospitalPrefModel::strict_if(cluster_order, clusters);
    } catch (const std::invalid_argument& e) {
      fail(field, e.what());
    }
  }
  if (type == "explicit") {
    const Json& support = member(j, "support", field);
    if (!support.is_array()) fail(field + ".support", "expected an array");
    std::vector<WeightedOrder> orders;
    for (std::size_t k = 0; k < support.size(); ++k) {
      std::string f = field + ".support[" + std::to_string(k) + "]";
      Prob w = rational_from_json(member(support[k], "weight", f), f + ".weight");
      orders.push_back(WeightedOrder{indices(id_list(member(support[k], "order", f), f + ".order"), inst.doctors,
                                             f + ".order"),
                                     w});
    }
    try {
      return HospitalPrefModel::explicit_support(std::move(orders));
    } catch (const std::invalid_argument& e) {
      fail(field, e.what());
    }
  }
  fail(field + ".type", "expected \"deterministic\", \"strict_if\" or \"explicit\"");
}

}  // namespace

Instance instance_from_json(const Json& j) {
  if (!j.is_object()) fail("instance", "expected a JSON object");
  Instance inst;
  inst.doctors = id_list(member(j, "doctors", "instance"), "doctors");
  inst.hospitals = id_list(member(j, "hospitals", "instance"), "hospitals");
  const int n = static_cast<int>(inst.doctors.size());
  if (static_cast<int>(inst.hospitals.size()) != n) fail("hospitals", "must have as many entries as doctors");

  const Json& metric = member(j, "metric", "instance");
  const Json& mtype = member(metric, "type", "metric");
  if (mtype == "proto") {
    const Json& cl = member(metric, "clusters", "metric");
    if (!cl.is_array()) fail("metric.clusters", "expected an array of clusters");
    Partition part;
    for (std::size_t c = 0; c < cl.size(); ++c) {
      std::string f = "metric.clusters[" + std::to_string(c) + "]";
      part.push_back(indices(id_list(cl[c], f), inst.doctors, f));
    }
    try {
      inst.metric = Metric::proto(std::move(part), n);
    } catch (const std::invalid_argument& e) {
      fail("metric.clusters", e.what());
    }
  } else if (mtype == "general") {
    const Json& dist = member(metric, "distances", "metric");
    if (!dist.is_array() || static_cast<int>(dist.size()) != n) fail("metric.distances", "expected an n x n array");
    std::vector<std::vector<Prob>> m;
    for (int a = 0; a < n; ++a) {
      std::string f = "metric.distances[" + std::to_string(a) + "]";
      if (!dist[a].is_array() || static_cast<int>(dist[a].size()) != n) fail(f, "expected a row of length n");
      m.emplace_back();
      for (int b = 0; b < n; ++b) m.back().push_back(rational_from_json(dist[a][b], f + "[" + std::to_string(b) + "]"));
    }
    try {
      inst.metric = Metric::general(std::move(m));
    } catch (const std::invalid_argument& e) {
      fail("metric.distances", e.what());
    }
  } else {
    fail("metric.type", "expected \"proto\" or \"general\"");
  }

  const Json& dp = member(j, "doctor_prefs", "instance");
  for (const auto& d : inst.doctors) {
    std::string f = "doctor_prefs." + d;
    inst.doctor_prefs.push_back(indices(id_list(member(dp, d, "doctor_prefs"), f), inst.hospitals, f));
  }
  const Json& hp = member(j, "hospital_prefs", "instance");
  for (const auto& h : inst.hospitals) {
    inst.hospital_prefs.push_back(hospital_pref_from_json(member(hp, h, "hospital_prefs"), inst, "hospital_prefs." + h));
  }
  inst.finalize();
  return inst;
}

Json hospital_pref_to_json(const HospitalPrefModel& model, const Instance& inst) {
  Json j;
  switch (model.kind()) {
    case HospitalPrefModel::Kind::Deterministic:
      j["type"] = "deterministic";
      j["order"] = names(model.order(), inst.doctors);
      break;
    case HospitalPrefModel::Kind::StrictIF: {
      j["type"] = "strict_if";
      Json order = Json::array();
      for (int c : model.cluster_order()) order.push_back(names(model.clusters()[c], inst.doctors));
      j["order"] = order;
      break;
    }
    case HospitalPrefModel::Kind::Explicit: {
      j["type"] = "explicit";
      Json support = Json::array();
      for (const auto& wo : model.support()) {
        Json e;
        e["weight"] = rational_to_json(wo.weight);
        e["order"] = names(wo.order, inst.doctors);
        support.push_back(e);
      }
      j["support"] = support;
      break;
    }
  }
  return j;
}

Json instance_to_json(const Instance& inst) {
  Json j;
  j["doctors"] = inst.doctors;
  j["hospitals"] = inst.hospitals;
  Json metric;
  if (inst.metric.kind() == Metric::Kind::Proto) {
    metric["type"] = "proto";
    Json cl = Json::array();
    for (const auto& c : inst.metric.clusters()) cl.push_back(names(c, inst.doctors));
    metric["clusters"] = cl;
  } else {
    metric["type"] = "general";
    metric["distances"] = matrix_to_json(inst.metric.matrix());
  }
  j["metric"] = metric;
  Json dp = Json::object();
  for (int d = 0; d < inst.n(); ++d) dp[inst.doctors[d]] = names(inst.doctor_prefs[d], inst.hospitals);
  j["doctor_prefs"] = dp;
  Json hp = Json::object();
  for (int h = 0; h < inst.n(); ++h) hp[inst.hospitals[h]] = hospital_pref_to_json(inst.hospital_prefs[h], inst);
  j["hospital_prefs"] = hp;
  return j;
}

Instance parse_instance(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail("instance", std::string("invalid JSON: ") + e.what());
  }
  return instance_from_json(j);
}

std::string serialize_instance(const Instance& inst) { return instance_to_json(inst).dump(2) + "\n"; }

Json matching_to_json(const Matching& m, const Instance& inst) {
  Json j = Json::object();
  for (int d = 0; d < inst.n(); ++d) j[inst.doctors[d]] = inst.hospitals[m[d]];
  return j;
}

Json matrix_to_json(const AllocationMatrix& P) {
  Json rows = Json::array();
  for (const auto& row : P) {
    Json r = Json::array();
    for (const auto& v : row) r.push_back(rational_to_json(v));
    rows.push_back(r);
  }
  return rows;
}

Json trace_to_json(const RoundTrace& trace, const Instance& inst) {
  const bool doctors = trace.side == ProposingSide::Doctors;
  auto target = [&](int t) -> Json {
    if (doctors) return inst.hospitals[t];
    return names(inst.metric.clusters()[t], inst.doctors);
  };
  auto transfers = [&](const std::vector<Transfer>& v) {
    Json a = Json::array();
    for (const auto& t : v) {
      Json e;
      e["source"] = doctors ? inst.doctors[t.source] : inst.hospitals[t.source];
      e["target"] = target(t.target);
      e["mass"] = rational_to_json(t.mass);
      a.push_back(e);
    }
    return a;
  };
  Json j;
  j["proposers"] = doctors ? "doctors" : "hospitals";
  Json rounds = Json::array();
  for (const auto& r : trace.rounds) {
    Json e;
    e["proposals"] = transfers(r.proposals);
    e["rejections"] = transfers(r.rejections);
    e["free_mass"] = rational_to_json(r.free_mass);
    rounds.push_back(e);
  }
  j["rounds"] = rounds;
  j["leftover"] = rational_to_json(trace.leftover);
  j["capped"] = trace.capped;
  return j;
}

Json allocation_to_json(const MatchingDistribution& md, const Instance& inst, const RoundTrace* trace) {
  Json j;
  Json parts = Json::array();
  for (const auto& wm : md.parts) {
    Json e;
    e["weight"] = rational_to_json(wm.weight);
    e["map"] = matching_to_json(wm.matching, inst);
    parts.push_back(e);
  }
  j["matchings"] = parts;
  j["marginals"] = matrix_to_json(marginals(md, inst.n()));
  if (trace) j["trace"] = trace_to_json(*trace, inst);
  return j;
}

std::string serialize_allocation(const MatchingDistribution& md, const Instance& inst, const RoundTrace* trace) {
  return allocation_to_json(md, inst, trace).dump(2) + "\n";
}

namespace {

AllocationMatrix matrix_from_json(const Json& j, const std::string& field) {
  if (!j.is_array()) fail(field, "expected an array of rows");
  AllocationMatrix P;
  for (std::size_t r = 0; r < j.size(); ++r) {
    std::string f = field + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].size() != j.size()) fail(f, "expected a square matrix");
    P.emplace_back();
    for (std::size_t c = 0; c < j[r].size(); ++c) P.back().push_back(rational_from_json(j[r][c], f + "[" + std::to_string(c) + "]"));
  }
  return P;
}

}  // namespace

MatchingDistribution allocation_from_json(const Json& j, const Instance& inst) {
  const int n = inst.n();
  if (!j.is_object()) fail("allocation", "expected a JSON object");
  if (j.contains("matchings")) {
    const Json& parts = j.at("matchings");
    if (!parts.is_array()) fail("matchings", "expected an array");
    MatchingDistribution md;
    for (std::size_t k = 0; k < parts.size(); ++k) {
      std::string f = "matchings[" + std::to_string(k) + "]";
      Prob w = rational_from_json(member(parts[k], "weight", f), f + ".weight");
      const Json& map = member(parts[k], "map", f);
      if (!map.is_object()) fail(f + ".map", "expected an object doctor -> hospital");
      Matching m(n, -1);
      for (int d = 0; d < n; ++d) {
        const Json& h = member(map, inst.doctors[d], f + ".map");
        if (!h.is_string()) fail(f + ".map." + inst.doctors[d], "expected a hospital id");
        m[d] = indices({h.get<std::string>()}, inst.hospitals, f + ".map." + inst.doctors[d]).front();
      }
      if (map.size() != static_cast<std::size_t>(n)) fail(f + ".map", "unexpected extra entries");
      md.parts.push_back(WeightedMatching{w, m});
    }
    try {
      md.validate(n);
    } catch (const std::invalid_argument& e) {
      fail("matchings", e.what());
    }
    return md;
  }
  if (j.contains("marginals")) {
    AllocationMatrix P = matrix_from_json(j.at("marginals"), "marginals");
    if (static_cast<int>(P.size()) != n) fail("marginals", "size does not match the instance");
    try {
      return bvn_decompose(P);
    } catch (const std::invalid_argument& e) {
      fail("marginals", e.what());
    }
  }
  fail("allocation", "expected \"matchings\" or \"marginals\"");
}

MatchingDistribution parse_allocation(const std::string& text, const Instance& inst) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail("allocation", std::string("invalid JSON: ") + e.what());
  }
  return allocation_from_json(j, inst);
}

AllocationMatrix parse_matrix(const std::string& text) {
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (text[first] == '[' || text[first] == '{')) {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const Json::parse_error& e) {
      fail("matrix", std::string("invalid JSON: ") + e.what());
    }
    if (j.is_object()) return matrix_from_json(member(j, "marginals", "matrix"), "marginals");
    return matrix_from_json(j, "matrix");
  }
  AllocationMatrix P;
  std::istringstream lines(text);
  std::string line;
  int row = 0;
  while (std::getline(lines, line)) {
    std::istringstream cells(line);
    std::string cell;
    std::vector<Prob> r;
    int col = 0;
    while (cells >> cell) {
      try {
        r.push_back(parse_prob(cell));
      } catch (const std::invalid_argument& e) {
        fail("matrix[" + std::to_string(row) + "][" + std::to_string(col) + "]", e.what());
      }
      ++col;
    }
    if (!r.empty()) {
      P.push_back(std::move(r));
      ++row;
    }
  }
  for (std::size_t k = 0; k < P.size(); ++k) {
    if (P[k].size() != P.size()) fail("matrix[" + std::to_string(k) + "]", "expected a square matrix");
  }
  if (P.empty()) fail("matrix", "empty");
  return P;
}

std::string format_matrix(const AllocationMatrix& P) {
  std::vector<std::vector<std::string>> cells;
  std::size_t width = 1;
  for (const auto& row : P) {
    cells.emplace_back();
    for (const auto& v : row) {
      cells.back().push_back(format_prob(v));
      width = std::max(width, cells.back().back().size());
    }
  }
  std::string out;
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ' ';
      out += std::string(width - row[c].size(), ' ') + row[c];
    }
    out += '\n';
  }
  return out;
}

}  // namespace fairmatch
