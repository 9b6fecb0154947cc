#include "gordonlab/json_io.hpp"

#include <cmath>

#include "gordonlab/errors.hpp"

namespace gordonlab {

namespace {

BigInt big_from_string(const Json& j) {
  if (!j.is_string()) throw DomainError("expected a decimal string, got " + j.dump());
  BigInt v;
  if (v.set_str(j.get<std::string>(), 10) != 0) throw DomainError("not a decimal integer: " + j.dump());
  return v;
}

template <class T>
Json optional_number(const std::optional<T>& v) {
  return v ? number_to_json(*v) : Json(nullptr);
}

}  // namespace

Json number_to_json(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

Json cf_to_json(const ContinuedFraction& cf) {
  Json arr = Json::array();
  for (const auto& a : cf.partial_quotients()) arr.push_back(to_string(a));
  return Json{{"cf", arr}};
}

ContinuedFraction cf_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("cf") || !j["cf"].is_array()) throw DomainError("expected {\"cf\": [...]}");
  std::vector<BigInt> q;
  for (const auto& e : j["cf"]) q.push_back(big_from_string(e));
  return ContinuedFraction(std::move(q));
}

Json rational_to_json(const BigRational& r) {
  return Json{{"rational", Json::array({to_string(r.get_num()), to_string(r.get_den())})}};
}

BigRational rational_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("rational") || !j["rational"].is_array() || j["rational"].size() != 2) {
    throw DomainError("expected {\"rational\": [\"p\", \"q\"]}");
  }
  return make_rational(big_from_string(j["rational"][0]), big_from_string(j["rational"][1]));
}

Json monodromy_to_json(const Monodromy& m) {
  return Json{{"matrix", Json::array({m.matrix.a, m.matrix.b, m.matrix.c, m.matrix.d})},
              {"interval", Json::array({m.from, m.to})},
              {"energy", m.energy}};
}

Monodromy monodromy_from_json(const Json& j) {
  const auto& mat = j.at("matrix");
  if (!mat.is_array() || mat.size() != 4) throw DomainError("monodromy matrix must be a row-major 4-vector");
  Monodromy m;
  m.matrix = {mat[0].get<double>(), mat[1].get<double>(), mat[2].get<double>(), mat[3].get<double>()};
  m.from = j.at("interval").at(0).get<double>();
  m.to = j.at("interval").at(1).get<double>();
  m.energy = j.at("energy").get<double>();
  return m;
}

Json gordon_to_json(const GordonReport& report) {
  Json rows = Json::array();
  for (const auto& r : report.rows) {
    Json row{{"m", r.m},
             {"a_m", to_string(r.a_m)},
             {"q_m", to_string(r.q_m)},
             {"alpha_err_upper", rational_to_json(r.alpha_err_upper)},
             {"I_m", number_to_json(r.distance.value)},
             {"I_m_method", to_string(r.distance.method)},
             {"I_m_error", number_to_json(r.distance.error_bound)},
             {"C", r.C},
             {"log_scaled", number_to_json(r.log_scaled)},
             {"osc_bound", optional_number(r.osc_bound)},
             {"sing_bound", optional_number(r.sing_bound)},
             {"sing_ratio", optional_number(r.sing_ratio)}};
    if (r.distance.exact) row["I_m_exact"] = rational_to_json(*r.distance.exact);
    rows.push_back(row);
  }
  return Json{{"C", report.C}, {"decreasing", report.decreasing}, {"rows", rows}};
}

Json witness_to_json(const WitnessReport& report) {
  Json rows = Json::array();
  for (const auto& r : report.rows) {
    Json wit = Json::array();
    for (const auto& w : r.witnesses) {
      wit.push_back({{"x", to_string(w.x)},
                     {"norm", w.norm},
                     {"norm_approx", w.norm_approx},
                     {"verified_norm", w.verified_norm}});
    }
    Json row{{"m", r.m},
             {"q_m", to_string(r.q_m)},
             {"sup_diff_sampled", number_to_json(r.sup_diff_sampled)},
             {"sup_diff_rigorous", optional_number(r.sup_diff_rigorous)},
             {"pass", r.pass},
             {"complete", r.complete},
             {"samples", r.samples},
             {"gronwall_max_ratio", number_to_json(r.gronwall_max_ratio)},
             {"witnesses", wit}};
    if (r.three_point) {
      const auto& t = *r.three_point;
      row["three_point"] = {{"norms", Json::array({t.norm_minus_p, t.norm_p, t.norm_2p})},
                            {"trace", t.trace},
                            {"pair_max", t.pair_max},
                            {"pair_claim", t.pair_claim}};
    }
    if (!r.note.empty()) row["note"] = r.note;
    rows.push_back(row);
  }
  return Json{{"E", report.energy},
              {"D", report.D},
              {"m0", report.m0 ? Json(*report.m0) : Json(nullptr)},
              {"complete", report.complete},
              {"rows", rows}};
}

}  // namespace gordonlab
