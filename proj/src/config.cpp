#include "gordonlab/config.hpp"

#include <charconv>
#include <set>

#include "gordonlab/dsl.hpp"
#include "gordonlab/errors.hpp"

namespace gordonlab {

namespace {

const std::set<std::string> kCommands{"cf", "monodromy", "gordon", "witness", "plot"};
const std::set<std::string> kFormats{"csv", "json", "svg"};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\n");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\n") - b + 1);
}

std::size_t parse_index(const std::string& text, std::size_t column) {
  const std::string t = trim(text);
  std::size_t v = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    throw ParseError("expected a non-negative integer, found '" + text + "'", 1, column);
  }
  return v;
}

}  // namespace

FrequencySpec parse_frequency(const std::string& raw) {
  const std::string text = trim(raw);
  if (text == "liouville-default") return FrequencySpec::liouville_default();
  if (text == "golden") return FrequencySpec::golden();
  if (text.rfind("cf:", 0) == 0) {
    std::vector<BigInt> q;
    std::size_t pos = 3;
    while (pos <= text.size()) {
      const std::size_t comma = std::min(text.find(',', pos), text.size());
      const std::string tok = trim(text.substr(pos, comma - pos));
      BigInt v;
      if (tok.empty() || v.set_str(tok, 10) != 0 || v < 1) {
        throw ParseError("partial quotients must be positive integers, found '" + tok + "'", 1, pos + 1);
      }
      q.push_back(v);
      pos = comma + 1;
    }
    return FrequencySpec::from_cf(ContinuedFraction(std::move(q)), q.size());
  }
  if (text.rfind("rational:", 0) == 0) {
    BigRational r;
    try {
      r = parse_rational(text.substr(9));
    } catch (const std::exception& e) {
      throw ParseError(std::string("bad rational: ") + e.what(), 1, 10);
    }
    return FrequencySpec::exact(r);
  }
  throw ParseError("expected liouville-default, golden, cf:a1,a2,... or rational:p/q, found '" + raw + "'", 1, 1);
}

std::string canonical_frequency(const std::string& raw) {
  const std::string text = trim(raw);
  const FrequencySpec f = parse_frequency(text);
  if (text == "liouville-default" || text == "golden") return text;
  if (f.is_exact()) return "rational:" + to_string(f.alpha());
  std::string out = "cf:";
  for (std::size_t i = 0; i < f.cf().size(); ++i) out += (i ? "," : "") + to_string(f.cf().partial_quotients()[i]);
  return out;
}

std::pair<std::size_t, std::size_t> parse_m_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    const std::size_t m = parse_index(text, 1);
    return {m, m};
  }
  const std::size_t lo = parse_index(text.substr(0, dots), 1);
  const std::size_t hi = parse_index(text.substr(dots + 2), dots + 3);
  if (lo < 1 || hi < lo) throw ParseError("order range must satisfy 1 <= a <= b", 1, 1);
  return {lo, hi};
}

std::vector<double> parse_energies(const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string tok = trim(text.substr(pos, comma - pos));
    double v = 0.0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || res.ec != std::errc() || res.ptr != tok.data() + tok.size() || !std::isfinite(v)) {
      throw ParseError("expected an energy, found '" + tok + "'", 1, pos + 1);
    }
    out.push_back(v);
    pos = comma + 1;
  }
  return out;
}

RunConfig& RunConfig::validate() {
  if (!kCommands.count(command)) throw ParseError("unknown command '" + command + "'", 1, 1);
  if (!kFormats.count(format)) throw ParseError("format must be csv, json or svg", 1, 1);
  if (plot_kind != "gordon" && plot_kind != "profile") throw ParseError("plot kind must be gordon or profile", 1, 1);
  v1 = to_dsl(parse_potential(v1));
  v2 = to_dsl(parse_potential(v2));
  alpha = canonical_frequency(alpha);
  const BigRational t = theta_value();
  if (t < 0 || t >= 1) throw DomainError("theta must lie in [0, 1)");
  theta = to_string(t);
  if (rational) *rational = to_string(parse_rational(*rational));
  if (m_lo < 1 || m_hi < m_lo) throw DomainError("order range must satisfy 1 <= a <= b");
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  if (!(bigC >= 0.0) || !std::isfinite(bigC)) throw DomainError("C must be finite and non-negative");
  if (energies.empty()) throw DomainError("at least one energy is needed");
  if (density == 0) throw DomainError("grid density must be positive");
  if (threads == 0) threads = 1;
  return *this;
}

PeriodicPotential RunConfig::potential_v1() const { return parse_potential(v1); }
PeriodicPotential RunConfig::potential_v2() const { return parse_potential(v2); }
FrequencySpec RunConfig::frequency() const { return parse_frequency(alpha); }

BigRational RunConfig::theta_value() const {
  try {
    return parse_rational(theta);
  } catch (const std::exception& e) {
    throw ParseError(std::string("bad theta: ") + e.what(), 1, 1);
  }
}

QuasiPotential RunConfig::quasi() const { return {potential_v1(), potential_v2(), frequency(), theta_value()}; }

Json config_to_json(const RunConfig& c) {
  Json j{{"command", c.command},
         {"v1", c.v1},
         {"v2", c.v2},
         {"alpha", c.alpha},
         {"theta", c.theta},
         {"energies", c.energies},
         {"bigC", c.bigC},
         {"m_range", Json::array({c.m_lo, c.m_hi})},
         {"tol", c.tol},
         {"out", c.out},
         {"format", c.format},
         {"rational", c.rational ? Json(*c.rational) : Json(nullptr)},
         {"certify_B", c.certify_B},
         {"osc_D", c.osc_D ? Json(*c.osc_D) : Json(nullptr)},
         {"osc_delta", c.osc_delta ? Json(*c.osc_delta) : Json(nullptr)},
         {"density", c.density},
         {"plot_kind", c.plot_kind},
         {"threads", c.threads}};
  return j;
}

RunConfig config_from_json(const Json& j) {
  RunConfig c;
  try {
    c.command = j.at("command").get<std::string>();
    c.v1 = j.at("v1").get<std::string>();
    c.v2 = j.at("v2").get<std::string>();
    c.alpha = j.at("alpha").get<std::string>();
    c.theta = j.at("theta").get<std::string>();
    c.energies = j.at("energies").get<std::vector<double>>();
    c.bigC = j.at("bigC").get<double>();
    c.m_lo = j.at("m_range").at(0).get<std::size_t>();
    c.m_hi = j.at("m_range").at(1).get<std::size_t>();
    c.tol = j.at("tol").get<double>();
    c.out = j.value("out", std::string());
    c.format = j.value("format", std::string("csv"));
    if (j.contains("rational") && !j["rational"].is_null()) c.rational = j["rational"].get<std::string>();
    c.certify_B = j.value("certify_B", 1.0);
    if (j.contains("osc_D") && !j["osc_D"].is_null()) c.osc_D = j["osc_D"].get<double>();
    if (j.contains("osc_delta") && !j["osc_delta"].is_null()) c.osc_delta = j["osc_delta"].get<double>();
    c.density = j.value("density", std::size_t{16});
    c.plot_kind = j.value("plot_kind", std::string("gordon"));
    c.threads = j.value("threads", 1u);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed configuration: ") + e.what());
  }
  c.validate();
  return c;
}

}  // namespace gordonlab
