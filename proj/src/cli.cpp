#include "gordonlab/cli.hpp"

#include <cmath>
#include <future>
#include <ostream>
#include <sstream>

#include "gordonlab/errors.hpp"
#include "gordonlab/gordon.hpp"
#include "gordonlab/json_io.hpp"
#include "gordonlab/report.hpp"
#include "gordonlab/witness.hpp"

namespace gordonlab {

namespace {

std::string bracket_list(const ContinuedFraction& cf) {
  std::string s = "[";
  for (std::size_t i = 0; i < cf.size(); ++i) s += (i ? "," : "") + to_string(cf.partial_quotients()[i]);
  return s + "]";
}

std::string run_cf(const RunConfig& cfg) {
  ContinuedFraction cf;
  std::vector<LiouvilleCertificate> certs;
  if (cfg.rational) {
    cf = cf_expand(parse_rational(*cfg.rational));
  } else {
    cf = cfg.frequency().cf();
    const std::size_t m_max = std::min(cfg.m_hi, cf.size() - 1);
    if (m_max >= 1) certs = liouville_certify(cf, exact_from_double(cfg.certify_B), m_max);
  }
  if (cfg.format == "json") {
    Json j = cf_to_json(cf);
    Json conv = Json::array();
    for (std::size_t m = 1; m <= cf.size(); ++m) conv.push_back(Json::array({to_string(cf.p(m)), to_string(cf.q(m))}));
    j["convergents"] = conv;
    if (cfg.rational) j["rational"] = rational_to_json(parse_rational(*cfg.rational))["rational"];
    if (!certs.empty()) {
      Json cj = Json::array();
      for (const auto& c : certs) cj.push_back({{"m", c.m}, {"holds", c.holds}, {"enclosure", rational_to_json(c.enclosure)}});
      j["certificates"] = cj;
    }
    return j.dump() + "\n";
  }
  std::string out = bracket_list(cf) + "\n";
  out += certs.empty() ? "m,a_m,p_m,q_m\n" : "m,a_m,p_m,q_m,certified\n";
  for (std::size_t m = 1; m <= cf.size(); ++m) {
    out += std::to_string(m) + "," + to_string(cf.a(m)) + "," + to_string(cf.p(m)) + "," + to_string(cf.q(m));
    if (!certs.empty()) out += m <= certs.size() ? (certs[m - 1].holds ? ",true" : ",false") : ",";
    out += "\n";
  }
  return out;
}

std::string run_monodromy(const RunConfig& cfg) {
  const QuasiPotential q = cfg.quasi();
  std::vector<MonodromyRow> rows;
  for (std::size_t m = cfg.m_lo; m <= cfg.m_hi; ++m) {
    const ApproximantPotential approx(q, m);
    const LinePotential w = LinePotential::approximant(approx);
    for (double e : cfg.energies) {
      MonodromyRow row{m, approx.period, monodromy(w, e, BigRational(approx.period), cfg.tol)};
      const double scale = std::max(1.0, row.mono.matrix.op_norm());
      if (std::abs(row.mono.det() - 1.0) > 1e-10 * scale * scale ||
          row.mono.cayley_hamilton_residual() > 1e-9 * scale * scale) {
        std::ostringstream os;
        os << "monodromy invariants violated at m = " << m << ", E = " << e << ": det = " << row.mono.det()
           << ", Cayley-Hamilton residual = " << row.mono.cayley_hamilton_residual();
        throw InvariantViolation(os.str());
      }
      rows.push_back(row);
    }
  }
  if (cfg.format == "json") {
    Json arr = Json::array();
    for (const auto& r : rows) {
      Json j = monodromy_to_json(r.mono);
      j["m"] = r.m;
      j["q_m"] = to_string(r.q_m);
      arr.push_back(j);
    }
    return arr.dump() + "\n";
  }
  return monodromy_csv(rows);
}

GordonReport gordon_report(const RunConfig& cfg, const QuasiPotential& q) {
  GordonOptions opt;
  opt.threads = cfg.threads;
  if (cfg.osc_D || cfg.osc_delta) {
    opt.holder = {cfg.osc_D.value_or(4.0), cfg.osc_delta.value_or(1.0)};
  } else if (!q.v2.has_singularity() && !q.v2.is_zero()) {
    const HolderFit fit = holder_certificate(q.v2, {0.05, 0.02, 0.01, 0.005, 0.002, 0.001});
    if (fit.ok) opt.holder = {fit.D, fit.delta};
  }
  opt.singular_bound = q.theta == 0 && q.v2.terms().size() == 1 &&
                       std::holds_alternative<PowerSingular>(q.v2.terms().front().atom);
  GordonReport report = gordon_sequence(q, cfg.bigC, cfg.m_lo, cfg.m_hi, opt);
  check_osc_dominance(report);
  return report;
}

std::string gordon_svg(const GordonReport& report, const std::string& alpha) {
  Series s{"C = " + format_float(report.C), {}, {}};
  for (const auto& r : report.rows) {
    s.x.push_back(static_cast<double>(r.m));
    s.y.push_back(r.log_scaled);
  }
  return svg_line_chart({s}, "C q_m + ln I_m (" + alpha + ")", "m", "log-scaled distance");
}

std::string run_gordon(const RunConfig& cfg) {
  const GordonReport report = gordon_report(cfg, cfg.quasi());
  if (cfg.format == "json") return gordon_to_json(report).dump(2) + "\n";
  if (cfg.format == "svg") return gordon_svg(report, cfg.alpha);
  return gordon_csv(report);
}

std::vector<WitnessReport> witness_reports(const RunConfig& cfg) {
  const QuasiPotential q = cfg.quasi();
  WitnessOptions opt;
  opt.tol = cfg.tol;
  opt.density = cfg.density;
  auto one = [&](double e) { return witness_run(q, e, cfg.m_lo, cfg.m_hi, opt); };
  std::vector<WitnessReport> reports;
  if (cfg.threads > 1 && cfg.energies.size() > 1) {
    std::vector<std::future<WitnessReport>> futures;
    for (double e : cfg.energies) futures.push_back(std::async(std::launch::async, one, e));
    for (auto& f : futures) reports.push_back(f.get());
  } else {
    for (double e : cfg.energies) reports.push_back(one(e));
  }
  return reports;
}

std::string run_witness(const RunConfig& cfg) {
  const auto reports = witness_reports(cfg);
  if (cfg.format == "json") {
    Json arr = Json::array();
    for (const auto& r : reports) arr.push_back(witness_to_json(r));
    return arr.dump(2) + "\n";
  }
  return witness_csv(reports);
}

std::string run_plot(const RunConfig& cfg) {
  const QuasiPotential q = cfg.quasi();
  if (cfg.plot_kind == "gordon") return gordon_svg(gordon_report(cfg, q), cfg.alpha);

  const std::size_t m = cfg.m_hi;
  const double e = cfg.energies.front();
  const ApproximantPotential approx(q, m);
  const BigRational qm(approx.period);
  if (to_double(qm) > 1e4) throw ResourceError("profile window exceeds the work budget at m = " + std::to_string(m));
  std::vector<BigRational> xs;
  const long n = static_cast<long>(cfg.density) * 3 * qm.get_num().get_si();
  for (long k = 0; k <= n; ++k) xs.push_back(-qm + make_rational(k, static_cast<long>(cfg.density)));
  const SolutionState init{0.0, 1.0, 0.0};
  const auto us = propagate_path(LinePotential::quasi(q), e, init, 0, xs, cfg.tol);
  const auto ums = propagate_path(LinePotential::approximant(approx), e, init, 0, xs, cfg.tol);
  Series s1{"quasiperiodic", {}, {}}, s2{"approximant m = " + std::to_string(m), {}, {}};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = to_double(xs[i]);
    s1.x.push_back(x);
    s1.y.push_back(std::log10(us[i].norm()));
    s2.x.push_back(x);
    s2.y.push_back(std::log10(ums[i].norm()));
  }
  return svg_line_chart({s1, s2}, "solution norm, E = " + format_float(e), "x", "log10 |(u, u')|");
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    std::string content;
    if (cfg.command == "cf") {
      content = run_cf(cfg);
    } else if (cfg.command == "monodromy") {
      content = run_monodromy(cfg);
    } else if (cfg.command == "gordon") {
      content = run_gordon(cfg);
    } else if (cfg.command == "witness") {
      content = run_witness(cfg);
    } else if (cfg.command == "plot") {
      content = run_plot(cfg);
    } else {
      err << "error: unknown command '" << cfg.command << "'\n";
      return kExitUsage;
    }
    if (cfg.out.empty()) {
      out << content;
    } else {
      write_atomic(cfg.out, content);
    }
    return kExitOk;
  } catch (const InvariantViolation& e) {
    err << "assertion failure: " << e.what() << "\ninputs: " << config_to_json(cfg).dump() << "\n";
    return kExitInvariant;
  } catch (const ResourceError& e) {
    err << "resource budget exceeded: " << e.what() << "\n";
    return kExitResource;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace gordonlab
