#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "gordonlab/cli.hpp"
#include "gordonlab/config.hpp"
#include "gordonlab/dsl.hpp"
#include "gordonlab/errors.hpp"
#include "gordonlab/gordon.hpp"
#include "gordonlab/witness.hpp"

namespace py = pybind11;
using namespace gordonlab;

namespace {

py::int_ to_py(const BigInt& v) { return py::int_(py::module_::import("builtins").attr("int")(to_string(v))); }

BigInt from_py(const py::int_& v) { return BigInt(py::str(v).cast<std::string>()); }

py::list quotients(const ContinuedFraction& cf) {
  py::list out;
  for (const auto& a : cf.partial_quotients()) out.append(to_py(a));
  return out;
}

ContinuedFraction cf_from_list(const std::vector<py::int_>& qs) {
  std::vector<BigInt> a;
  for (const auto& q : qs) a.push_back(from_py(q));
  return ContinuedFraction(std::move(a));
}

py::tuple fraction(const BigRational& r) { return py::make_tuple(to_py(r.get_num()), to_py(r.get_den())); }

QuasiPotential quasi(const std::string& v1, const std::string& v2, const std::string& alpha, const std::string& theta) {
  return {parse_potential(v1), parse_potential(v2), parse_frequency(alpha), parse_rational(theta)};
}

py::object optional_float(const std::optional<double>& v) { return v ? py::object(py::float_(*v)) : py::none(); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact continued fractions, Schrodinger propagators and approximant diagnostics";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<RangeError>(m, "RangeError", PyExc_IndexError);
  py::register_exception<ResourceError>(m, "ResourceError", PyExc_RuntimeError);
  py::register_exception<InvariantViolation>(m, "InvariantViolation", PyExc_AssertionError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<IntegrationError>(m, "IntegrationError", PyExc_ArithmeticError);
  py::register_exception<SingularityHit>(m, "SingularityHit", PyExc_ZeroDivisionError);

  m.def(
      "cf_expand", [](const py::int_& p, const py::int_& q) { return quotients(cf_expand(make_rational(from_py(p), from_py(q)))); },
      py::arg("p"), py::arg("q"), "Partial quotients of p/q in (0, 1).");

  m.def(
      "convergents",
      [](const std::vector<py::int_>& qs) {
        const ContinuedFraction cf = cf_from_list(qs);
        py::list out;
        for (std::size_t k = 1; k <= cf.size(); ++k) out.append(py::make_tuple(to_py(cf.p(k)), to_py(cf.q(k))));
        return out;
      },
      py::arg("quotients"), "Convergents (p_m, q_m) for m = 1..len(quotients).");

  m.def(
      "liouville_certify",
      [](const std::vector<py::int_>& qs, const std::string& B, std::size_t m_max) {
        std::vector<bool> out;
        for (const auto& c : liouville_certify(cf_from_list(qs), parse_rational(B), m_max)) out.push_back(c.holds);
        return out;
      },
      py::arg("quotients"), py::arg("B") = "1", py::arg("m_max"));

  m.def(
      "frequency",
      [](const std::string& spec) {
        const FrequencySpec f = parse_frequency(spec);
        py::dict d;
        d["cf"] = quotients(f.cf());
        d["max_order"] = f.max_order();
        d["alpha"] = fraction(f.alpha());
        d["canonical"] = canonical_frequency(spec);
        return d;
      },
      py::arg("spec"));

  m.def("canonical_potential", [](const std::string& text) { return to_dsl(parse_potential(text)); }, py::arg("text"));
  m.def(
      "eval_potential", [](const std::string& text, double x) { return eval(parse_potential(text), x); }, py::arg("text"),
      py::arg("x"));

  m.def(
      "monodromy",
      [](const std::string& v1, const std::string& v2, const std::string& alpha, const std::string& theta, std::size_t order,
         double energy, double tol) {
        const ApproximantPotential approx(quasi(v1, v2, alpha, theta), order);
        const Monodromy mono = monodromy(LinePotential::approximant(approx), energy, BigRational(approx.period), tol);
        py::dict d;
        d["matrix"] = std::vector<double>{mono.matrix.a, mono.matrix.b, mono.matrix.c, mono.matrix.d};
        d["trace"] = mono.trace();
        d["det"] = mono.det();
        d["period"] = to_py(approx.period);
        return d;
      },
      py::arg("v1") = "zero", py::arg("v2") = "step{0:1, 1/2:0}", py::arg("alpha") = "liouville-default",
      py::arg("theta") = "0", py::arg("m"), py::arg("energy"), py::arg("tol") = kDefaultTol);

  m.def(
      "l1_distance",
      [](const std::string& v2, const std::string& alpha, const std::string& theta, std::size_t order) {
        const L1Distance d = l1_distance(quasi("zero", v2, alpha, theta), order);
        py::dict out;
        out["value"] = d.value;
        out["method"] = to_string(d.method);
        out["exact"] = d.exact ? py::object(fraction(*d.exact)) : py::none();
        out["error_bound"] = d.error_bound;
        return out;
      },
      py::arg("v2"), py::arg("alpha") = "liouville-default", py::arg("theta") = "0", py::arg("m"));

  m.def(
      "gordon_sequence",
      [](const std::string& v2, const std::string& alpha, const std::string& theta, double C, std::size_t m_lo,
         std::size_t m_hi, std::optional<double> D, std::optional<double> delta) {
        GordonOptions opt;
        if (D || delta) opt.holder = {D.value_or(4.0), delta.value_or(1.0)};
        const QuasiPotential q = quasi("zero", v2, alpha, theta);
        opt.singular_bound = q.theta == 0 && q.v2.terms().size() == 1 &&
                             std::holds_alternative<PowerSingular>(q.v2.terms().front().atom);
        const GordonReport r = gordon_sequence(q, C, m_lo, m_hi, opt);
        py::list rows;
        for (const auto& row : r.rows) {
          py::dict d;
          d["m"] = row.m;
          d["a_m"] = to_py(row.a_m);
          d["q_m"] = to_py(row.q_m);
          d["I_m"] = row.distance.value;
          d["log_scaled"] = row.log_scaled;
          d["osc_bound"] = optional_float(row.osc_bound);
          d["sing_bound"] = optional_float(row.sing_bound);
          rows.append(d);
        }
        py::dict out;
        out["rows"] = rows;
        out["decreasing"] = r.decreasing;
        return out;
      },
      py::arg("v2") = "step{0:1, 1/2:0}", py::arg("alpha") = "liouville-default", py::arg("theta") = "0",
      py::arg("C") = 1.0, py::arg("m_lo") = 1, py::arg("m_hi") = 3, py::arg("D") = py::none(),
      py::arg("delta") = py::none());

  m.def(
      "witness",
      [](const std::string& v1, const std::string& v2, const std::string& alpha, const std::string& theta, double energy,
         std::size_t m_lo, std::size_t m_hi, std::size_t density) {
        WitnessOptions opt;
        opt.density = density;
        WitnessReport r;
        {
          py::gil_scoped_release release;
          r = witness_run(quasi(v1, v2, alpha, theta), energy, m_lo, m_hi, opt);
        }
        py::list rows;
        for (const auto& row : r.rows) {
          py::dict d;
          d["m"] = row.m;
          d["q_m"] = to_py(row.q_m);
          d["sup_diff_sampled"] = row.sup_diff_sampled;
          d["sup_diff_rigorous"] = optional_float(row.sup_diff_rigorous);
          d["pass"] = row.pass;
          d["complete"] = row.complete;
          py::list ws;
          for (const auto& w : row.witnesses) ws.append(py::make_tuple(to_double(w.x), w.norm, w.verified_norm));
          d["witnesses"] = ws;
          rows.append(d);
        }
        return rows;
      },
      py::arg("v1") = "zero", py::arg("v2") = "step{0:1, 1/2:0}", py::arg("alpha") = "liouville-default",
      py::arg("theta") = "0", py::arg("energy"), py::arg("m_lo") = 1, py::arg("m_hi") = 3, py::arg("density") = 16);

  m.def(
      "run",
      [](const std::string& config_json) {
        const RunConfig cfg = config_from_json(Json::parse(config_json));
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = run(cfg, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("config_json"), "Runs a CLI configuration given as JSON; returns (exit_code, stdout, stderr).");

  m.def(
      "default_config", [] { return config_to_json(RunConfig{}).dump(); }, "Canonical JSON of the default configuration.");
}
