// Acceptance suite: one PASS/FAIL line per criterion.
//   acceptance                 run every criterion
//   acceptance --criterion N   run criterion N only

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gordonlab/config.hpp"
#include "gordonlab/dsl.hpp"
#include "gordonlab/errors.hpp"
#include "gordonlab/gordon.hpp"
#include "gordonlab/propagator.hpp"
#include "gordonlab/report.hpp"
#include "gordonlab/witness.hpp"
#include "oracles.hpp"

using namespace gordonlab;
using std::numbers::pi;

namespace {

struct Result {
  bool pass = true;
  std::ostringstream detail;
  std::vector<std::string> failures;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      failures.push_back(what);
    }
  }

  std::string summary() const {
    std::string s = detail.str();
    for (std::size_t i = 0; i < failures.size(); ++i) s += (i ? "; " : " | failed: ") + failures[i];
    return s;
  }
};

PeriodicPotential half_step() { return PeriodicPotential::step({0, make_rational(1, 2)}, {1.0, 0.0}); }

LinePotential random_step(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> val(lo, hi);
  const long n = 1 + static_cast<long>(rng() % 4);
  std::vector<BigRational> bps{0};
  for (long j = 1; j < n; ++j) bps.push_back(make_rational(j, n));
  std::vector<double> vs;
  for (long j = 0; j < n; ++j) vs.push_back(val(rng));
  return LinePotential::periodic(PeriodicPotential::step(bps, vs));
}

// 1. continued fractions
void criterion1(Result& r) {
  std::mt19937_64 rng(2024);
  std::size_t checked = 0;
  for (int i = 0; i < 1000; ++i) {
    // denominators up to about 2^120
    BigInt q = 2;
    for (int k = 0; k < 1 + i % 4; ++k) q = q * BigInt(static_cast<unsigned long>(rng() >> 34)) + 1;
    BigInt p;
    mpz_class mod = q - 1;
    p = BigInt(static_cast<unsigned long>(rng())) % mod + 1;
    const BigRational x = make_rational(p, q);
    const ContinuedFraction cf = cf_expand(x);
    r.require(cf.reconstruct() == x, "round trip " + to_string(x));
    if (cf.size() > 1) r.require(cf.a(cf.size()) >= 2, "non-canonical tail for " + to_string(x));
    for (std::size_t m = 1; m <= cf.size(); ++m) {
      const BigInt lhs = cf.p(m) * cf.q(m - 1) - cf.p(m - 1) * cf.q(m);
      r.require(lhs == ((m - 1) % 2 == 0 ? 1 : -1), "determinant identity at " + to_string(x));
      ++checked;
    }
  }
  r.detail << "1000 rationals, " << checked << " convergents";
}

// 2. Liouville certification
void criterion2(Result& r) {
  const ContinuedFraction lv = FrequencySpec::liouville_default().cf();
  const auto certs = liouville_certify(lv, BigRational(1), 3);
  for (const auto& c : certs) {
    // independent integer comparison m^{q_m} <= q_m q_{m+1}
    BigInt power;
    mpz_pow_ui(power.get_mpz_t(), BigInt(static_cast<unsigned long>(c.m)).get_mpz_t(), lv.q(c.m).get_ui());
    const bool ref = power <= lv.q(c.m) * lv.q(c.m + 1);
    r.require(c.holds && ref, "default construction fails at m = " + std::to_string(c.m));
  }
  const ContinuedFraction golden(std::vector<BigInt>(40, 1));
  const auto gc = liouville_certify(golden, BigRational(1), 39);
  std::size_t failing = 0;
  for (const auto& c : gc) {
    if (c.m >= 7) {
      r.require(!c.holds, "golden certifies at m = " + std::to_string(c.m));
      failing += !c.holds;
    }
  }
  r.detail << "m = 1..3 certified; golden fails at " << failing << " of 33 orders >= 7";
}

// 3. closed forms
void criterion3(Result& r) {
  double worst = 0.0;
  const SolutionState init{0.0, 0.8, -0.6};
  for (double wmE : {-4.0, -1.0, 0.0, 0.04, 0.25}) {
    const double W = 1.5, E = W - wmE;
    const LinePotential w = LinePotential::constant(W);
    for (int k = -40; k <= 40; ++k) {
      const double x = 0.5 * k;
      const SolutionState s = propagate(w, E, init, x, 1e-12);
      double u, du;
      if (wmE < 0) {
        const double k0 = std::sqrt(-wmE);
        u = init.u * std::cos(k0 * x) + init.du * std::sin(k0 * x) / k0;
        du = -init.u * k0 * std::sin(k0 * x) + init.du * std::cos(k0 * x);
      } else if (wmE == 0) {
        u = init.u + init.du * x;
        du = init.du;
      } else {
        const double k0 = std::sqrt(wmE);
        u = init.u * std::cosh(k0 * x) + init.du * std::sinh(k0 * x) / k0;
        du = init.u * k0 * std::sinh(k0 * x) + init.du * std::cosh(k0 * x);
      }
      worst = std::max({worst, std::abs(s.u - u), std::abs(s.du - du)});
    }
  }
  // free case through the zero potential
  for (double E : {0.0, 1.0, 7.3}) {
    const SolutionState s = propagate(LinePotential(), E, {0.0, 1.0, 0.0}, 20.0, 1e-12);
    const double k0 = std::sqrt(E);
    worst = std::max(worst, std::abs(s.u - std::cos(k0 * 20.0)));
  }
  r.require(worst <= 1e-8, "closed-form error " + format_float(worst));

  // composition: [0, 1/2) with W = 0, [1/2, 1) with W = pi^2, E = 0
  const LinePotential step = LinePotential::periodic(PeriodicPotential::step({0, make_rational(1, 2)}, {0.0, pi * pi}));
  const SolutionState s = propagate(step, 0.0, {0.0, 1.0, 0.0}, 1.0, 1e-12);
  const double comp = std::max(std::abs(s.u - std::cosh(pi / 2)), std::abs(s.du - pi * std::sinh(pi / 2)));
  r.require(comp <= 1e-8, "composition error " + format_float(comp));
  // ten periods against an independent product of the two closed-form blocks
  const double c = std::cosh(pi / 2), sh = std::sinh(pi / 2);
  double a = 1, b = 0, cc = 0, d = 1;
  for (int i = 0; i < 10; ++i) {
    // free block [[1, 1/2], [0, 1]] then [[c, sh/pi], [pi sh, c]]
    const double a1 = a + 0.5 * cc, b1 = b + 0.5 * d, c1 = cc, d1 = d;
    a = c * a1 + sh / pi * c1;
    b = c * b1 + sh / pi * d1;
    cc = pi * sh * a1 + c * c1;
    d = pi * sh * b1 + c * d1;
  }
  const SolutionState s10 = propagate(step, 0.0, {0.0, 1.0, 0.0}, 10.0, 1e-12);
  const double rel = std::max(std::abs(s10.u - a), std::abs(s10.du - cc)) / std::max(1.0, std::hypot(a, cc));
  r.require(rel <= 1e-8, "ten-period composition relative error " + format_float(rel));
  r.detail << "max closed-form error " << format_float(worst) << ", composition " << format_float(comp);
}

// 4. Wronskian and Cayley-Hamilton
void criterion4(Result& r) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> ev(-5, 5);
  double det_err = 0.0, ch = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Monodromy m = monodromy(random_step(rng, -5, 5), ev(rng), BigRational(1));
    det_err = std::max(det_err, std::abs(m.det() - 1.0));
    ch = std::max(ch, m.cayley_hamilton_residual());
  }
  r.require(det_err <= 1e-10, "det error " + format_float(det_err));
  r.require(ch <= 1e-9, "Cayley-Hamilton residual " + format_float(ch));
  r.detail << "max |det - 1| = " << format_float(det_err) << ", max residual = " << format_float(ch);
}

// 5. three-point bound
void criterion5(Result& r) {
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> ev(-5, 5), ang(0, 2 * pi);
  double min_max = INFINITY;
  int small = 0;
  for (int i = 0; i < 1000; ++i) {
    const LinePotential w = random_step(rng, -5, 5);
    const BigRational period(static_cast<long>(rng() % 3) + 1);
    const double th = ang(rng);
    const ThreePointBound b = three_point_bound(w, ev(rng), period, {0.0, std::cos(th), std::sin(th)});
    min_max = std::min(min_max, b.max);
    r.require(b.max >= 0.5 - 1e-9, "max " + format_float(b.max));
    if (std::abs(b.trace) <= 1.0) {
      ++small;
      r.require(std::max(b.norm_p, b.norm_2p) >= 0.5 - 1e-9, "pair (p, 2p) below 1/2");
    } else {
      const double claim = std::abs(b.trace) / 2;
      r.require(std::max(b.norm_minus_p, b.norm_p) >= claim - 1e-9 * std::max(1.0, claim), "pair (-p, p) below |tr|/2");
    }
  }
  r.detail << "min max-norm " << format_float(min_max) << ", " << small << " triples with |tr| <= 1";
}

// 6. Gronwall comparison
void criterion6(Result& r) {
  std::mt19937_64 rng(66);
  std::uniform_real_distribution<double> ev(-5, 5), val(-3, 3);
  double worst = -INFINITY;
  for (int i = 0; i < 1000; ++i) {
    LinePotential w1 = random_step(rng, -3, 3);
    LinePotential w2 = LinePotential::composed(
        PeriodicPotential::step({0, make_rational(1, 2)}, {val(rng), val(rng)}),
        make_rational(static_cast<long>(rng() % 7) + 1, static_cast<long>(rng() % 7) + 1), 0);
    if (i % 2) w2 = w2 + LinePotential::periodic(PeriodicPotential::cosine(1, val(rng), val(rng)));
    const BigRational x = make_rational(static_cast<long>(rng() % 1001) - 500, 100);
    const GronwallCheck g = gronwall_check(w1, w2, ev(rng), x == 0 ? BigRational(1) : x);
    r.require(g.pass, "lhs " + format_float(g.lhs) + " > rhs " + format_float(g.rhs));
    if (g.lhs > 0) worst = std::max(worst, std::log(g.lhs) - g.log_rhs);
  }
  r.detail << "1000 pairs, max ln(lhs/rhs) = " << format_float(worst);
}

// 7. exact step integrals against a Riemann oracle
void criterion7(Result& r) {
  const QuasiPotential q(PeriodicPotential::zero(), half_step(), FrequencySpec::liouville_default(), 0);
  const double al = to_double(q.alpha.alpha());
  for (std::size_t m : {1u, 2u}) {
    const L1Distance d = l1_distance(q, m);
    r.require(d.exact.has_value(), "no exact value at m = " + std::to_string(m));
    const double am = to_double(q.alpha.approximant(m));
    const double qm = q.alpha.q(m).get_d();
    auto v = [](double phase) { return phase - std::floor(phase) < 0.5 ? 1.0 : 0.0; };
    const long n = 1'000'000;
    const double ref = oracle::riemann([&](double x) { return std::abs(v(al * x) - v(am * x)); }, -qm, 2 * qm, n);
    // the integrand has unit jumps only; each jump spoils at most one cell
    const double jumps = 2 * (al + am) * 3 * qm + 4;
    const double bound = jumps * 3 * qm / static_cast<double>(n);
    const double err = std::abs(d.value - ref);
    r.require(err <= bound, "m = " + std::to_string(m) + " error " + format_float(err) + " > " + format_float(bound));
    r.detail << "m=" << m << ": I=" << format_float(d.value) << " oracle=" << format_float(ref) << " bound "
             << format_float(bound) << "; ";
  }
}

// 8. decay of C q_m + ln I_m
void criterion8(Result& r) {
  const QuasiPotential q(PeriodicPotential::zero(), half_step(), FrequencySpec::liouville_default(), 0);
  for (double C : {1.0, 2.0}) {
    const GordonReport rep = gordon_sequence(q, C, 1, 3);
    r.detail << "C=" << C << ":";
    for (const auto& row : rep.rows) r.detail << " " << format_float(row.log_scaled);
    r.detail << "; ";
    r.require(rep.decreasing, "C = " + format_float(C) + " not strictly decreasing");
    r.require(rep.rows.back().log_scaled < std::log(1e-6), "C = " + format_float(C) + " m = 3 not below ln(1e-6)");
  }
  const QuasiPotential g(PeriodicPotential::zero(), half_step(), FrequencySpec::golden(), 0);
  const GordonReport gr = gordon_sequence(g, 1.0, 1, 10);
  r.require(!gr.decreasing && gr.rows.back().log_scaled > std::log(1e-6), "golden control decays");
  r.detail << "golden m=10: " << format_float(gr.rows.back().log_scaled) << " ";
}

// 9. oscillation and singular bounds
void criterion9(Result& r) {
  const QuasiPotential st(PeriodicPotential::zero(), half_step(), FrequencySpec::liouville_default(), 0);
  const QuasiPotential cs(PeriodicPotential::zero(), PeriodicPotential::cosine(1, 1, 0),
                          FrequencySpec::liouville_default(), 0);
  for (std::size_t m = 1; m <= 3; ++m) {
    const double is = l1_distance(st, m).value, bs = osc_bound(st, m, 4.0, 1.0);
    const double ic = l1_distance(cs, m).value, bc = osc_bound(cs, m, 4 * pi, 1.0);
    r.require(is <= bs, "step m = " + std::to_string(m));
    r.require(ic <= bc, "cos m = " + std::to_string(m));
    r.detail << "m=" << m << " step " << format_float(is / bs) << " cos " << format_float(ic / bc) << "; ";
  }
  const QuasiPotential sg(PeriodicPotential::zero(), PeriodicPotential::power_singular(0.5, 1.0),
                          FrequencySpec::liouville_default(), 0);
  double first = 0.0;
  r.detail << "singular ratios";
  for (std::size_t m = 1; m <= 3; ++m) {
    const double ratio = l1_distance(sg, m).value / singular_bound(sg, m);
    if (m == 1) first = ratio;
    r.detail << " " << format_float(ratio);
    r.require(ratio <= 2 * first && ratio >= first / 2,
              "singular ratio at m = " + std::to_string(m) + " is " + format_float(ratio / first) + "x the m = 1 value");
  }
}

// 10. witnesses
void criterion10(Result& r) {
  const QuasiPotential q(PeriodicPotential::zero(), half_step(), FrequencySpec::liouville_default(), 0);
  for (double E : {-1.0, 0.5, 2.0}) {
    const WitnessReport rep = witness_run(q, E, 3, 3);
    const WitnessRow& row = rep.rows.front();
    r.detail << "E=" << E << ": sup " << format_float(row.sup_diff_sampled);
    r.require(row.sup_diff_sampled <= 0.25, "E = " + format_float(E) + " sup difference " + format_float(row.sup_diff_sampled));
    bool any = false;
    for (const auto& w : row.witnesses) {
      const double x = to_double(w.x);
      const bool on_grid = x == -25 || x == 25 || x == 50;
      const bool large = w.norm * w.norm >= 1.0 / 16 - 1e-9 && w.verified_norm * w.verified_norm >= 1.0 / 16 - 1e-9;
      if (on_grid && large) {
        any = true;
        r.detail << " witness " << x << " norm " << format_float(w.verified_norm);
      }
    }
    r.detail << "; ";
    r.require(any, "E = " + format_float(E) + " no verified witness");
  }
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " \"" GORDONLAB_CLI_PATH "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::size_t field_count(const std::string& line) { return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1; }

// 11. CLI contract
void criterion11(Result& r) {
  for (const std::string text : {"step{0:1, 1/2:0}", "2*cos(3, 0.5, 0.1) + sing(0.5, 1)", "zero",
                                 "-0.25*step{0:-1, 1/3:2, 2/3:0.5} + cos(1, 1, 0)"}) {
    const PeriodicPotential p = parse_potential(text);
    r.require(parse_potential(to_dsl(p)) == p && to_dsl(parse_potential(to_dsl(p))) == to_dsl(p),
              "DSL round trip of " + text);
  }
  const auto dir = std::filesystem::temp_directory_path() / ("gordonlab_acc_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const auto g = dir / "g.csv", w = dir / "w.csv";
  r.require(run_cli("gordon --m-range 1..3 --out " + g.string()) == 0, "gordon exit code");
  r.require(run_cli("witness --energies 0.5 --m-range 3..3 --out " + w.string()) == 0, "witness exit code");
  auto check_csv = [&](const std::filesystem::path& p, const std::vector<std::string>& cols) {
    std::istringstream in(read_file(p));
    std::string line;
    std::getline(in, line);
    std::string header;
    for (std::size_t i = 0; i < cols.size(); ++i) header += (i ? "," : "") + cols[i];
    r.require(line == header, p.filename().string() + " header '" + line + "'");
    std::size_t rows = 0;
    while (std::getline(in, line)) {
      ++rows;
      r.require(field_count(line) == cols.size(), p.filename().string() + " row width");
    }
    r.require(rows > 0, p.filename().string() + " has no rows");
  };
  check_csv(g, {"m", "a_m", "q_m", "alpha_err_upper", "I_m", "C", "log_scaled", "osc_bound", "sing_bound"});
  check_csv(w, {"E", "m", "q_m", "sup_diff_sampled", "sup_diff_rigorous", "pass", "witness_x", "witness_norm"});
  const int assertion = run_cli("gordon --osc-D 1e-9 --osc-delta 1");
  const int resource = run_cli("gordon", "GORDONLAB_DIGIT_BUDGET=5");
  r.require(assertion == 2, "assertion exit code " + std::to_string(assertion));
  r.require(resource == 3, "resource exit code " + std::to_string(resource));
  std::filesystem::remove_all(dir);
  r.detail << "round trips ok, schemas checked, exit codes " << assertion << "/" << resource;
}

struct Criterion {
  int id;
  double limit_seconds;
  std::function<void(Result&)> body;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{{1, 5, criterion1},    {2, 1, criterion2},   {3, 5, criterion3},
                                   {4, 30, criterion4},   {5, 60, criterion5},  {6, 60, criterion6},
                                   {7, 30, criterion7},   {8, 60, criterion8},  {9, 120, criterion9},
                                   {10, 120, criterion10}, {11, 10, criterion11}};
  int only = 0;
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--criterion") only = std::atoi(argv[i + 1]);
  }
  int failures = 0;
  for (const auto& c : all) {
    if (only && c.id != only) continue;
    Result r;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.body(r);
    } catch (const std::exception& e) {
      r.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.require(secs < c.limit_seconds, "runtime " + format_float(secs) + " s over " + format_float(c.limit_seconds) + " s");
    std::printf("criterion %d: %s (%.2f s) %s\n", c.id, r.pass ? "PASS" : "FAIL", secs, r.summary().c_str());
    failures += !r.pass;
  }
  return failures ? 1 : 0;
}
