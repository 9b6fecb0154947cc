#include "gordonlab/gordon.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <sstream>

#include "gordonlab/errors.hpp"
#include "gordonlab/quadrature.hpp"

namespace gordonlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<BigRational> window_cuts(const LinePotential& diff, const BigRational& a, const BigRational& b,
                                     std::size_t budget) {
  std::vector<BigRational> cuts{a};
  const auto bps = diff.breakpoints(a, b, budget);
  cuts.insert(cuts.end(), bps.begin(), bps.end());
  cuts.push_back(b);
  return cuts;
}

// --- exact route: step-only V2 ----------------------------------------------

L1Distance exact_step_distance(const PeriodicPotential& v2, const BigRational& alpha, const BigRational& beta,
                               const BigRational& theta, const BigRational& a, const BigRational& b,
                               const L1Options& options) {
  const LinePotential diff =
      LinePotential::composed(v2, alpha, theta) - LinePotential::composed(v2, beta, theta);
  const auto cuts = window_cuts(diff, a, b, options.breakpoint_budget);

  std::vector<std::pair<BigRational, const StepFunction*>> steps;
  for (const auto& t : v2.terms()) steps.emplace_back(exact_from_double(t.coefficient), &std::get<StepFunction>(t.atom));

  BigRational total = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const BigRational mid = (cuts[i] + cuts[i + 1]) / 2;
    const BigRational pa = mid * alpha + theta;
    const BigRational pb = mid * beta + theta;
    BigRational value = 0;
    for (const auto& [c, s] : steps) {
      value += c * (exact_from_double(s->values[s->piece_at(pa)]) - exact_from_double(s->values[s->piece_at(pb)]));
    }
    total += abs(value) * (cuts[i + 1] - cuts[i]);
  }
  L1Distance out;
  out.exact = total;
  out.value = to_double(total);
  out.method = L1Method::ExactStep;
  out.pieces = cuts.size() - 1;
  return out;
}

// --- closed form: one power-singular term --------------------------------------

class Mpfr {
 public:
  explicit Mpfr(mpfr_prec_t prec = 256) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
  ~Mpfr() { mpfr_clear(v_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

 private:
  mpfr_t v_;
};

/// sgn(r) |r|^{e} / e, accumulated into `acc` with the given sign.
void add_antiderivative(Mpfr& acc, const BigRational& r, double e, int sign) {
  if (r == 0) return;
  Mpfr x, t;
  mpfr_set_q(x.get(), r.get_mpq_t(), MPFR_RNDN);
  const bool negative = mpfr_sgn(x.get()) < 0;
  mpfr_abs(x.get(), x.get(), MPFR_RNDN);
  mpfr_set_d(t.get(), e, MPFR_RNDN);
  mpfr_pow(x.get(), x.get(), t.get(), MPFR_RNDN);
  mpfr_div_d(x.get(), x.get(), e, MPFR_RNDN);
  if (negative != (sign < 0)) {
    mpfr_sub(acc.get(), acc.get(), x.get(), MPFR_RNDN);
  } else {
    mpfr_add(acc.get(), acc.get(), x.get(), MPFR_RNDN);
  }
}

/// integral over [s, t] of |r|^{-gamma} with r = slope * x + offset - n, slope > 0,
/// added into `acc` with the given sign.
void add_power_integral(Mpfr& acc, const BigRational& slope, const BigRational& offset, const BigInt& n,
                        const BigRational& s, const BigRational& t, double gamma, int sign) {
  const double e = 1.0 - gamma;
  Mpfr part;
  add_antiderivative(part, slope * t + offset - n, e, 1);
  add_antiderivative(part, slope * s + offset - n, e, -1);
  Mpfr sl;
  mpfr_set_q(sl.get(), slope.get_mpq_t(), MPFR_RNDN);
  mpfr_div(part.get(), part.get(), sl.get(), MPFR_RNDN);
  if (sign < 0) {
    mpfr_sub(acc.get(), acc.get(), part.get(), MPFR_RNDN);
  } else {
    mpfr_add(acc.get(), acc.get(), part.get(), MPFR_RNDN);
  }
}

L1Distance singular_distance(const Term& term, const BigRational& alpha, const BigRational& beta,
                             const BigRational& theta, const BigRational& a, const BigRational& b,
                             const L1Options& options) {
  const auto& ps = std::get<PowerSingular>(term.atom);
  PeriodicPotential single = PeriodicPotential::power_singular(ps.gamma, ps.scale);
  const LinePotential diff =
      LinePotential::composed(single, alpha, theta) - LinePotential::composed(single, beta, theta);
  const auto cuts = window_cuts(diff, a, b, options.breakpoint_budget);

  Mpfr total;
  std::size_t pieces = 0;
  const BigRational half(1, 2);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const BigRational& s = cuts[i];
    const BigRational& t = cuts[i + 1];
    const BigRational mid = (s + t) / 2;
    const BigInt n1 = floor_of(mid * alpha + theta + half);
    const BigInt n2 = floor_of(mid * beta + theta + half);
    // |r1| = |r2| where r1 = r2 or r1 = -r2.
    std::vector<BigRational> sub{s};
    for (const BigRational& x : {BigRational((n1 - n2) / (alpha - beta)),
                                 BigRational((n1 + n2 - 2 * theta) / (alpha + beta))}) {
      if (x > s && x < t) sub.push_back(x);
    }
    sub.push_back(t);
    std::sort(sub.begin(), sub.end());
    for (std::size_t j = 0; j + 1 < sub.size(); ++j) {
      Mpfr part;
      add_power_integral(part, alpha, theta, n1, sub[j], sub[j + 1], ps.gamma, 1);
      add_power_integral(part, beta, theta, n2, sub[j], sub[j + 1], ps.gamma, -1);
      mpfr_abs(part.get(), part.get(), MPFR_RNDN);
      mpfr_add(total.get(), total.get(), part.get(), MPFR_RNDN);
      ++pieces;
    }
  }
  L1Distance out;
  out.value = std::abs(term.coefficient * ps.scale) * mpfr_get_d(total.get(), MPFR_RNDN);
  out.method = L1Method::ClosedFormSingular;
  out.pieces = pieces;
  return out;
}

// --- quadrature: paired differences ---------------------------------------------

/// One term of V2 seen through both phase maps on a breakpoint-free piece.
struct PairedTerm {
  enum class Kind { Constant, Cos, Singular } kind = Kind::Constant;
  double coefficient = 0.0;
  double constant = 0.0;   // Constant: difference of the two values
  double k2pi = 0.0;       // Cos: 2 pi k
  double amp = 0.0;
  double phase = 0.0;
  double phi2 = 0.0;       // Cos: phase of the beta map at tau = 0, reduced
  double dphi0 = 0.0;      // phase difference at tau = 0
  double dslope = 0.0;     // alpha - beta
  double slope1 = 0.0, slope2 = 0.0;
  double r1 = 0.0, r2 = 0.0;  // Singular: signed offsets from the branch points at tau = 0
  double gamma = 0.0;

  double value(double tau) const {
    switch (kind) {
      case Kind::Constant:
        return coefficient * constant;
      case Kind::Cos: {
        const double p2 = k2pi * (phi2 + slope2 * tau) + phase;
        const double d = k2pi * (dphi0 + dslope * tau);
        // cos(p2 + d) - cos(p2)
        return coefficient * amp * -2.0 * std::sin(p2 + 0.5 * d) * std::sin(0.5 * d);
      }
      case Kind::Singular: {
        const double s2 = r2 + slope2 * tau;
        const double d = (r1 - r2) + dslope * tau;
        const double s1 = s2 + d;
        if (s1 == 0.0 || s2 == 0.0) return 0.0;
        if ((s1 > 0.0) == (s2 > 0.0)) {
          const double base = std::pow(std::abs(s2), -gamma);
          return coefficient * amp * base * std::expm1(-gamma * std::log1p(d / s2));
        }
        return coefficient * amp * (std::pow(std::abs(s1), -gamma) - std::pow(std::abs(s2), -gamma));
      }
    }
    return 0.0;
  }
};

L1Distance quadrature_distance(const PeriodicPotential& v2, const BigRational& alpha, const BigRational& beta,
                               const BigRational& theta, const BigRational& a, const BigRational& b,
                               const L1Options& options) {
  if (to_double(b - a) > 3.0 * options.quadrature_q_limit) {
    throw ResourceError("quadrature window of length " + std::to_string(to_double(b - a)) +
                        " exceeds the work budget; use a smaller approximation order");
  }
  const LinePotential diff =
      LinePotential::composed(v2, alpha, theta) - LinePotential::composed(v2, beta, theta);
  auto cuts = window_cuts(diff, a, b, options.breakpoint_budget);
  // unit sub-pieces keep each quadrature panel short
  for (BigInt k = floor_of(a) + 1; BigRational(k) < b; ++k) cuts.push_back(BigRational(k));
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const BigRational half(1, 2);
  const double dslope = to_double(alpha - beta);
  double total = 0.0, error = 0.0;
  const double tol = options.quadrature_tol;
  // oscillations of the difference per unit length bound the sign-change sampling
  double max_cycles = 0.0;
  for (const auto& t : v2.terms()) {
    if (const auto* c = std::get_if<Cosine>(&t.atom)) {
      max_cycles = std::max(max_cycles, static_cast<double>(c->k) * (std::abs(to_double(alpha)) + std::abs(to_double(beta))));
    }
  }
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const BigRational& s = cuts[i];
    const BigRational mid = (s + cuts[i + 1]) / 2;
    const double len = to_double(cuts[i + 1] - s);
    const BigRational pa = s * alpha + theta;
    const BigRational pb = s * beta + theta;
    std::vector<PairedTerm> terms;
    bool singular = false;
    for (const auto& t : v2.terms()) {
      PairedTerm pt;
      pt.coefficient = t.coefficient;
      pt.dslope = dslope;
      pt.slope1 = to_double(alpha);
      pt.slope2 = to_double(beta);
      std::visit(
          [&](const auto& atom) {
            using A = std::decay_t<decltype(atom)>;
            if constexpr (std::is_same_v<A, StepFunction>) {
              pt.kind = PairedTerm::Kind::Constant;
              pt.constant = atom.values[atom.piece_at(mid * alpha + theta)] -
                            atom.values[atom.piece_at(mid * beta + theta)];
            } else if constexpr (std::is_same_v<A, Cosine>) {
              pt.kind = PairedTerm::Kind::Cos;
              pt.k2pi = kTwoPi * static_cast<double>(atom.k);
              pt.amp = atom.amplitude;
              pt.phase = atom.phase;
              // reduce the beta phase mod 1/k so that k * phi2 stays small
              const BigRational kb = pb * atom.k;
              pt.phi2 = to_double(frac_of(kb)) / static_cast<double>(atom.k);
              pt.dphi0 = to_double(pa - pb);
            } else {
              singular = true;
              pt.kind = PairedTerm::Kind::Singular;
              pt.amp = atom.scale;
              pt.gamma = atom.gamma;
              const BigInt n1 = floor_of(mid * alpha + theta + half);
              const BigInt n2 = floor_of(mid * beta + theta + half);
              pt.r2 = to_double(pb - n2);
              pt.r1 = pt.r2 + to_double(pa - pb - BigRational(n1 - n2));
            }
          },
          t.atom);
      terms.push_back(pt);
    }
    auto g = [&](double tau) {
      double v = 0.0;
      for (const auto& pt : terms) v += pt.value(tau);
      return v;
    };
    auto f = [&](double tau) { return std::abs(g(tau)); };
    // split at sign changes of the difference so that each panel integrates a smooth function;
    // samples avoid the piece ends, where a singular term may blow up
    std::vector<double> nodes{0.0};
    const std::size_t samples = 16 + 8 * static_cast<std::size_t>(std::ceil(max_cycles * len));
    auto at = [&](std::size_t j) { return len * (static_cast<double>(j) + 0.5) / static_cast<double>(samples); };
    double prev = g(at(0));
    for (std::size_t j = 1; j < samples; ++j) {
      const double cur = g(at(j));
      if ((prev < 0.0 && cur > 0.0) || (prev > 0.0 && cur < 0.0)) {
        double lo = at(j - 1), hi = at(j);
        const bool rising = prev < 0.0;
        for (int it = 0; it < 200 && hi - lo > 4e-16 * std::max(1.0, hi); ++it) {
          const double m = 0.5 * (lo + hi);
          ((g(m) < 0.0) == rising ? lo : hi) = m;
        }
        nodes.push_back(0.5 * (lo + hi));
      }
      if (cur != 0.0) prev = cur;
    }
    nodes.push_back(len);
    for (std::size_t j = 0; j + 1 < nodes.size(); ++j) {
      const double w = nodes[j + 1] - nodes[j];
      const double panel_tol = std::max(tol * w, 1e-300);
      const quad::Result r = singular ? quad::tanh_sinh(f, nodes[j], nodes[j + 1], panel_tol, 12)
                                      : quad::gauss_kronrod(f, nodes[j], nodes[j + 1], panel_tol, 40);
      total += r.value;
      error += r.error;
    }
  }
  L1Distance out;
  out.value = total;
  out.error_bound = error;
  out.method = L1Method::Quadrature;
  out.pieces = cuts.size() - 1;
  return out;
}

}  // namespace

double L1Distance::log_value() const {
  if (exact) return *exact == 0 ? -std::numeric_limits<double>::infinity() : log_abs(*exact);
  return value > 0.0 ? std::log(value) : -std::numeric_limits<double>::infinity();
}

std::string to_string(L1Method method) {
  switch (method) {
    case L1Method::Trivial: return "trivial";
    case L1Method::ExactStep: return "exact-step";
    case L1Method::ClosedFormSingular: return "closed-form-singular";
    case L1Method::Quadrature: return "quadrature";
  }
  return "unknown";
}

L1Distance l1_distance_between(const PeriodicPotential& v2, const BigRational& alpha, const BigRational& beta,
                               const BigRational& theta, const BigRational& a, const BigRational& b,
                               const L1Options& options) {
  if (b < a) throw DomainError("l1 window needs a <= b");
  if (alpha <= 0 || beta <= 0) throw DomainError("frequencies must be positive");
  if (v2.is_zero() || alpha == beta || a == b) {
    L1Distance out;
    out.exact = BigRational(0);
    return out;
  }
  if (v2.is_step_only()) return exact_step_distance(v2, alpha, beta, theta, a, b, options);
  if (v2.terms().size() == 1 && std::holds_alternative<PowerSingular>(v2.terms().front().atom)) {
    return singular_distance(v2.terms().front(), alpha, beta, theta, a, b, options);
  }
  return quadrature_distance(v2, alpha, beta, theta, a, b, options);
}

L1Distance l1_distance(const QuasiPotential& q, std::size_t m, const BigRational& a, const BigRational& b,
                       const L1Options& options) {
  q.alpha.require_order(m);
  return l1_distance_between(q.v2, q.alpha.alpha(), q.alpha.approximant(m), q.theta, a, b, options);
}

L1Distance l1_distance(const QuasiPotential& q, std::size_t m, const L1Options& options) {
  q.alpha.require_order(m);
  const BigRational qm(q.alpha.q(m));
  return l1_distance(q, m, -qm, 2 * qm, options);
}

double osc_bound(const QuasiPotential& q, std::size_t m, double D, double delta) {
  q.alpha.require_order(m);
  if (D < 0.0 || !(delta > 0.0 && delta <= 1.0)) throw DomainError("oscillation bound needs D >= 0, 0 < delta <= 1");
  if (D == 0.0) return 0.0;
  const BigRational qm(q.alpha.q(m));
  const BigRational& alpha = q.alpha.alpha();
  const BigRational err = q.alpha.alpha_error_upper(m);
  if (err == 0) return 0.0;
  const double log_prefactor = log_abs((3 * qm * alpha + 1) / alpha);
  const double log_power = delta * log_abs(2 * qm * err);
  return std::exp(log_prefactor + std::log(D) + log_power);
}

double singular_bound(const QuasiPotential& q, std::size_t m) {
  q.alpha.require_order(m);
  if (q.theta != 0) throw DomainError("singular bound is only available for theta = 0");
  if (q.v2.terms().size() != 1 || !std::holds_alternative<PowerSingular>(q.v2.terms().front().atom)) {
    throw DomainError("singular bound needs V2 to be a single power-singular term");
  }
  const double gamma = std::get<PowerSingular>(q.v2.terms().front().atom).gamma;
  const BigRational pm(q.alpha.p(m));
  const BigRational rel = q.alpha.alpha() * BigRational(q.alpha.q(m)) / pm - 1;
  if (rel == 0) return 0.0;
  return std::exp((2.0 - gamma) * log_abs(pm) + (1.0 - gamma) * log_abs(rel));
}

GordonReport gordon_sequence(const QuasiPotential& q, double C, std::size_t m_lo, std::size_t m_hi,
                             const GordonOptions& options) {
  if (!(C >= 0.0) || !std::isfinite(C)) throw DomainError("constant C must be finite and non-negative");
  if (m_lo < 1 || m_hi < m_lo) throw RangeError("order range must satisfy 1 <= m_lo <= m_hi");
  for (std::size_t m = m_lo; m <= m_hi; ++m) q.alpha.require_order(m);

  auto make_row = [&](std::size_t m) {
    GordonRow row;
    row.m = m;
    row.a_m = q.alpha.a(m);
    row.q_m = q.alpha.q(m);
    row.alpha_err_upper = q.alpha.alpha_error_upper(m);
    row.distance = l1_distance(q, m, options.l1);
    row.C = C;
    row.log_scaled = C * to_double(BigRational(row.q_m)) + row.distance.log_value();
    if (options.holder) row.osc_bound = osc_bound(q, m, options.holder->first, options.holder->second);
    if (options.singular_bound) {
      row.sing_bound = singular_bound(q, m);
      if (*row.sing_bound > 0.0) row.sing_ratio = row.distance.value / *row.sing_bound;
    }
    return row;
  };

  GordonReport report;
  report.C = C;
  const std::size_t count = m_hi - m_lo + 1;
  if (options.threads > 1 && count > 1) {
    std::vector<std::future<GordonRow>> futures;
    for (std::size_t m = m_lo; m <= m_hi; ++m) futures.push_back(std::async(std::launch::async, make_row, m));
    for (auto& f : futures) report.rows.push_back(f.get());
  } else {
    for (std::size_t m = m_lo; m <= m_hi; ++m) report.rows.push_back(make_row(m));
  }
  report.decreasing = true;
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    if (!(report.rows[i].log_scaled < report.rows[i - 1].log_scaled)) report.decreasing = false;
  }
  return report;
}

void check_osc_dominance(const GordonReport& report) {
  for (const auto& row : report.rows) {
    if (!row.osc_bound) continue;
    const double slack = 1e-12 * std::max(1.0, *row.osc_bound);
    if (row.distance.value > *row.osc_bound + slack + row.distance.error_bound) {
      std::ostringstream os;
      os << "I_m = " << row.distance.value << " exceeds the oscillation bound " << *row.osc_bound
         << " at m = " << row.m;
      throw InvariantViolation(os.str());
    }
  }
}

}  // namespace gordonlab
