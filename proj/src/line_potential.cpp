#include "gordonlab/line_potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gordonlab/errors.hpp"
#include "gordonlab/quadrature.hpp"

namespace gordonlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Phases in [0, 1) at which an atom changes branch.
std::vector<BigRational> branch_phases(const Atom& atom) {
  if (const auto* s = std::get_if<StepFunction>(&atom)) return s->breakpoints;
  if (std::holds_alternative<PowerSingular>(atom)) return {BigRational(0), BigRational(1, 2)};
  return {};
}

bool same_atom(const Atom& a, const Atom& b) { return a == b; }

BigInt ceil_of(const BigRational& x) { return -floor_of(-x); }

/// s2^e - s1^e for s1, s2 >= 0 where ds = s2 - s1 is known accurately.
double pow_diff(double s1, double ds, double e) {
  const double s2 = s1 + ds;
  if (s1 <= 0.0) return std::pow(std::max(s2, 0.0), e);
  if (s2 <= 0.0) return -std::pow(s1, e);
  return std::pow(s1, e) * std::expm1(e * std::log1p(ds / s1));
}

double spherical_j1_over(double x) {
  // (sin x - x cos x) / x^2
  if (std::abs(x) < 1e-3) return x / 3.0 - x * x * x / 30.0;
  return (std::sin(x) - x * std::cos(x)) / (x * x);
}

double sinc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

}  // namespace

QuasiPotential::QuasiPotential(PeriodicPotential v1_, PeriodicPotential v2_, FrequencySpec alpha_,
                               BigRational theta_)
    : v1(std::move(v1_)), v2(std::move(v2_)), alpha(std::move(alpha_)), theta(std::move(theta_)) {
  if (theta < 0 || theta >= 1) throw DomainError("phase theta must lie in [0, 1), got " + to_string(theta));
}

ApproximantPotential::ApproximantPotential(const QuasiPotential& q, std::size_t m_) : source(q), m(m_) {
  q.alpha.require_order(m);
  alpha_m = q.alpha.approximant(m);
  period = q.alpha.q(m);
}

double eval_quasi(const QuasiPotential& q, const BigRational& x) {
  return eval(q.v1, x) + eval(q.v2, frac_of(x * q.alpha.alpha() + q.theta));
}

double eval_quasi(const ApproximantPotential& a, const BigRational& x) {
  return eval(a.source.v1, x) + eval(a.source.v2, frac_of(x * a.alpha_m + a.source.theta));
}

// ---------------------------------------------------------------------------

LinePotential::LinePotential(std::vector<LineTerm> terms) : terms_(std::move(terms)) { normalize(); }

LinePotential LinePotential::composed(const PeriodicPotential& p, const BigRational& slope,
                                      const BigRational& offset) {
  std::vector<LineTerm> terms;
  for (const Term& t : p.terms()) terms.push_back({t.coefficient, t.atom, slope, offset});
  return LinePotential(std::move(terms));
}

LinePotential LinePotential::periodic(const PeriodicPotential& p) { return composed(p, 1, 0); }

LinePotential LinePotential::constant(double value) {
  if (value == 0.0) return {};
  return periodic(PeriodicPotential::constant(value));
}

LinePotential LinePotential::quasi(const QuasiPotential& q) {
  return periodic(q.v1) + composed(q.v2, q.alpha.alpha(), q.theta);
}

LinePotential LinePotential::approximant(const ApproximantPotential& a) {
  return periodic(a.source.v1) + composed(a.source.v2, a.alpha_m, a.source.theta);
}

void LinePotential::normalize() {
  std::vector<LineTerm> merged;
  for (auto& t : terms_) {
    if (t.slope == 0) {
      // a constant in x: evaluate once
      double v = 0.0;
      try {
        v = gordonlab::eval(t.atom, frac_of(t.offset));
      } catch (const SingularityHit&) {
        throw DomainError("zero-slope term sits exactly on its singularity");
      }
      t = LineTerm{t.coefficient * v, StepFunction{{BigRational(0)}, {1.0}}, 1, 0};
    }
    auto it = std::find_if(merged.begin(), merged.end(), [&](const LineTerm& m) {
      return m.slope == t.slope && m.offset == t.offset && same_atom(m.atom, t.atom);
    });
    if (it != merged.end()) {
      it->coefficient += t.coefficient;
    } else {
      merged.push_back(t);
    }
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(), [](const LineTerm& t) { return t.coefficient == 0.0; }),
               merged.end());
  terms_ = std::move(merged);
}

LinePotential LinePotential::operator+(const LinePotential& other) const {
  auto terms = terms_;
  terms.insert(terms.end(), other.terms_.begin(), other.terms_.end());
  return LinePotential(std::move(terms));
}

LinePotential LinePotential::operator-(const LinePotential& other) const { return *this + other.scaled(-1.0); }

LinePotential LinePotential::scaled(double c) const {
  auto terms = terms_;
  for (auto& t : terms) t.coefficient *= c;
  return LinePotential(std::move(terms));
}

bool LinePotential::is_piecewise_constant() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const LineTerm& t) { return std::holds_alternative<StepFunction>(t.atom); });
}

bool LinePotential::has_singularity() const {
  return std::any_of(terms_.begin(), terms_.end(),
                     [](const LineTerm& t) { return std::holds_alternative<PowerSingular>(t.atom); });
}

double LinePotential::eval(const BigRational& x) const {
  double v = 0.0;
  for (const auto& t : terms_) v += t.coefficient * gordonlab::eval(t.atom, x * t.slope + t.offset);
  return v;
}

std::size_t LinePotential::breakpoint_count_estimate(const BigRational& a, const BigRational& b) const {
  double total = 0.0;
  for (const auto& t : terms_) {
    const double span = std::abs(to_double((b - a) * t.slope));
    total += (span + 1.0) * static_cast<double>(branch_phases(t.atom).size());
  }
  return total > 1e18 ? static_cast<std::size_t>(1e18) : static_cast<std::size_t>(total);
}

std::vector<BigRational> LinePotential::breakpoints(const BigRational& a, const BigRational& b,
                                                    std::size_t budget) const {
  std::vector<BigRational> out;
  if (b <= a) return out;
  const std::size_t estimate = breakpoint_count_estimate(a, b);
  if (estimate > budget) {
    throw ResourceError("window [" + std::to_string(to_double(a)) + ", " + std::to_string(to_double(b)) +
                        "] holds ~" + std::to_string(estimate) + " breakpoints, budget is " +
                        std::to_string(budget) + "; use a smaller approximation order");
  }
  for (const auto& t : terms_) {
    const auto phases = branch_phases(t.atom);
    if (phases.empty()) continue;
    BigRational lo = a * t.slope + t.offset;
    BigRational hi = b * t.slope + t.offset;
    if (hi < lo) std::swap(lo, hi);
    for (const auto& rho : phases) {
      // x = (rho + k - offset) / slope with phase strictly inside (lo, hi)
      BigInt k = ceil_of(lo - rho);
      for (; BigRational(rho + k) < hi; ++k) {
        const BigRational phase = rho + k;
        if (phase <= lo) continue;
        out.push_back((phase - t.offset) / t.slope);
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Piece LinePotential::piece(const BigRational& a, const BigRational& b) const {
  if (b <= a) throw DomainError("piece needs a < b");
  Piece pc;
  pc.start = a;
  pc.end = b;
  pc.length = to_double(b - a);
  const BigRational mid = (a + b) / 2;
  for (const auto& t : terms_) {
    Piece::Local loc;
    const BigRational phi_a = a * t.slope + t.offset;
    std::visit(
        [&](const auto& atom) {
          using A = std::decay_t<decltype(atom)>;
          if constexpr (std::is_same_v<A, StepFunction>) {
            loc.kind = Piece::Local::Kind::Constant;
            loc.value = t.coefficient * atom.values[atom.piece_at(mid * t.slope + t.offset)];
          } else if constexpr (std::is_same_v<A, Cosine>) {
            loc.kind = Piece::Local::Kind::Cos;
            loc.amp = t.coefficient * atom.amplitude;
            loc.phase0 = kTwoPi * to_double(frac_of(phi_a * atom.k)) + atom.phase;
            loc.omega = kTwoPi * static_cast<double>(atom.k) * to_double(t.slope);
          } else {
            loc.kind = Piece::Local::Kind::Singular;
            loc.amp = t.coefficient * atom.scale;
            loc.gamma = atom.gamma;
            const BigRational phi_mid = mid * t.slope + t.offset;
            const BigInt branch = floor_of(phi_mid + BigRational(1, 2));
            loc.r0 = to_double(phi_a - branch);
            loc.slope = to_double(t.slope);
            loc.sign = phi_mid - branch > 0 ? 1.0 : -1.0;
          }
        },
        t.atom);
    pc.locals.push_back(loc);
  }
  return pc;
}

double LinePotential::l1_unif_norm() const {
  if (terms_.empty()) return 0.0;
  if (is_piecewise_constant()) {
    BigInt period = 1;
    for (const auto& t : terms_) mpz_lcm(period.get_mpz_t(), period.get_mpz_t(), t.slope.get_den_mpz_t());
    if (period <= 10'000) {
      // F(x) = G(x+1) - G(x) is piecewise linear; its maximum over one period is
      // attained where x or x+1 is a breakpoint.
      const BigRational T(period);
      auto bps = breakpoints(-1, T + 2);
      std::vector<BigRational> cuts{BigRational(-1)};
      cuts.insert(cuts.end(), bps.begin(), bps.end());
      cuts.push_back(T + 2);
      std::vector<BigRational> cumulative{BigRational(0)};
      for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const BigRational v = exact_from_double(std::abs(eval((cuts[i] + cuts[i + 1]) / 2)));
        cumulative.push_back(cumulative.back() + v * (cuts[i + 1] - cuts[i]));
      }
      auto G = [&](const BigRational& x) -> BigRational {
        auto it = std::upper_bound(cuts.begin(), cuts.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - cuts.begin()) - 1;
        const BigRational v = exact_from_double(std::abs(eval((cuts[i] + cuts[i + 1]) / 2)));
        return cumulative[i] + v * (x - cuts[i]);
      };
      BigRational best = G(BigRational(1)) - G(BigRational(0));
      for (const auto& b : bps) {
        for (const BigRational& x : {b, BigRational(b - 1)}) {
          if (x >= 0 && x < T) best = std::max(best, BigRational(G(x + 1) - G(x)));
        }
      }
      return to_double(best);
    }
  }
  double total = 0.0;
  for (const auto& t : terms_) {
    const double beta = std::abs(to_double(t.slope));
    const double per_window =
        beta <= 1.0 ? window_l1_sup(t.atom, beta) : std::ceil(beta) * window_l1_sup(t.atom, 1.0);
    total += std::abs(t.coefficient) * per_window / beta;
  }
  return total;
}

// ---------------------------------------------------------------------------

bool Piece::is_constant() const {
  return std::all_of(locals.begin(), locals.end(), [](const Local& l) { return l.kind == Local::Kind::Constant; });
}

double Piece::constant_value() const {
  double v = 0.0;
  for (const auto& l : locals) v += l.value;
  return v;
}

double Piece::value(double tau) const {
  double v = 0.0;
  for (const auto& l : locals) {
    switch (l.kind) {
      case Local::Kind::Constant:
        v += l.value;
        break;
      case Local::Kind::Cos:
        v += l.amp * std::cos(l.phase0 + l.omega * tau);
        break;
      case Local::Kind::Singular: {
        double r = l.r0 + l.slope * tau;
        if (r * l.sign < 0.0) r = 0.0;
        v += l.amp * std::pow(std::abs(r), -l.gamma);
        break;
      }
    }
  }
  return v;
}

Piece::Moments Piece::moments(double tau0, double tau1) const {
  Moments out;
  const double h = tau1 - tau0;
  const double c = 0.5 * (tau0 + tau1);
  for (const auto& l : locals) {
    switch (l.kind) {
      case Local::Kind::Constant:
        out.m0 += l.value * h;
        break;
      case Local::Kind::Cos: {
        const double phi = std::remainder(l.phase0 + l.omega * c, kTwoPi);
        const double x = 0.5 * l.omega * h;
        out.m0 += l.amp * h * std::cos(phi) * sinc(x);
        out.m1 += -l.amp * std::sin(phi) * 0.5 * h * h * spherical_j1_over(x);
        break;
      }
      case Local::Kind::Singular: {
        // s = |r| is affine in tau with slope kappa; s does not vanish inside.
        const double kappa = l.sign * l.slope;
        const double s0 = std::max(0.0, l.sign * (l.r0 + l.slope * tau0));
        const double sc = std::max(0.0, l.sign * (l.r0 + l.slope * c));
        const double ds = kappa * h;
        const double g = l.gamma;
        const double int0 = pow_diff(s0, ds, 1.0 - g) / (1.0 - g);  // integral of s^{-g} ds
        const double int1 = pow_diff(s0, ds, 2.0 - g) / (2.0 - g);  // integral of s^{1-g} ds
        out.m0 += l.amp * int0 / kappa;
        out.m1 += l.amp * (int1 - sc * int0) / (kappa * kappa);
        break;
      }
    }
  }
  return out;
}

double Piece::abs_integral(double tau0, double tau1) const {
  if (tau1 <= tau0) return 0.0;
  if (is_constant()) return std::abs(constant_value()) * (tau1 - tau0);
  if (locals.size() == 1 && locals[0].kind == Local::Kind::Singular) {
    return std::abs(moments(tau0, tau1).m0);
  }
  auto f = [&](double t) { return std::abs(value(t)); };
  bool singular = std::any_of(locals.begin(), locals.end(),
                              [](const Local& l) { return l.kind == Local::Kind::Singular; });
  if (singular) return quad::tanh_sinh(f, tau0, tau1, 1e-13).value;
  return quad::gauss_kronrod(f, tau0, tau1, 1e-13).value;
}

}  // namespace gordonlab
