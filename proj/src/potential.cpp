#include "gordonlab/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gordonlab/errors.hpp"
#include "gordonlab/quadrature.hpp"

namespace gordonlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct ExactStep {
  std::vector<BigRational> breakpoints;
  std::vector<BigRational> values;

  const BigRational& at(const BigRational& x) const {
    const BigRational f = frac_of(x);
    auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), f);
    if (it == breakpoints.begin()) return values.back();
    return values[static_cast<std::size_t>(it - breakpoints.begin()) - 1];
  }
};

ExactStep merge_steps_exact(const PeriodicPotential& p) {
  std::vector<BigRational> bps;
  for (const Term& t : p.terms()) {
    const auto& s = std::get<StepFunction>(t.atom);
    bps.insert(bps.end(), s.breakpoints.begin(), s.breakpoints.end());
  }
  std::sort(bps.begin(), bps.end());
  bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
  if (bps.empty()) bps.push_back(0);
  ExactStep out;
  out.breakpoints = bps;
  out.values.assign(bps.size(), BigRational(0));
  for (const Term& t : p.terms()) {
    const auto& s = std::get<StepFunction>(t.atom);
    const BigRational c = exact_from_double(t.coefficient);
    for (std::size_t i = 0; i < bps.size(); ++i) {
      out.values[i] += c * exact_from_double(s.values[s.piece_at(bps[i])]);
    }
  }
  return out;
}

double eval_fast(const Atom& atom, double x) {
  const double f = x - std::floor(x);
  return std::visit(
      [&](const auto& a) -> double {
        using A = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<A, StepFunction>) {
          std::size_t idx = a.values.size() - 1;
          for (std::size_t i = 0; i < a.breakpoints.size(); ++i) {
            if (a.breakpoints[i].get_d() <= f) idx = i;
          }
          return a.values[idx];
        } else if constexpr (std::is_same_v<A, Cosine>) {
          const double kf = static_cast<double>(a.k) * f;
          return a.amplitude * std::cos(kTwoPi * (kf - std::floor(kf)) + a.phase);
        } else {
          const double r = f < 0.5 ? f : 1.0 - f;
          return a.scale * std::pow(r, -a.gamma);
        }
      },
      atom);
}

double eval_fast(const PeriodicPotential& p, double x) {
  double v = 0.0;
  for (const Term& t : p.terms()) v += t.coefficient * eval_fast(t.atom, x);
  return v;
}

PeriodicPotential term_potential(const Atom& atom) {
  return std::visit(
      [](const auto& a) {
        using A = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<A, StepFunction>) return PeriodicPotential::step(a.breakpoints, a.values);
        else if constexpr (std::is_same_v<A, Cosine>) return PeriodicPotential::cosine(a.k, a.amplitude, a.phase);
        else return PeriodicPotential::power_singular(a.gamma, a.scale);
      },
      atom);
}

double singular_unit_integral(const PowerSingular& s) {
  return s.scale * 2.0 * std::pow(0.5, 1.0 - s.gamma) / (1.0 - s.gamma);
}

}  // namespace

std::size_t StepFunction::piece_at(const BigRational& x) const {
  const BigRational f = frac_of(x);
  auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), f);
  if (it == breakpoints.begin()) return values.size() - 1;
  return static_cast<std::size_t>(it - breakpoints.begin()) - 1;
}

StepFunction make_step(std::vector<BigRational> breakpoints, std::vector<double> values) {
  if (breakpoints.empty()) throw DomainError("step function needs at least one breakpoint");
  if (breakpoints.size() != values.size()) throw DomainError("step function needs one value per breakpoint");
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    if (breakpoints[i] < 0 || breakpoints[i] >= 1) {
      throw DomainError("step breakpoint " + to_string(breakpoints[i]) + " outside [0, 1)");
    }
    if (i > 0 && breakpoints[i] <= breakpoints[i - 1]) {
      throw DomainError("step breakpoints not increasing at " + to_string(breakpoints[i]));
    }
    if (!std::isfinite(values[i])) throw DomainError("step value must be finite");
  }
  return StepFunction{std::move(breakpoints), std::move(values)};
}

PeriodicPotential PeriodicPotential::step(std::vector<BigRational> breakpoints, std::vector<double> values) {
  PeriodicPotential p;
  p.terms_.push_back({1.0, make_step(std::move(breakpoints), std::move(values))});
  return p;
}

PeriodicPotential PeriodicPotential::constant(double value) { return step({BigRational(0)}, {value}); }

PeriodicPotential PeriodicPotential::cosine(long k, double amplitude, double phase) {
  if (k < 0) throw DomainError("cosine frequency must be >= 0");
  if (!std::isfinite(amplitude) || !std::isfinite(phase)) throw DomainError("cosine parameters must be finite");
  PeriodicPotential p;
  p.terms_.push_back({1.0, Cosine{k, amplitude, phase}});
  return p;
}

PeriodicPotential PeriodicPotential::power_singular(double gamma, double scale) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw DomainError("power singularity exponent must satisfy 0 < gamma < 1, got " + std::to_string(gamma));
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) throw DomainError("power singularity scale must be positive");
  PeriodicPotential p;
  p.terms_.push_back({1.0, PowerSingular{gamma, scale}});
  return p;
}

PeriodicPotential PeriodicPotential::sum(const std::vector<std::pair<double, PeriodicPotential>>& parts) {
  PeriodicPotential out;
  for (const auto& [c, part] : parts) {
    if (!std::isfinite(c)) throw DomainError("sum coefficient must be finite");
    for (const Term& t : part.terms_) out.terms_.push_back({c * t.coefficient, t.atom});
  }
  return out;
}

PeriodicPotential PeriodicPotential::scaled(double c) const { return sum({{c, *this}}); }

PeriodicPotential PeriodicPotential::operator+(const PeriodicPotential& other) const {
  return sum({{1.0, *this}, {1.0, other}});
}

PotentialKind PeriodicPotential::kind() const {
  if (terms_.empty()) return PotentialKind::Zero;
  if (terms_.size() > 1 || terms_[0].coefficient != 1.0) return PotentialKind::Sum;
  return std::visit(
      [](const auto& a) {
        using A = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<A, StepFunction>) return PotentialKind::Step;
        else if constexpr (std::is_same_v<A, Cosine>) return PotentialKind::Smooth;
        else return PotentialKind::PowerSingular;
      },
      terms_[0].atom);
}

bool PeriodicPotential::is_step_only() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const Term& t) { return std::holds_alternative<StepFunction>(t.atom); });
}

bool PeriodicPotential::has_singularity() const {
  return std::any_of(terms_.begin(), terms_.end(), [](const Term& t) {
    return t.coefficient != 0.0 && std::holds_alternative<PowerSingular>(t.atom);
  });
}

double eval(const Atom& atom, const BigRational& x) {
  return std::visit(
      [&](const auto& a) -> double {
        using A = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<A, StepFunction>) {
          return a.values[a.piece_at(x)];
        } else if constexpr (std::is_same_v<A, Cosine>) {
          const BigRational kx = frac_of(BigRational(a.k) * x);
          return a.amplitude * std::cos(kTwoPi * to_double(kx) + a.phase);
        } else {
          const BigRational half(1, 2);
          const BigRational r = x - BigRational(floor_of(x + half));
          if (r == 0) throw SingularityHit(to_double(x));
          return a.scale * std::pow(std::abs(to_double(r)), -a.gamma);
        }
      },
      atom);
}

double eval(const PeriodicPotential& p, const BigRational& x) {
  double v = 0.0;
  for (const Term& t : p.terms()) v += t.coefficient * eval(t.atom, x);
  return v;
}

double eval(const PeriodicPotential& p, double x) { return eval(p, exact_from_double(x)); }

StepFunction merge_steps(const PeriodicPotential& p) {
  if (!p.is_step_only()) throw DomainError("merge_steps needs a step-only potential");
  const ExactStep e = merge_steps_exact(p);
  std::vector<double> values;
  for (const auto& v : e.values) values.push_back(to_double(v));
  return StepFunction{e.breakpoints, values};
}

std::optional<BigRational> l1_unif_norm_exact(const PeriodicPotential& p) {
  if (!p.is_step_only()) return std::nullopt;
  if (p.is_zero()) return BigRational(0);
  const ExactStep e = merge_steps_exact(p);
  BigRational total = 0;
  for (std::size_t i = 0; i < e.breakpoints.size(); ++i) {
    const BigRational next = i + 1 < e.breakpoints.size() ? e.breakpoints[i + 1] : e.breakpoints[0] + 1;
    total += abs(e.values[i]) * (next - e.breakpoints[i]);
  }
  return total;
}

double l1_unif_norm(const PeriodicPotential& p) {
  if (auto exact = l1_unif_norm_exact(p)) return to_double(*exact);
  if (p.terms().size() == 1) {
    const Term& t = p.terms()[0];
    if (const auto* s = std::get_if<PowerSingular>(&t.atom)) return std::abs(t.coefficient) * singular_unit_integral(*s);
  }
  std::vector<double> cuts{0.0, 1.0};
  for (const Term& t : p.terms()) {
    if (const auto* s = std::get_if<StepFunction>(&t.atom)) {
      for (const auto& b : s->breakpoints) cuts.push_back(to_double(b));
    } else if (std::holds_alternative<PowerSingular>(t.atom)) {
      cuts.push_back(0.5);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  auto integrand = [&](double x) { return std::abs(eval_fast(p, x)); };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (p.has_singularity()) {
      total += quad::tanh_sinh(integrand, cuts[i], cuts[i + 1], 1e-12).value;
    } else {
      total += quad::gauss_kronrod(integrand, cuts[i], cuts[i + 1], 1e-12).value;
    }
  }
  return total;
}

double l1_unif_norm_triangle(const PeriodicPotential& p) {
  double total = 0.0;
  for (const Term& t : p.terms()) {
    total += std::abs(t.coefficient) * l1_unif_norm(term_potential(t.atom));
  }
  return total;
}

double window_l1_sup(const Atom& atom, double width) {
  if (!(width > 0.0 && width <= 1.0)) throw DomainError("window width must lie in (0, 1]");
  return std::visit(
      [&](const auto& a) -> double {
        using A = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<A, StepFunction>) {
          // The window integral is piecewise linear in its left end; its maximum
          // sits where an end meets a breakpoint.
          const ExactStep e = merge_steps_exact(term_potential(a));
          const BigRational w = exact_from_double(width);
          struct Piece { BigRational lo, hi, v; };
          std::vector<Piece> pieces;
          for (int period = 0; period < 2; ++period) {
            pieces.push_back({BigRational(period), e.breakpoints[0] + period, abs(e.values.back())});
            for (std::size_t i = 0; i < e.breakpoints.size(); ++i) {
              const BigRational hi = i + 1 < e.breakpoints.size() ? e.breakpoints[i + 1] : BigRational(1);
              pieces.push_back({e.breakpoints[i] + period, hi + period, abs(e.values[i])});
            }
          }
          auto window = [&](const BigRational& x) {
            BigRational acc = 0;
            for (const auto& pc : pieces) {
              const BigRational l = std::max(pc.lo, x);
              const BigRational h = std::min(pc.hi, BigRational(x + w));
              if (h > l) acc += pc.v * (h - l);
            }
            return acc;
          };
          BigRational best = 0;
          for (const auto& b : e.breakpoints) {
            for (const BigRational& start : {b, frac_of(b - w)}) best = std::max(best, window(start));
          }
          return to_double(best);
        } else if constexpr (std::is_same_v<A, Cosine>) {
          const double amp = std::abs(a.amplitude);
          if (a.k == 0) return amp * std::abs(std::cos(a.phase)) * width;
          const double k = static_cast<double>(a.k);
          const double half_periods = std::ceil(2.0 * k * width) + 1.0;
          return amp * std::min(width, half_periods / (std::numbers::pi * k));
        } else {
          return a.scale * 2.0 * std::pow(0.5 * width, 1.0 - a.gamma) / (1.0 - a.gamma);
        }
      },
      atom);
}

std::optional<BigRational> osc_integral_exact(const PeriodicPotential& p, double eps) {
  if (!(eps > 0.0 && eps < 0.25)) throw DomainError("osc_integral needs 0 < eps < 1/4");
  if (!p.is_step_only()) return std::nullopt;
  if (p.is_zero()) return BigRational(0);
  const ExactStep e = merge_steps_exact(p);
  if (e.breakpoints.size() == 1) return BigRational(0);
  const BigRational ep = exact_from_double(eps);
  std::vector<BigRational> events{BigRational(0)};
  for (const auto& b : e.breakpoints) {
    events.push_back(frac_of(b - ep));
    events.push_back(frac_of(b + ep));
  }
  std::sort(events.begin(), events.end());
  events.erase(std::unique(events.begin(), events.end()), events.end());
  events.push_back(1);
  BigRational total = 0;
  for (std::size_t j = 0; j + 1 < events.size(); ++j) {
    const BigRational x = (events[j] + events[j + 1]) / 2;
    const BigRational left = x - ep;
    BigRational lo = e.at(left), hi = lo;
    for (std::size_t i = 0; i < e.breakpoints.size(); ++i) {
      if (frac_of(e.breakpoints[i] - left) < 2 * ep) {
        lo = std::min(lo, e.values[i]);
        hi = std::max(hi, e.values[i]);
      }
    }
    total += (hi - lo) * (events[j + 1] - events[j]);
  }
  return total;
}

double osc_integral(const PeriodicPotential& p, double eps) {
  if (auto exact = osc_integral_exact(p, eps)) return to_double(*exact);
  if (p.has_singularity()) return std::numeric_limits<double>::infinity();

  // Sup-scan: sample each window, then refine the extremes by golden-section search.
  constexpr int kOuter = 2048;
  constexpr int kInner = 64;
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  auto refine = [&](double lo, double hi, double sign) {
    double a = lo, b = hi;
    for (int it = 0; it < 40; ++it) {
      const double c = b - invphi * (b - a);
      const double d = a + invphi * (b - a);
      if (sign * eval_fast(p, c) > sign * eval_fast(p, d)) b = d; else a = c;
    }
    return eval_fast(p, 0.5 * (a + b));
  };
  double total = 0.0;
  for (int i = 0; i < kOuter; ++i) {
    const double x = (i + 0.5) / kOuter;
    const double a = x - eps;
    const double h = 2.0 * eps / kInner;
    int imax = 0, imin = 0;
    double vmax = -std::numeric_limits<double>::infinity(), vmin = -vmax;
    for (int k = 0; k <= kInner; ++k) {
      const double v = eval_fast(p, a + k * h);
      if (v > vmax) { vmax = v; imax = k; }
      if (v < vmin) { vmin = v; imin = k; }
    }
    vmax = std::max(vmax, refine(a + std::max(0, imax - 1) * h, a + std::min(kInner, imax + 1) * h, 1.0));
    vmin = std::min(vmin, refine(a + std::max(0, imin - 1) * h, a + std::min(kInner, imin + 1) * h, -1.0));
    total += (vmax - vmin) / kOuter;
  }
  return total;
}

HolderFit holder_certificate(const PeriodicPotential& p, const std::vector<double>& eps_grid) {
  HolderFit fit;
  if (eps_grid.size() < 2) {
    fit.reason = "need at least two scales";
    return fit;
  }
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    if (!(eps_grid[i] > 0.0 && eps_grid[i] < 0.25)) throw DomainError("eps grid values must lie in (0, 1/4)");
    if (i > 0 && !(eps_grid[i] < eps_grid[i - 1])) throw DomainError("eps grid must be strictly decreasing");
  }
  fit.eps_max = eps_grid.front();
  fit.eps_min = eps_grid.back();
  for (double e : eps_grid) fit.osc_values.push_back(osc_integral(p, e));

  const bool all_zero = std::all_of(fit.osc_values.begin(), fit.osc_values.end(), [](double v) { return v == 0.0; });
  if (all_zero) {
    fit.ok = true;
    fit.D = fit.D_fit = 0.0;
    fit.delta = 1.0;
    return fit;
  }
  for (double v : fit.osc_values) {
    if (!std::isfinite(v)) {
      fit.reason = "oscillation integral is unbounded";
      return fit;
    }
    if (!(v > 0.0)) {
      fit.reason = "oscillation integral vanishes on part of the grid";
      return fit;
    }
  }
  const auto n = static_cast<double>(eps_grid.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    const double x = std::log(eps_grid[i]);
    const double y = std::log(fit.osc_values[i]);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  fit.delta = (n * sxy - sx * sy) / denom;
  fit.D_fit = std::exp((sy - fit.delta * sx) / n);
  if (!(fit.delta > 1e-3)) {
    fit.reason = "oscillation integral does not decay with eps";
    return fit;
  }
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    fit.D = std::max(fit.D, fit.osc_values[i] / std::pow(eps_grid[i], fit.delta));
  }
  fit.ok = true;
  return fit;
}

}  // namespace gordonlab
