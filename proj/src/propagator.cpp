#include "gordonlab/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "gordonlab/errors.hpp"

namespace gordonlab {

double Matrix2::op_norm() const {
  const double s = 0.5 * (a * a + b * b + c * c + d * d);
  const double dt = det();
  return std::sqrt(s + std::sqrt(std::max(0.0, s * s - dt * dt)));
}

double Matrix2::max_abs() const { return std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)}); }

bool Matrix2::finite() const {
  return std::isfinite(a) && std::isfinite(b) && std::isfinite(c) && std::isfinite(d);
}

Matrix2 operator*(const Matrix2& x, const Matrix2& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

Matrix2 operator-(const Matrix2& x, const Matrix2& y) { return {x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d}; }
Matrix2 operator+(const Matrix2& x, const Matrix2& y) { return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d}; }
Matrix2 operator*(double s, const Matrix2& x) { return {s * x.a, s * x.b, s * x.c, s * x.d}; }

Matrix2 expm_traceless(double p, double q, double r) {
  // Omega^2 = z I with z = p^2 + q r, so exp(Omega) = C(z) I + S(z) Omega.
  const double z = p * p + q * r;
  double C, S;
  if (std::abs(z) < 1e-8) {
    C = 1.0 + z / 2.0 + z * z / 24.0;
    S = 1.0 + z / 6.0 + z * z / 120.0;
  } else if (z > 0.0) {
    const double s = std::sqrt(z);
    C = std::cosh(s);
    S = std::sinh(s) / s;
  } else {
    const double s = std::sqrt(-z);
    C = std::cos(s);
    S = std::sin(s) / s;
  }
  return {C + S * p, S * q, S * r, C - S * p};
}

double SolutionState::norm() const { return std::hypot(u, du); }

bool SolutionState::normalized(double tol) const { return std::abs(norm2() - 1.0) <= tol; }

SolutionState apply(const Matrix2& m, const SolutionState& s, double new_x) {
  return {new_x, m.a * s.u + m.b * s.du, m.c * s.u + m.d * s.du};
}

Matrix2 piece_matrix(const Piece& piece, double energy, double tau0, double tau1, double tol) {
  if (tau1 <= tau0) return Matrix2::identity();
  if (piece.is_constant()) {
    const double h = tau1 - tau0;
    return expm_traceless(0.0, h, (piece.constant_value() - energy) * h);
  }
  if (!(tol > 0.0)) throw DomainError("integration tolerance must be positive");

  auto magnus = [&](double t0, double t1) {
    const Piece::Moments mo = piece.moments(t0, t1);
    const double h = t1 - t0;
    return expm_traceless(-mo.m1, h, mo.m0 - energy * h);
  };
  const double x0 = to_double(piece.start);
  Matrix2 total = Matrix2::identity();
  double tau = tau0;
  double h = std::min(tau1 - tau0, 0.125);
  const double h_min = 1e-15 * std::max(1.0, std::abs(x0) + piece.length);
  for (long iter = 0; tau < tau1; ++iter) {
    if (iter > 50'000'000) throw IntegrationError("integrator step limit exceeded", x0 + tau);
    h = std::min(h, tau1 - tau);
    const double mid = tau + 0.5 * h;
    const Matrix2 full = magnus(tau, tau + h);
    const Matrix2 halves = magnus(mid, tau + h) * magnus(tau, mid);
    const double err = (halves - full).max_abs() / std::max(1.0, halves.max_abs());
    if (!halves.finite() || !std::isfinite(err)) throw IntegrationError("numerical blowup", x0 + tau);
    if (err <= tol || h <= h_min) {
      if (err > tol && h <= h_min) {
        std::ostringstream os;
        os << "step-size underflow near x = " << x0 + tau;
        throw IntegrationError(os.str(), x0 + tau);
      }
      total = halves * total;
      if (!total.finite()) throw IntegrationError("numerical blowup", x0 + tau);
      tau = (tau + h >= tau1) ? tau1 : tau + h;
    }
    const double factor = err > 0.0 ? 0.9 * std::pow(tol / err, 0.2) : 4.0;
    h *= std::clamp(factor, 0.2, 4.0);
  }
  return total;
}

Matrix2 transfer_matrix(const LinePotential& w, double energy, const BigRational& from, const BigRational& to,
                        double tol) {
  if (from == to) return Matrix2::identity();
  if (to < from) return transfer_matrix(w, energy, to, from, tol).inverse();
  std::vector<BigRational> cuts{from};
  const auto bps = w.breakpoints(from, to);
  cuts.insert(cuts.end(), bps.begin(), bps.end());
  cuts.push_back(to);
  Matrix2 total = Matrix2::identity();
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const Piece pc = w.piece(cuts[i], cuts[i + 1]);
    total = piece_matrix(pc, energy, 0.0, pc.length, tol) * total;
    if (!total.finite()) throw IntegrationError("numerical blowup", to_double(cuts[i + 1]));
  }
  return total;
}

SolutionState propagate(const LinePotential& w, double energy, const SolutionState& from, const BigRational& from_x,
                        const BigRational& to_x, double tol) {
  return apply(transfer_matrix(w, energy, from_x, to_x, tol), from, to_double(to_x));
}

SolutionState propagate(const LinePotential& w, double energy, const SolutionState& from, double to_x, double tol) {
  return propagate(w, energy, from, exact_from_double(from.x), exact_from_double(to_x), tol);
}

std::vector<SolutionState> propagate_path(const LinePotential& w, double energy, const SolutionState& init,
                                          const BigRational& origin, const std::vector<BigRational>& targets,
                                          double tol) {
  std::vector<SolutionState> out(targets.size());
  std::vector<std::size_t> order(targets.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return targets[i] < targets[j]; });

  std::vector<std::size_t> forward, backward;
  for (std::size_t i : order) (targets[i] >= origin ? forward : backward).push_back(i);
  std::reverse(backward.begin(), backward.end());

  auto sweep = [&](const std::vector<std::size_t>& idx, bool ascending) {
    if (idx.empty()) return;
    const BigRational& far = targets[idx.back()];
    std::vector<BigRational> cuts = ascending ? w.breakpoints(origin, far) : w.breakpoints(far, origin);
    for (std::size_t i : idx) cuts.push_back(targets[i]);
    cuts.push_back(origin);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    if (!ascending) std::reverse(cuts.begin(), cuts.end());

    SolutionState state = init;
    state.x = to_double(origin);
    std::size_t next = 0;
    auto record = [&](const BigRational& at) {
      while (next < idx.size() && targets[idx[next]] == at) {
        out[idx[next]] = state;
        ++next;
      }
    };
    record(cuts.front());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const BigRational& a = ascending ? cuts[i] : cuts[i + 1];
      const BigRational& b = ascending ? cuts[i + 1] : cuts[i];
      const Piece pc = w.piece(a, b);
      Matrix2 m = piece_matrix(pc, energy, 0.0, pc.length, tol);
      if (!ascending) m = m.inverse();
      state = apply(m, state, to_double(cuts[i + 1]));
      if (!std::isfinite(state.u) || !std::isfinite(state.du)) {
        throw IntegrationError("numerical blowup", to_double(cuts[i]));
      }
      record(cuts[i + 1]);
    }
  };
  sweep(forward, true);
  sweep(backward, false);
  return out;
}

double Monodromy::cayley_hamilton_residual() const {
  const Matrix2 r = matrix * matrix - matrix.trace() * matrix + Matrix2::identity();
  return r.op_norm();
}

Monodromy monodromy(const LinePotential& w, double energy, const BigRational& period, double tol) {
  if (period <= 0) throw DomainError("period must be positive");
  return {transfer_matrix(w, energy, 0, period, tol), 0.0, to_double(period), energy};
}

Monodromy monodromy(const LinePotential& w, double energy, double period, double tol) {
  return monodromy(w, energy, exact_from_double(period), tol);
}

ThreePointBound three_point_bound(const Monodromy& mono, const SolutionState& init) {
  if (!init.normalized(1e-12)) throw DomainError("three_point_bound needs a normalized initial state");
  const Matrix2& M = mono.matrix;
  const double dt = M.det();
  const Matrix2 inv{M.d / dt, -M.b / dt, -M.c / dt, M.a / dt};
  const SolutionState v{0.0, init.u, init.du};
  const SolutionState vp = apply(M, v, mono.to);
  const SolutionState v2p = apply(M, vp, 2.0 * mono.to);
  const SolutionState vm = apply(inv, v, -mono.to);

  ThreePointBound r;
  r.norm_minus_p = vm.norm();
  r.norm_p = vp.norm();
  r.norm_2p = v2p.norm();
  r.max = std::max({r.norm_minus_p, r.norm_p, r.norm_2p});
  r.trace = M.trace();
  r.small_trace = std::abs(r.trace) <= 1.0;
  if (r.small_trace) {
    r.pair_max = std::max(r.norm_p, r.norm_2p);
    r.pair_claim = 0.5;
  } else {
    r.pair_max = std::max(r.norm_minus_p, r.norm_p);
    r.pair_claim = std::abs(r.trace) / 2.0;
  }
  constexpr double kSlack = 1e-9;
  if (r.max < 0.5 - kSlack || r.pair_max < r.pair_claim - kSlack * std::max(1.0, r.pair_claim)) {
    std::ostringstream os;
    os << "three-point bound violated: norms (" << r.norm_minus_p << ", " << r.norm_p << ", " << r.norm_2p
       << "), tr M = " << r.trace << ", E = " << mono.energy << ", p = " << mono.to << ", init = (" << init.u
       << ", " << init.du << ")";
    throw InvariantViolation(os.str());
  }
  return r;
}

ThreePointBound three_point_bound(const LinePotential& w, double energy, const BigRational& period,
                                  const SolutionState& init, double tol) {
  return three_point_bound(monodromy(w, energy, period, tol), init);
}

}  // namespace gordonlab
