#pragma once

// Solutions of -u'' + (W - E) u = 0 as the first-order system
// (u, u')' = [[0, 1], [W - E, 0]] (u, u').
//
// Piecewise-constant stretches use closed-form cos/cosh/linear blocks. Other
// stretches use a fourth-order Magnus step built from the exact moments of W,
// so integrable singularities are never sampled. Every step is the exponential
// of a traceless matrix and keeps det = 1.

#include <vector>

#include "gordonlab/exact_arith.hpp"
#include "gordonlab/line_potential.hpp"

namespace gordonlab {

struct Matrix2 {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;  // [[a, b], [c, d]]

  static Matrix2 identity() { return {}; }
  double det() const { return a * d - b * c; }
  double trace() const { return a + d; }
  Matrix2 inverse() const { return {d, -b, -c, a}; }  // valid for det == 1
  double op_norm() const;
  double max_abs() const;
  bool finite() const;
};

Matrix2 operator*(const Matrix2& x, const Matrix2& y);
Matrix2 operator-(const Matrix2& x, const Matrix2& y);
Matrix2 operator+(const Matrix2& x, const Matrix2& y);
Matrix2 operator*(double s, const Matrix2& x);

/// exp([[p, q], [r, -p]])
Matrix2 expm_traceless(double p, double q, double r);

struct SolutionState {
  double x = 0.0;
  double u = 1.0;
  double du = 0.0;

  double norm() const;
  double norm2() const { return u * u + du * du; }
  bool normalized(double tol = 1e-12) const;
};

SolutionState apply(const Matrix2& m, const SolutionState& s, double new_x);

inline constexpr double kDefaultTol = 1e-10;

/// Transfer matrix of the piece over [tau0, tau1] in local coordinates.
Matrix2 piece_matrix(const Piece& piece, double energy, double tau0, double tau1, double tol = kDefaultTol);

/// Transfer matrix M(x, y) mapping (u(x), u'(x)) to (u(y), u'(y)); x <= y not required.
Matrix2 transfer_matrix(const LinePotential& w, double energy, const BigRational& from, const BigRational& to,
                        double tol = kDefaultTol);

SolutionState propagate(const LinePotential& w, double energy, const SolutionState& from, double to_x,
                        double tol = kDefaultTol);
SolutionState propagate(const LinePotential& w, double energy, const SolutionState& from, const BigRational& from_x,
                        const BigRational& to_x, double tol = kDefaultTol);

/// States at every target, propagated outward from `origin` in both directions.
/// The result is aligned with `targets`.
std::vector<SolutionState> propagate_path(const LinePotential& w, double energy, const SolutionState& init,
                                          const BigRational& origin, const std::vector<BigRational>& targets,
                                          double tol = kDefaultTol);

struct Monodromy {
  Matrix2 matrix;
  double from = 0.0;
  double to = 0.0;
  double energy = 0.0;

  double det() const { return matrix.det(); }
  double trace() const { return matrix.trace(); }
  /// Operator norm of M^2 - tr(M) M + I.
  double cayley_hamilton_residual() const;
};

Monodromy monodromy(const LinePotential& w, double energy, const BigRational& period, double tol = kDefaultTol);
Monodromy monodromy(const LinePotential& w, double energy, double period, double tol = kDefaultTol);

struct ThreePointBound {
  double norm_minus_p = 0.0;  // |(u, u')(-p)|
  double norm_p = 0.0;        // |(u, u')(p)|
  double norm_2p = 0.0;       // |(u, u')(2p)|
  double max = 0.0;
  double trace = 0.0;
  /// |tr M| <= 1: the pair (p, 2p) carries max >= 1/2.
  /// |tr M| > 1:  the pair (-p, p) carries max >= |tr M| / 2.
  bool small_trace = false;
  double pair_max = 0.0;
  double pair_claim = 0.0;
};

/// Three-point non-decay bound for a p-periodic potential. Throws
/// InvariantViolation if the bound or the per-case pair claim fails beyond 1e-9.
ThreePointBound three_point_bound(const Monodromy& m, const SolutionState& init);
ThreePointBound three_point_bound(const LinePotential& w, double energy, const BigRational& period,
                                  const SolutionState& init, double tol = kDefaultTol);

}  // namespace gordonlab
