#pragma once

// Potentials on the real line built from periodic atoms composed with exact
// affine phases x -> slope * x + offset. Quasiperiodic potentials, their
// periodic approximants and differences of potentials are all of this form.

#include <cstddef>
#include <vector>

#include "gordonlab/exact_arith.hpp"
#include "gordonlab/potential.hpp"

namespace gordonlab {

struct QuasiPotential {
  PeriodicPotential v1;
  PeriodicPotential v2;
  FrequencySpec alpha;
  BigRational theta;  // in [0, 1)

  QuasiPotential(PeriodicPotential v1, PeriodicPotential v2, FrequencySpec alpha, BigRational theta);
};

/// V^{(m)}(x) = V1(x) + V2(x alpha_m + theta), periodic with period q_m.
struct ApproximantPotential {
  QuasiPotential source;
  std::size_t m;
  BigRational alpha_m;
  BigInt period;

  ApproximantPotential(const QuasiPotential& q, std::size_t m);
};

/// V1(x) + V2(x alpha + theta) with the phase reduced exactly.
double eval_quasi(const QuasiPotential& q, const BigRational& x);
double eval_quasi(const ApproximantPotential& a, const BigRational& x);

struct LineTerm {
  double coefficient = 1.0;
  Atom atom;
  BigRational slope = 1;
  BigRational offset = 0;
};

class Piece;

/// Default cap on breakpoints enumerated in one window.
inline constexpr std::size_t kDefaultBreakpointBudget = 5'000'000;

class LinePotential {
 public:
  LinePotential() = default;
  explicit LinePotential(std::vector<LineTerm> terms);

  static LinePotential periodic(const PeriodicPotential& p);
  /// p(slope * x + offset)
  static LinePotential composed(const PeriodicPotential& p, const BigRational& slope, const BigRational& offset);
  static LinePotential constant(double value);
  static LinePotential quasi(const QuasiPotential& q);
  static LinePotential approximant(const ApproximantPotential& a);

  /// Sum and difference; identical terms are merged, cancelled terms dropped.
  LinePotential operator+(const LinePotential& other) const;
  LinePotential operator-(const LinePotential& other) const;
  LinePotential scaled(double c) const;

  const std::vector<LineTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// True when every term is piecewise constant.
  bool is_piecewise_constant() const;
  bool has_singularity() const;

  double eval(const BigRational& x) const;

  /// Sorted points in the open interval (a, b) where some term changes branch:
  /// step jumps, singular points and the seams half a period away from them.
  std::vector<BigRational> breakpoints(const BigRational& a, const BigRational& b,
                                       std::size_t budget = kDefaultBreakpointBudget) const;
  std::size_t breakpoint_count_estimate(const BigRational& a, const BigRational& b) const;

  /// Local description on [a, b], which must not contain a breakpoint in its interior.
  Piece piece(const BigRational& a, const BigRational& b) const;

  /// Upper bound on sup_x of the integral of |W| over [x, x+1]. Exact when every
  /// term is a step function and the common period is small.
  double l1_unif_norm() const;

 private:
  void normalize();
  std::vector<LineTerm> terms_;
};

/// A potential restricted to a breakpoint-free interval, in the local coordinate
/// tau = x - start in [0, length].
class Piece {
 public:
  struct Local {
    enum class Kind { Constant, Cos, Singular } kind = Kind::Constant;
    double value = 0.0;   // Constant: coefficient * value
    double amp = 0.0;     // Cos: coefficient * amplitude; Singular: coefficient * scale
    double phase0 = 0.0;  // Cos: 2 pi k phi(start) + phase, reduced
    double omega = 0.0;   // Cos: 2 pi k slope
    double gamma = 0.0;   // Singular
    double r0 = 0.0;      // Singular: signed distance of phi(start) from the singular lattice point
    double slope = 0.0;   // Singular: d r / d tau
    double sign = 1.0;    // Singular: sign of r on the piece
  };

  struct Moments {
    double m0 = 0.0;  // integral of W over [tau0, tau1]
    double m1 = 0.0;  // integral of (tau - center) W
  };

  BigRational start;
  BigRational end;
  double length = 0.0;
  std::vector<Local> locals;

  bool is_constant() const;
  double constant_value() const;
  double value(double tau) const;
  Moments moments(double tau0, double tau1) const;
  /// Integral of |W| over [tau0, tau1] (closed form when W has one sign per term class,
  /// quadrature otherwise).
  double abs_integral(double tau0, double tau1) const;
};

}  // namespace gordonlab
