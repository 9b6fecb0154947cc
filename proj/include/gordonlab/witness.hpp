#pragma once

// Non-decay witnesses: the quasiperiodic solution stays close to the solution of
// the periodic approximant on [-q_m, 2 q_m], and the approximant solution is large
// at one of -q_m, q_m, 2 q_m, so the quasiperiodic one is large there too.

#include <optional>
#include <string>
#include <vector>

#include "gordonlab/exact_arith.hpp"
#include "gordonlab/line_potential.hpp"
#include "gordonlab/propagator.hpp"

namespace gordonlab {

struct GronwallCheck {
  double lhs = 0.0;       // |(u1 - u2, u1' - u2')(x)|
  double integral = 0.0;  // integral between 0 and x of |W1 - W2| |(u2, u2')|
  double C = 0.0;         // exp(1 + ||W1 - E||_{1,unif})
  double log_rhs = 0.0;   // ln(C e^{C|x|} integral)
  double rhs = 0.0;       // may be +inf
  double noise = 0.0;     // integration error allowance added to rhs
  bool pass = false;
};

/// Compares two solutions started from the same data at 0 against the
/// Gronwall-type bound C e^{C|x|} times the integral of |W1 - W2| |(u2, u2')|.
GronwallCheck gronwall_check(const LinePotential& w1, const LinePotential& w2, double energy, const BigRational& x,
                             const SolutionState& init = {}, double tol = kDefaultTol);

struct GrowthBound {
  double norm = 0.0;       // computed |(u, u')(x)|
  double log_bound = 0.0;  // |x| + (|x| + 1) ||W - E||_{1,unif}
  double C = 0.0;          // exp(1 + ||W - E||_{1,unif})
  double log_bound_C = 0.0;  // ln(C e^{C|x|}), never smaller than log_bound
  bool pass = false;
};

/// A-priori growth bound |(u, u')(x)| <= |(u, u')(0)| exp(integral of (1 + |W - E|)).
GrowthBound growth_bound(const LinePotential& w, double energy, const BigRational& x, const SolutionState& init = {},
                         double tol = kDefaultTol);

struct WitnessPoint {
  BigRational x;
  double norm = 0.0;           // quasiperiodic solution
  double norm_approx = 0.0;    // approximant solution
  double verified_norm = 0.0;  // independent re-propagation at a tighter tolerance
};

struct WitnessRow {
  std::size_t m = 0;
  BigInt q_m;
  double sup_diff_sampled = 0.0;
  /// Interval-rigorous sup for piecewise-constant potentials, nullopt otherwise.
  std::optional<double> sup_diff_rigorous;
  bool pass = false;
  std::optional<ThreePointBound> three_point;
  std::vector<WitnessPoint> witnesses;
  double gronwall_max_ratio = 0.0;  // max over audited points of lhs / rhs
  std::size_t samples = 0;
  bool complete = true;
  std::string note;
};

struct WitnessReport {
  double energy = 0.0;
  double D = 1.0 / 16.0;  // squared lower bound 1/4
  std::vector<WitnessRow> rows;
  /// Smallest m from which every computed order passes.
  std::optional<std::size_t> m0;
  bool complete = true;

  /// Every witness point in increasing order of m.
  std::vector<WitnessPoint> witness_sequence() const;
};

struct WitnessOptions {
  SolutionState init{0.0, 1.0, 0.0};
  /// Grid points per unit length on the window.
  std::size_t density = 16;
  double tol = kDefaultTol;
  /// Largest q_m handled; larger orders are reported incomplete.
  double q_limit = 1e4;
  bool gronwall_audit = true;
};

WitnessReport witness_run(const QuasiPotential& q, double energy, std::size_t m_lo, std::size_t m_hi,
                          const WitnessOptions& options = {});

}  // namespace gordonlab
