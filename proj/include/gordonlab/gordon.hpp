#pragma once

// The approximant distance
//   I_m = integral over [-q_m, 2 q_m] of |V2(x alpha + theta) - V2(x alpha_m + theta)| dx
// and the analytic bounds that control it for step, smooth and power-singular V2.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gordonlab/exact_arith.hpp"
#include "gordonlab/line_potential.hpp"
#include "gordonlab/potential.hpp"

namespace gordonlab {

enum class L1Method { Trivial, ExactStep, ClosedFormSingular, Quadrature };

struct L1Distance {
  double value = 0.0;
  std::optional<BigRational> exact;  // set for step-only V2 and trivial cases
  double error_bound = 0.0;          // quadrature error estimate, 0 for exact routes
  L1Method method = L1Method::Trivial;
  std::size_t pieces = 0;

  /// ln(value); uses the exact rational when available.
  double log_value() const;
};

struct L1Options {
  std::size_t breakpoint_budget = kDefaultBreakpointBudget;
  /// Largest window length (in units of q_m) accepted by the quadrature route.
  double quadrature_q_limit = 1e4;
  double quadrature_tol = 1e-14;
};

/// Integral over (a, b) of |V2(x alpha + theta) - V2(x beta + theta)| for exact alpha, beta.
L1Distance l1_distance_between(const PeriodicPotential& v2, const BigRational& alpha, const BigRational& beta,
                               const BigRational& theta, const BigRational& a, const BigRational& b,
                               const L1Options& options = {});

/// I_m over the default window (-q_m, 2 q_m).
L1Distance l1_distance(const QuasiPotential& q, std::size_t m, const L1Options& options = {});
L1Distance l1_distance(const QuasiPotential& q, std::size_t m, const BigRational& a, const BigRational& b,
                       const L1Options& options = {});

/// (3 q_m alpha + 1) / alpha * D * (2 q_m |alpha - alpha_m|)^delta, with |alpha - alpha_m|
/// replaced by its exact enclosure.
double osc_bound(const QuasiPotential& q, std::size_t m, double D, double delta);

/// p_m^{2-gamma} |alpha q_m / p_m - 1|^{1-gamma}; theta = 0 and a single power-singular V2 only.
double singular_bound(const QuasiPotential& q, std::size_t m);

struct GordonRow {
  std::size_t m = 0;
  BigInt a_m;
  BigInt q_m;
  BigRational alpha_err_upper;
  L1Distance distance;
  double C = 0.0;
  double log_scaled = 0.0;  // C q_m + ln I_m  (-inf when I_m = 0)
  std::optional<double> osc_bound;
  std::optional<double> sing_bound;
  std::optional<double> sing_ratio;  // I_m / sing_bound
};

struct GordonReport {
  double C = 0.0;
  std::vector<GordonRow> rows;
  /// log_scaled strictly decreasing over the computed rows.
  bool decreasing = false;
};

struct GordonOptions {
  std::optional<std::pair<double, double>> holder;  // (D, delta) for the oscillation bound
  bool singular_bound = false;
  unsigned threads = 1;
  L1Options l1;
};

GordonReport gordon_sequence(const QuasiPotential& q, double C, std::size_t m_lo, std::size_t m_hi,
                             const GordonOptions& options = {});

/// Throws InvariantViolation naming the row if I_m exceeds a reported oscillation bound.
void check_osc_dominance(const GordonReport& report);

std::string to_string(L1Method method);

}  // namespace gordonlab
