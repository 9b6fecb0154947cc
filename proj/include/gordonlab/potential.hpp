#pragma once

// 1-periodic sampling functions: step functions, trigonometric terms and
// periodized power singularities, plus finite linear combinations of them.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gordonlab/exact_arith.hpp"

namespace gordonlab {

/// Value values[i] on [breakpoints[i], breakpoints[i+1]), wrapping around 1.
struct StepFunction {
  std::vector<BigRational> breakpoints;
  std::vector<double> values;

  /// Index of the piece containing frac(x).
  std::size_t piece_at(const BigRational& x) const;
  bool operator==(const StepFunction&) const = default;
};

/// amplitude * cos(2 pi k x + phase)
struct Cosine {
  long k = 1;
  double amplitude = 1.0;
  double phase = 0.0;
  bool operator==(const Cosine&) const = default;
};

/// Periodization of scale * |x|^{-gamma} from [-1/2, 1/2].
struct PowerSingular {
  double gamma = 0.5;
  double scale = 1.0;
  bool operator==(const PowerSingular&) const = default;
};

using Atom = std::variant<StepFunction, Cosine, PowerSingular>;

struct Term {
  double coefficient = 1.0;
  Atom atom;
  bool operator==(const Term&) const = default;
};

enum class PotentialKind { Zero, Step, Smooth, PowerSingular, Sum };

class PeriodicPotential {
 public:
  PeriodicPotential() = default;

  static PeriodicPotential zero() { return {}; }
  static PeriodicPotential step(std::vector<BigRational> breakpoints, std::vector<double> values);
  static PeriodicPotential constant(double value);
  static PeriodicPotential cosine(long k, double amplitude, double phase);
  static PeriodicPotential power_singular(double gamma, double scale);
  /// Flattened linear combination.
  static PeriodicPotential sum(const std::vector<std::pair<double, PeriodicPotential>>& parts);

  PeriodicPotential scaled(double c) const;
  PeriodicPotential operator+(const PeriodicPotential& other) const;

  PotentialKind kind() const;
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_step_only() const;
  bool has_singularity() const;

  bool operator==(const PeriodicPotential&) const = default;

 private:
  std::vector<Term> terms_;
};

StepFunction make_step(std::vector<BigRational> breakpoints, std::vector<double> values);

/// Throws SingularityHit at the singular lattice point of a PowerSingular term.
double eval(const Atom& atom, const BigRational& x);
double eval(const PeriodicPotential& p, const BigRational& x);
double eval(const PeriodicPotential& p, double x);

/// Merges the step terms of a step-only potential into one step function
/// with exactly summed values.
StepFunction merge_steps(const PeriodicPotential& p);

/// sup_x of the integral of |p| over [x, x+1]; for a 1-periodic p this is the
/// integral over one period.
double l1_unif_norm(const PeriodicPotential& p);
/// Exact version for step-only potentials.
std::optional<BigRational> l1_unif_norm_exact(const PeriodicPotential& p);
/// sum |c_i| * l1_unif_norm(term_i)
double l1_unif_norm_triangle(const PeriodicPotential& p);

/// sup over windows of phase length `width` <= 1 of the integral of |atom|.
double window_l1_sup(const Atom& atom, double width);

/// Integral over [0, 1] of the oscillation sup |p(y) - p(z)| on (x - eps, x + eps).
/// Returns +infinity when p has a power singularity.
double osc_integral(const PeriodicPotential& p, double eps);
/// Exact value for step-only potentials, nullopt otherwise.
std::optional<BigRational> osc_integral_exact(const PeriodicPotential& p, double eps);

struct HolderFit {
  bool ok = false;
  double D = 0.0;      // smallest constant with osc_integral(eps) <= D eps^delta on the grid
  double D_fit = 0.0;  // least-squares intercept exp(b)
  double delta = 0.0;
  double eps_min = 0.0;
  double eps_max = 0.0;
  std::vector<double> osc_values;
  std::string reason;
};

/// Log-log least squares of osc_integral against eps over a decreasing grid.
HolderFit holder_certificate(const PeriodicPotential& p, const std::vector<double>& eps_grid);

}  // namespace gordonlab
