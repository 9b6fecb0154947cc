#pragma once

// Validated run configuration with a canonical JSON form.

#include <optional>
#include <string>
#include <vector>

#include "gordonlab/exact_arith.hpp"
#include "gordonlab/json_io.hpp"
#include "gordonlab/line_potential.hpp"
#include "gordonlab/potential.hpp"

namespace gordonlab {

struct RunConfig {
  std::string command = "gordon";  // cf | monodromy | gordon | witness | plot
  std::string v1 = "zero";
  std::string v2 = "step{0:1, 1/2:0}";
  std::string alpha = "liouville-default";  // preset | cf:1,2,8 | rational:p/q
  std::string theta = "0";
  std::vector<double> energies{0.5};
  double bigC = 1.0;
  std::size_t m_lo = 1;
  std::size_t m_hi = 3;
  double tol = 1e-10;
  std::string out;  // empty: standard output
  std::string format = "csv";

  std::optional<std::string> rational;  // cf --rational p/q
  double certify_B = 1.0;
  std::optional<double> osc_D;
  std::optional<double> osc_delta;
  std::size_t density = 16;
  std::string plot_kind = "gordon";  // gordon | profile
  unsigned threads = 1;

  bool operator==(const RunConfig&) const = default;

  /// Parses every textual field, canonicalizes it in place and returns *this.
  /// Throws ParseError (with position) or DomainError.
  RunConfig& validate();

  PeriodicPotential potential_v1() const;
  PeriodicPotential potential_v2() const;
  FrequencySpec frequency() const;
  BigRational theta_value() const;
  QuasiPotential quasi() const;
};

/// "liouville-default", "golden", "cf:1,2,8" or "rational:p/q".
FrequencySpec parse_frequency(const std::string& text);
/// Canonical spelling of a frequency spec string.
std::string canonical_frequency(const std::string& text);

/// "a..b" or a single "a".
std::pair<std::size_t, std::size_t> parse_m_range(const std::string& text);
std::vector<double> parse_energies(const std::string& text);

Json config_to_json(const RunConfig& cfg);
RunConfig config_from_json(const Json& j);

}  // namespace gordonlab
