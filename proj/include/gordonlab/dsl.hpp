#pragma once

// Text form of periodic potentials:
//
//   potential := term ( "+" term )*
//   term      := [ number "*" ] atom
//   atom      := "step{" pair ("," pair)* "}" | "cos(" int "," number "," number ")"
//              | "sing(" number "," number ")" | "zero"
//   pair      := rational ":" number
//
// Numbers accept a sign, decimals, exponents and p/q.

#include <string>
#include <string_view>

#include "gordonlab/potential.hpp"

namespace gordonlab {

/// Throws ParseError with 1-based line and column.
PeriodicPotential parse_potential(std::string_view text);

/// Canonical text that parses back to an identical potential.
std::string to_dsl(const PeriodicPotential& p);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double value);

}  // namespace gordonlab
