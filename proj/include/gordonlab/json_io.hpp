#pragma once

// JSON forms of the exact and numeric results. Big integers are decimal strings.

#include "json.hpp"

#include "gordonlab/exact_arith.hpp"
#include "gordonlab/gordon.hpp"
#include "gordonlab/propagator.hpp"
#include "gordonlab/witness.hpp"

namespace gordonlab {

using Json = nlohmann::ordered_json;

/// {"cf": ["1", "2", ...]}
Json cf_to_json(const ContinuedFraction& cf);
ContinuedFraction cf_from_json(const Json& j);

/// {"rational": ["p", "q"]}
Json rational_to_json(const BigRational& r);
BigRational rational_from_json(const Json& j);

/// {"matrix": [a, b, c, d], "interval": [from, to], "energy": E}
Json monodromy_to_json(const Monodromy& m);
Monodromy monodromy_from_json(const Json& j);

/// Non-finite doubles become the strings "inf", "-inf", "nan".
Json number_to_json(double v);

Json gordon_to_json(const GordonReport& report);
Json witness_to_json(const WitnessReport& report);

}  // namespace gordonlab
