#pragma once

#include <iosfwd>

#include "gordonlab/config.hpp"

namespace gordonlab {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitInvariant = 2, kExitResource = 3 };

/// Executes one validated configuration. Artifacts go to cfg.out (atomically) or to `out`.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace gordonlab
