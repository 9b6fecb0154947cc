#pragma once

// CSV tables, SVG line charts and atomic file output.

#include <string>
#include <vector>

#include "gordonlab/gordon.hpp"
#include "gordonlab/propagator.hpp"
#include "gordonlab/witness.hpp"

namespace gordonlab {

inline const std::vector<std::string> kGordonColumns{"m", "a_m", "q_m", "alpha_err_upper", "I_m",
                                                     "C", "log_scaled", "osc_bound", "sing_bound"};
inline const std::vector<std::string> kWitnessColumns{"E", "m", "q_m", "sup_diff_sampled", "sup_diff_rigorous",
                                                      "pass", "witness_x", "witness_norm"};
inline const std::vector<std::string> kMonodromyColumns{"m", "E", "q_m", "m11", "m12", "m21",
                                                        "m22", "trace", "det", "ch_residual"};

/// 17 significant digits; "inf", "-inf", "nan" for non-finite values.
std::string format_float(double v);

std::string gordon_csv(const GordonReport& report);
/// One line per witness point; a row without witnesses leaves the last two fields empty.
std::string witness_csv(const std::vector<WitnessReport>& reports);

struct MonodromyRow {
  std::size_t m = 0;
  BigInt q_m;
  Monodromy mono;
};
std::string monodromy_csv(const std::vector<MonodromyRow>& rows);

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

/// Minimal line chart. Non-finite points are skipped.
std::string svg_line_chart(const std::vector<Series>& series, const std::string& title, const std::string& x_label,
                           const std::string& y_label);

/// Writes to a temporary sibling and renames it over `path`.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace gordonlab
