#include "gordonlab/witness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gordonlab/errors.hpp"
#include "gordonlab/quadrature.hpp"

namespace gordonlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<BigRational> merged_cuts(const std::vector<const LinePotential*>& ws, const BigRational& lo,
                                     const BigRational& hi, const BigRational& spacing) {
  std::vector<BigRational> cuts{lo, hi};
  for (const auto* w : ws) {
    const auto bps = w->breakpoints(lo, hi);
    cuts.insert(cuts.end(), bps.begin(), bps.end());
  }
  for (BigInt k = floor_of(lo / spacing) + 1; BigRational(k * spacing) < hi; ++k) cuts.push_back(k * spacing);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

double exp_or_inf(double log_value) { return log_value > 709.0 ? kInf : std::exp(log_value); }

}  // namespace

GronwallCheck gronwall_check(const LinePotential& w1, const LinePotential& w2, double energy, const BigRational& x,
                             const SolutionState& init, double tol) {
  GronwallCheck out;
  const BigRational zero(0);
  const double ax = std::abs(to_double(x));
  out.C = std::exp(1.0 + (w1 + LinePotential::constant(-energy)).l1_unif_norm());

  SolutionState start = init;
  start.x = 0.0;
  const SolutionState u1 = propagate(w1, energy, start, zero, x, tol);
  const SolutionState u2 = propagate(w2, energy, start, zero, x, tol);
  out.lhs = std::hypot(u1.u - u2.u, u1.du - u2.du);

  const LinePotential diff = w1 - w2;
  if (!diff.is_zero() && x != 0) {
    const BigRational lo = x < 0 ? x : zero;
    const BigRational hi = x < 0 ? zero : x;
    const auto cuts = merged_cuts({&diff, &w2}, lo, hi, BigRational(1, 8));
    const auto states = propagate_path(w2, energy, start, zero, cuts, tol);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const Piece dp = diff.piece(cuts[i], cuts[i + 1]);
      if (dp.is_constant() && dp.constant_value() == 0.0) continue;
      const Piece wp = w2.piece(cuts[i], cuts[i + 1]);
      const SolutionState& s0 = states[i];
      auto f = [&](double tau) {
        const Matrix2 m = piece_matrix(wp, energy, 0.0, tau, tol);
        return std::abs(dp.value(tau)) * apply(m, s0, 0.0).norm();
      };
      const double scale = std::max(1.0, s0.norm());
      const bool singular = diff.has_singularity();
      const quad::Result r = singular ? quad::tanh_sinh(f, 0.0, dp.length, 1e-10 * scale, 8)
                                      : quad::gauss_kronrod(f, 0.0, dp.length, 1e-10 * scale, 20);
      out.integral += r.value;
    }
  }

  out.log_rhs = out.integral > 0.0 ? std::log(out.C) + out.C * ax + std::log(out.integral) : -kInf;
  out.rhs = out.integral > 0.0 ? exp_or_inf(out.log_rhs) : 0.0;
  // both solutions carry integration error of order tol relative to their size
  out.noise = 100.0 * tol * std::max({1.0, u1.norm(), u2.norm()});
  out.pass = out.lhs <= out.noise || (out.integral > 0.0 && std::log(out.lhs - out.noise) <= out.log_rhs);
  return out;
}

GrowthBound growth_bound(const LinePotential& w, double energy, const BigRational& x, const SolutionState& init,
                         double tol) {
  GrowthBound out;
  const double ax = std::abs(to_double(x));
  const double n = (w + LinePotential::constant(-energy)).l1_unif_norm();
  SolutionState start = init;
  start.x = 0.0;
  out.norm = propagate(w, energy, start, BigRational(0), x, tol).norm();
  const double log_init = std::log(std::max(init.norm(), std::numeric_limits<double>::min()));
  out.log_bound = log_init + ax + (ax + 1.0) * n;
  out.C = std::exp(1.0 + n);
  out.log_bound_C = log_init + std::log(out.C) + out.C * ax;
  out.pass = out.norm == 0.0 || std::log(out.norm) <= out.log_bound + 1e-9;
  return out;
}

std::vector<WitnessPoint> WitnessReport::witness_sequence() const {
  std::vector<WitnessPoint> out;
  for (const auto& row : rows) out.insert(out.end(), row.witnesses.begin(), row.witnesses.end());
  return out;
}

namespace {

WitnessRow witness_row(const QuasiPotential& q, double energy, std::size_t m, const WitnessOptions& opt) {
  WitnessRow row;
  row.m = m;
  row.q_m = q.alpha.q(m);
  if (to_double(BigRational(row.q_m)) > opt.q_limit) {
    row.complete = false;
    row.note = "q_m = " + to_string(row.q_m) + " exceeds the work budget";
    return row;
  }
  const ApproximantPotential approx(q, m);
  const LinePotential w = LinePotential::quasi(q);
  const LinePotential wm = LinePotential::approximant(approx);
  const BigRational qm(row.q_m);
  const BigRational zero(0);

  std::vector<BigRational> grid;
  try {
    grid = merged_cuts({&w, &wm}, -qm, 2 * qm, BigRational(1, static_cast<long>(opt.density)));
  } catch (const ResourceError& e) {
    row.complete = false;
    row.note = e.what();
    return row;
  }
  if (!std::binary_search(grid.begin(), grid.end(), zero)) {
    grid.insert(std::lower_bound(grid.begin(), grid.end(), zero), zero);
  }
  row.samples = grid.size();

  SolutionState init = opt.init;
  init.x = 0.0;
  const auto us = propagate_path(w, energy, init, zero, grid, opt.tol);
  const auto ums = propagate_path(wm, energy, init, zero, grid, opt.tol);

  auto diff_norm = [&](std::size_t i) { return std::hypot(us[i].u - ums[i].u, us[i].du - ums[i].du); };
  for (std::size_t i = 0; i < grid.size(); ++i) row.sup_diff_sampled = std::max(row.sup_diff_sampled, diff_norm(i));

  if (w.is_piecewise_constant() && wm.is_piecewise_constant()) {
    // Between grid points both systems have constant coefficients A1, A2:
    // |D(t)| <= e^{h|A1|} (|D(s)| + h |c1 - c2| e^{h|A2|} |Y2(s)|), measured from the end nearer 0.
    double sup = row.sup_diff_sampled;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
      const Piece p1 = w.piece(grid[i], grid[i + 1]);
      const Piece p2 = wm.piece(grid[i], grid[i + 1]);
      const double c1 = p1.constant_value(), c2 = p2.constant_value();
      const double h = p1.length;
      const std::size_t s = grid[i + 1] <= zero ? i + 1 : i;
      const double g1 = std::exp(h * std::max(1.0, std::abs(c1 - energy)));
      const double g2 = std::exp(h * std::max(1.0, std::abs(c2 - energy)));
      const double y2 = std::hypot(ums[s].u, ums[s].du);
      sup = std::max(sup, g1 * (diff_norm(s) + h * std::abs(c1 - c2) * g2 * y2));
    }
    row.sup_diff_rigorous = sup;
  }
  row.pass = row.sup_diff_sampled <= 0.25;
  if (!row.pass) return row;

  const Monodromy mono = monodromy(wm, energy, qm, opt.tol);
  SolutionState unit = init;
  const double n0 = init.norm();
  unit.u /= n0;
  unit.du /= n0;
  row.three_point = three_point_bound(mono, unit);

  for (const BigRational& x : {BigRational(-qm), qm, BigRational(2 * qm)}) {
    const std::size_t i = static_cast<std::size_t>(std::lower_bound(grid.begin(), grid.end(), x) - grid.begin());
    WitnessPoint pt;
    pt.x = x;
    pt.norm = us[i].norm();
    pt.norm_approx = ums[i].norm();

    if (opt.gronwall_audit) {
      const GronwallCheck g = gronwall_check(w, wm, energy, x, init, opt.tol);
      if (!g.pass) {
        std::ostringstream os;
        os << "Gronwall bound violated at m = " << m << ", x = " << to_string(x) << ": lhs " << g.lhs << " > rhs "
           << g.rhs;
        throw InvariantViolation(os.str());
      }
      if (g.rhs > 0.0) row.gronwall_max_ratio = std::max(row.gronwall_max_ratio, g.lhs / g.rhs);
    }

    if (pt.norm_approx < 0.5 * n0 - 1e-9) continue;
    pt.verified_norm = propagate(w, energy, init, zero, x, opt.tol * 1e-2).norm();
    if (pt.verified_norm < 0.25 * n0 - 1e-9) {
      std::ostringstream os;
      os << "witness at x = " << to_string(x) << " (m = " << m << ") re-verified to norm " << pt.verified_norm
         << " < 1/4";
      throw InvariantViolation(os.str());
    }
    row.witnesses.push_back(pt);
  }
  if (row.witnesses.empty()) {
    throw InvariantViolation("no witness among -q_m, q_m, 2 q_m at m = " + std::to_string(m));
  }
  return row;
}

}  // namespace

WitnessReport witness_run(const QuasiPotential& q, double energy, std::size_t m_lo, std::size_t m_hi,
                          const WitnessOptions& options) {
  if (m_lo < 1 || m_hi < m_lo) throw RangeError("order range must satisfy 1 <= m_lo <= m_hi");
  if (options.density == 0) throw DomainError("grid density must be positive");
  if (!(options.init.norm() > 0.0)) throw DomainError("initial data must be non-zero");
  for (std::size_t m = m_lo; m <= m_hi; ++m) q.alpha.require_order(m);

  WitnessReport report;
  report.energy = energy;
  for (std::size_t m = m_lo; m <= m_hi; ++m) {
    report.rows.push_back(witness_row(q, energy, m, options));
    if (!report.rows.back().complete) report.complete = false;
  }
  for (auto it = report.rows.rbegin(); it != report.rows.rend() && it->pass; ++it) report.m0 = it->m;
  return report;
}

}  // namespace gordonlab
