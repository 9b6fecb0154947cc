#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "gordonlab/errors.hpp"
#include "gordonlab/propagator.hpp"
#include "oracles.hpp"

using namespace gordonlab;
using std::numbers::pi;

namespace {

LinePotential step_line(std::vector<BigRational> bps, std::vector<double> vals) {
  return LinePotential::periodic(PeriodicPotential::step(std::move(bps), std::move(vals)));
}

}  // namespace

TEST_SUITE("propagator") {
  TEST_CASE("free and constant closed forms") {
    const LinePotential zero;
    const SolutionState s = propagate(zero, 1.0, {0.0, 1.0, 0.0}, pi / 2);
    CHECK(std::abs(s.u) < 1e-8);
    CHECK(std::abs(s.du + 1.0) < 1e-8);

    const LinePotential one = LinePotential::constant(1.0);
    const SolutionState h = propagate(one, 0.0, {0.0, 1.0, 0.0}, 1.0);
    CHECK(h.u == doctest::Approx(std::cosh(1.0)).epsilon(1e-12));
    CHECK(h.du == doctest::Approx(std::sinh(1.0)).epsilon(1e-12));

    const SolutionState lin = propagate(zero, 0.0, {0.0, 0.0, 1.0}, -3.0);
    CHECK(lin.u == doctest::Approx(-3.0));
    CHECK(lin.du == doctest::Approx(1.0));
  }

  TEST_CASE("piecewise-constant composition") {
    const LinePotential w = step_line({0, make_rational(1, 2)}, {0.0, pi * pi});
    const SolutionState s = propagate(w, 0.0, {0.0, 1.0, 0.0}, 1.0);
    CHECK(std::abs(s.u - std::cosh(pi / 2)) < 1e-8);
    CHECK(std::abs(s.du - pi * std::sinh(pi / 2)) < 1e-8);
  }

  TEST_CASE("monodromy examples") {
    const LinePotential zero;
    const Monodromy id = monodromy(zero, 4.0, pi);
    CHECK(std::abs(id.matrix.a - 1) < 1e-12);
    CHECK(std::abs(id.matrix.b) < 1e-12);
    CHECK(std::abs(id.matrix.c) < 1e-12);
    CHECK(std::abs(id.matrix.d - 1) < 1e-12);
    const Monodromy neg = monodromy(zero, 1.0, pi);
    CHECK(std::abs(neg.matrix.a + 1) < 1e-12);
    CHECK(std::abs(neg.matrix.d + 1) < 1e-12);
    CHECK(std::abs(neg.matrix.b) < 1e-12);

    const LinePotential w = step_line({0, make_rational(1, 2)}, {0.0, pi * pi});
    const Monodromy m = monodromy(w, 0.0, BigRational(1));
    // [[cosh, sinh/pi], [pi sinh, cosh]] (at pi/2) times [[1, 1/2], [0, 1]]
    const double c = std::cosh(pi / 2), s = std::sinh(pi / 2);
    CHECK(m.matrix.a == doctest::Approx(c));
    CHECK(m.matrix.b == doctest::Approx(0.5 * c + s / pi));
    CHECK(m.matrix.c == doctest::Approx(pi * s));
    CHECK(m.matrix.d == doctest::Approx(0.5 * pi * s + c));
    CHECK(std::abs(m.det() - 1) < 1e-12);
    CHECK(m.cayley_hamilton_residual() < 1e-9);
  }

  TEST_CASE("smooth potential against RK4") {
    const LinePotential w = LinePotential::periodic(PeriodicPotential::cosine(1, 2.0, 0.3)) +
                            LinePotential::composed(PeriodicPotential::cosine(2, -0.7, 0.0), make_rational(3, 7), 0);
    auto W = [&](double x) { return 2.0 * std::cos(2 * pi * x + 0.3) - 0.7 * std::cos(4 * pi * 3.0 / 7.0 * x); };
    for (double E : {-1.5, 0.0, 2.5}) {
      const SolutionState s = propagate(w, E, {0.0, 0.6, -0.8}, 6.0, 1e-12);
      const auto ref = oracle::rk4(W, E, {0.6, -0.8}, 0.0, 6.0, 60000);
      CHECK(std::abs(s.u - ref[0]) < 1e-8 * std::max(1.0, std::abs(ref[0])));
      CHECK(std::abs(s.du - ref[1]) < 1e-8 * std::max(1.0, std::abs(ref[1])));
    }
  }

  TEST_CASE("integrable singularity against a regularized RK4") {
    // W = |x|^{-1/2} near 0; with x = t^2 the system becomes smooth:
    // du/dt = 2 t u', du'/dt = 2 (1 - E t) u.
    const LinePotential w = LinePotential::periodic(PeriodicPotential::power_singular(0.5, 1.0));
    const double E = 0.7;
    const SolutionState s = propagate(w, E, {0.0, 1.0, 0.5}, 0.4, 1e-12);
    double t = 0.0, u = 1.0, du = 0.5;
    const double T = std::sqrt(0.4);
    const int n = 20000;
    const double h = T / n;
    auto f = [&](double tt, double a, double b) {
      return std::array<double, 2>{2 * tt * b, 2 * (1 - E * tt) * a};
    };
    for (int i = 0; i < n; ++i) {
      const auto k1 = f(t, u, du);
      const auto k2 = f(t + h / 2, u + h / 2 * k1[0], du + h / 2 * k1[1]);
      const auto k3 = f(t + h / 2, u + h / 2 * k2[0], du + h / 2 * k2[1]);
      const auto k4 = f(t + h, u + h * k3[0], du + h * k3[1]);
      u += h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
      du += h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
      t += h;
    }
    CHECK(std::abs(s.u - u) < 1e-8);
    CHECK(std::abs(s.du - du) < 1e-8);
  }

  TEST_CASE("determinant and Cayley-Hamilton on random step potentials") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> val(-5, 5);
    for (int i = 0; i < 200; ++i) {
      const int n = 1 + static_cast<int>(rng() % 4);
      std::vector<BigRational> bps{0};
      for (int j = 1; j < n; ++j) bps.push_back(make_rational(j, n));
      std::vector<double> vs;
      for (int j = 0; j < n; ++j) vs.push_back(val(rng));
      const Monodromy m = monodromy(step_line(bps, vs), val(rng), BigRational(1));
      const double scale = std::max(1.0, m.matrix.op_norm());
      CHECK(std::abs(m.det() - 1) < 1e-10 * scale * scale);
      CHECK(m.cayley_hamilton_residual() < 1e-9 * scale * scale);
    }
  }

  TEST_CASE("three-point bound examples") {
    const LinePotential zero;
    const ThreePointBound full = three_point_bound(zero, 1.0, exact_from_double(2 * pi), {0.0, 1.0, 0.0});
    CHECK(full.norm_minus_p == doctest::Approx(1.0));
    CHECK(full.norm_p == doctest::Approx(1.0));
    CHECK(full.norm_2p == doctest::Approx(1.0));
    CHECK(full.trace == doctest::Approx(2.0));

    const ThreePointBound lin = three_point_bound(zero, 0.0, BigRational(1), {0.0, 0.0, 1.0});
    CHECK(lin.norm_minus_p == doctest::Approx(std::sqrt(2.0)));
    CHECK(lin.norm_p == doctest::Approx(std::sqrt(2.0)));
    CHECK(lin.norm_2p == doctest::Approx(std::sqrt(5.0)));
    CHECK(lin.max == doctest::Approx(std::sqrt(5.0)));

    CHECK_THROWS_AS(three_point_bound(zero, 0.0, BigRational(1), {0.0, 2.0, 0.0}), DomainError);
  }

  TEST_CASE("three-point bound on random samples") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> val(-5, 5), ang(0, 2 * pi);
    for (int i = 0; i < 200; ++i) {
      const LinePotential w = step_line({0, make_rational(1, 3)}, {val(rng), val(rng)});
      const double th = ang(rng);
      const ThreePointBound b = three_point_bound(w, val(rng), BigRational(1), {0.0, std::cos(th), std::sin(th)});
      CHECK(b.max >= 0.5 - 1e-9);
      CHECK(b.pair_max >= b.pair_claim - 1e-9 * std::max(1.0, b.pair_claim));
    }
  }

  TEST_CASE("paths, reversibility and errors") {
    const LinePotential w = step_line({0, make_rational(1, 4)}, {2.0, -1.0}) +
                            LinePotential::composed(PeriodicPotential::cosine(1, 1, 0), make_rational(2, 3), 0);
    const SolutionState init{0.0, 0.3, 0.9};
    const std::vector<BigRational> targets{-2, make_rational(1, 2), 3, 0, make_rational(-7, 3)};
    const auto path = propagate_path(w, 0.4, init, 0, targets);
    for (std::size_t i = 0; i < targets.size(); ++i) {
      const SolutionState direct = propagate(w, 0.4, init, 0, targets[i]);
      CHECK(path[i].u == doctest::Approx(direct.u).epsilon(1e-9));
      CHECK(path[i].du == doctest::Approx(direct.du).epsilon(1e-9));
    }
    const SolutionState there = propagate(w, 0.4, init, 0, BigRational(5));
    const SolutionState back = propagate(w, 0.4, there, 5, BigRational(0));
    CHECK(back.u == doctest::Approx(init.u).epsilon(1e-8));
    CHECK(back.du == doctest::Approx(init.du).epsilon(1e-8));

    const LinePotential huge = LinePotential::constant(1e6);
    CHECK_THROWS_AS(propagate(huge, 0.0, init, 0, BigRational(100)), IntegrationError);
  }
}
