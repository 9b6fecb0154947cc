#include <cstdlib>
#include <random>

#include "doctest.h"
#include "gordonlab/errors.hpp"
#include "gordonlab/exact_arith.hpp"
#include "oracles.hpp"

using namespace gordonlab;

namespace {

std::vector<BigInt> ints(std::initializer_list<long> xs) {
  std::vector<BigInt> out;
  for (long x : xs) out.emplace_back(x);
  return out;
}

BigInt pow3(unsigned long e) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), 3, e);
  return r;
}

}  // namespace

TEST_SUITE("exact_arith") {
  TEST_CASE("cf_expand small cases") {
    CHECK(cf_expand(make_rational(5, 7)).partial_quotients() == ints({1, 2, 2}));
    CHECK(cf_expand(make_rational(1, 2)).partial_quotients() == ints({2}));
    const BigRational x = make_rational(355, 452);
    const ContinuedFraction cf = cf_expand(x);
    CHECK(cf.reconstruct() == x);
    CHECK(cf.value() == x);
    // Euclid oracle on machine integers
    const auto ref = oracle::euclid_cf(355, 452);
    REQUIRE(ref.size() == cf.size());
    for (std::size_t i = 0; i < ref.size(); ++i) CHECK(cf.a(i + 1) == ref[i]);
  }

  TEST_CASE("cf_expand rejects values outside (0, 1)") {
    CHECK_THROWS_AS(cf_expand(BigRational(0)), DomainError);
    CHECK_THROWS_AS(cf_expand(BigRational(1)), DomainError);
    CHECK_THROWS_AS(cf_expand(make_rational(3, 2)), DomainError);
    CHECK_THROWS_AS(cf_expand(make_rational(-1, 2)), DomainError);
  }

  TEST_CASE("canonical expansion ends in a quotient >= 2") {
    for (long q = 2; q < 60; ++q) {
      for (long p = 1; p < q; ++p) {
        const ContinuedFraction cf = cf_expand(make_rational(p, q));
        if (cf.size() > 1) CHECK(cf.a(cf.size()) >= 2);
      }
    }
  }

  TEST_CASE("convergents") {
    const ContinuedFraction ones(ints({1, 1, 1, 1, 1, 1}));
    const long fib[] = {1, 1, 2, 3, 5, 8, 13};
    for (std::size_t m = 0; m <= 6; ++m) CHECK(ones.q(m) == fib[m]);
    const auto pq = convergents(ones, 6);
    CHECK(pq.size() == 7);
    CHECK(pq.back().second == 13);

    const ContinuedFraction two(ints({2}));
    CHECK(two.convergent(1) == make_rational(1, 2));
    const ContinuedFraction c122(ints({1, 2, 2}));
    CHECK(c122.convergent(3) == make_rational(5, 7));
    CHECK_THROWS_AS(convergents(c122, 4), RangeError);
    CHECK_THROWS_AS(ContinuedFraction(ints({1, 0, 2})), DomainError);
  }

  TEST_CASE("determinant identity on random expansions") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> den(2, 1'000'000'000);
    for (int i = 0; i < 300; ++i) {
      const long q = den(rng);
      const long p = std::uniform_int_distribution<long>(1, q - 1)(rng);
      const BigRational x = make_rational(p, q);
      const ContinuedFraction cf = cf_expand(x);
      CHECK(cf.reconstruct() == x);
      CHECK(cf.determinant_identity_holds());
      for (std::size_t m = 1; m <= cf.size(); ++m) {
        const BigInt lhs = cf.p(m) * cf.q(m - 1) - cf.p(m - 1) * cf.q(m);
        CHECK(lhs == ((m - 1) % 2 == 0 ? 1 : -1));
      }
    }
  }

  TEST_CASE("Liouville construction with the default rule") {
    const ContinuedFraction cf = build_liouville(1, 4);
    REQUIRE(cf.size() == 4);
    CHECK(cf.partial_quotients() == std::vector<BigInt>{1, 2, 8, BigInt("847288609443")});
    CHECK(cf.a(4) == pow3(25));
    CHECK(cf.q(1) == 1);
    CHECK(cf.q(2) == 3);
    CHECK(cf.q(3) == 25);
    CHECK(cf.q(4) == BigInt("21182215236078"));
  }

  TEST_CASE("constant rule gives Fibonacci denominators and fails certification") {
    const ContinuedFraction cf = build_liouville(1, 12, constant_rule(1));
    const long fib[] = {1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144};
    for (std::size_t m = 1; m <= 11; ++m) CHECK(cf.q(m) == fib[m]);
    const auto certs = liouville_certify(cf, 1, 10);
    for (const auto& c : certs) {
      if (c.m >= 7) CHECK_FALSE(c.holds);
    }
  }

  TEST_CASE("certification of default constructions") {
    const auto certs = liouville_certify(build_liouville(1, 4), 1, 3);
    REQUIRE(certs.size() == 3);
    for (const auto& c : certs) CHECK(c.holds);
    // m = 3: 1/(25 * 21182215236078) < 3^-25
    CHECK(certs[2].enclosure == make_rational(1, BigInt(25) * BigInt("21182215236078")));
    CHECK(certs[2].enclosure < make_rational(1, pow3(25)));

    const auto certs2 = liouville_certify(build_liouville(2, 4), 1, 3);
    for (const auto& c : certs2) CHECK(c.holds);

    // m = 1 always holds since 1^{-q_1} = 1
    const ContinuedFraction golden(std::vector<BigInt>(12, 1));
    CHECK(liouville_certify(golden, 1, 1)[0].holds);
    CHECK_THROWS_AS(liouville_certify(golden, 1, 12), RangeError);
  }

  TEST_CASE("digit budget") {
    CHECK_THROWS_WITH_AS(build_liouville(1, 4, {}, 5), doctest::Contains("m=3"), ResourceError);
    setenv("GORDONLAB_DIGIT_BUDGET", "123", 1);
    CHECK(digit_budget() == 123);
    unsetenv("GORDONLAB_DIGIT_BUDGET");
    CHECK(digit_budget() == kDefaultDigitBudget);
  }

  TEST_CASE("rational parsing and conversion") {
    CHECK(parse_rational("6/8") == make_rational(3, 4));
    CHECK(parse_rational("-0.25") == make_rational(-1, 4));
    CHECK(parse_rational("1.5e-2") == make_rational(3, 200));
    CHECK(parse_rational(" 7 ") == 7);
    CHECK_THROWS_AS(parse_rational("1/0"), DomainError);
    CHECK_THROWS_AS(parse_rational("abc"), DomainError);
    CHECK(exact_from_double(0.1) != make_rational(1, 10));
    CHECK(to_double(exact_from_double(0.1)) == 0.1);
    CHECK(to_double(make_rational(1, 3)) == 1.0 / 3.0);
    CHECK(floor_of(make_rational(-1, 2)) == -1);
    CHECK(frac_of(make_rational(-1, 4)) == make_rational(3, 4));
    CHECK(log_abs(make_rational(1, 1000)) == doctest::Approx(std::log(1e-3)).epsilon(1e-15));
  }

  TEST_CASE("frequency presets") {
    const FrequencySpec lv = FrequencySpec::liouville_default();
    CHECK(lv.max_order() == 3);
    CHECK_THROWS_AS(lv.require_order(4), RangeError);
    CHECK(lv.q(3) == 25);
    CHECK(lv.approximant(3) == make_rational(17, 25));
    const BigRational err = lv.alpha_error_upper(3);
    CHECK(abs(lv.alpha() - lv.approximant(3)) < err);

    const FrequencySpec g = FrequencySpec::golden();
    CHECK(g.max_order() == 38);
    CHECK(g.q(10) == 89);

    const FrequencySpec half = FrequencySpec::exact(make_rational(1, 2));
    CHECK(half.max_order() == 1);
    CHECK(half.alpha_error_upper(1) == 0);
  }
}
