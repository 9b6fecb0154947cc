#pragma once

// Exact rational arithmetic, continued fractions and Liouville-type frequencies.
//
// Big integers and rationals are GMP values. Every mpq_class produced by this
// module is canonical (positive denominator, coprime numerator/denominator).

#include <gmpxx.h>

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace gordonlab {

using BigInt = mpz_class;
using BigRational = mpq_class;

/// Default digit budget for big-integer growth, overridable through
/// the GORDONLAB_DIGIT_BUDGET environment variable.
inline constexpr std::size_t kDefaultDigitBudget = 1'000'000;
std::size_t digit_budget();

BigRational make_rational(const BigInt& num, const BigInt& den);
BigRational parse_rational(const std::string& text);
BigRational exact_from_double(double value);

BigInt floor_of(const BigRational& x);
/// x - floor(x), always in [0, 1).
BigRational frac_of(const BigRational& x);
double to_double(const BigRational& x);
/// Natural log of |x| for x != 0, accurate for values far outside double range.
double log_abs(const BigRational& x);
std::size_t decimal_digits(const BigInt& x);

std::string to_string(const BigInt& x);
std::string to_string(const BigRational& x);

class ContinuedFraction {
 public:
  ContinuedFraction() = default;
  /// Partial quotients a_1..a_M, all >= 1.
  explicit ContinuedFraction(std::vector<BigInt> partial_quotients);

  std::size_t size() const { return quotients_.size(); }
  const std::vector<BigInt>& partial_quotients() const { return quotients_; }

  /// 1-based partial quotient a_m.
  const BigInt& a(std::size_t m) const;
  /// Convergent numerators/denominators for 0 <= m <= size().
  const BigInt& p(std::size_t m) const;
  const BigInt& q(std::size_t m) const;
  BigRational convergent(std::size_t m) const;
  /// The full finite fraction, p_M / q_M.
  BigRational value() const { return convergent(size()); }

  /// Evaluates the nested fraction bottom-up without using the convergent recurrence.
  BigRational reconstruct() const;

  /// p_m q_{m-1} - p_{m-1} q_m == (-1)^{m-1} for all stored m >= 1.
  bool determinant_identity_holds() const;

  ContinuedFraction truncated(std::size_t m) const;
  ContinuedFraction extended(const BigInt& next) const;

  bool operator==(const ContinuedFraction& other) const { return quotients_ == other.quotients_; }

 private:
  std::vector<BigInt> quotients_;
  std::vector<BigInt> p_{0};
  std::vector<BigInt> q_{1};
};

/// Continued fraction of a rational in (0, 1); the last quotient is >= 2.
ContinuedFraction cf_expand(const BigRational& x);

/// (p_m, q_m) for m = 0..m_max.
std::vector<std::pair<BigInt, BigInt>> convergents(const ContinuedFraction& cf, std::size_t m_max);

/// Maps (m, q_m) to the next partial quotient a_{m+1}.
using GrowthRule = std::function<BigInt(std::size_t m, const BigInt& q_m)>;

/// a_{m+1} = max(2, m^{q_m}); throws ResourceError if the result would exceed the digit budget.
BigInt liouville_default_rule(std::size_t m, const BigInt& q_m, std::size_t budget);
GrowthRule constant_rule(BigInt value);

/// Builds a_1..a_{m_max}. An empty rule selects liouville_default_rule.
ContinuedFraction build_liouville(const BigInt& a1, std::size_t m_max, const GrowthRule& rule = {},
                                  std::size_t budget = digit_budget());

struct LiouvilleCertificate {
  std::size_t m;
  bool holds;             // 1/(q_m q_{m+1}) <= B m^{-q_m}
  BigRational enclosure;  // 1/(q_m q_{m+1}), a strict upper bound on |alpha - alpha_m|
};

std::vector<LiouvilleCertificate> liouville_certify(const ContinuedFraction& cf, const BigRational& bound,
                                                    std::size_t m_max);

/// A frequency alpha in (0, 1): either an exact rational or a continued fraction
/// whose proxy-order convergent stands in for the (irrational) limit.
class FrequencySpec {
 public:
  static FrequencySpec exact(const BigRational& alpha);
  static FrequencySpec from_cf(ContinuedFraction cf, std::size_t proxy_order);

  /// The liouville-default preset: a = [1, 2, 8, 3^25] from the default growth
  /// rule followed by a proxy tail quotient 10^100, proxy order 5.
  static FrequencySpec liouville_default();
  /// All partial quotients 1, proxy order 40.
  static FrequencySpec golden();

  bool is_exact() const { return exact_; }
  const ContinuedFraction& cf() const { return cf_; }
  std::size_t proxy_order() const { return proxy_order_; }
  /// The exact rational used for alpha in all downstream arithmetic.
  const BigRational& alpha() const { return alpha_; }

  /// Largest approximation order usable downstream.
  std::size_t max_order() const;
  void require_order(std::size_t m) const;

  BigRational approximant(std::size_t m) const { return cf_.convergent(m); }
  const BigInt& p(std::size_t m) const { return cf_.p(m); }
  const BigInt& q(std::size_t m) const { return cf_.q(m); }
  const BigInt& a(std::size_t m) const { return cf_.a(m); }

  /// Upper bound on |alpha - alpha_m|: 1/(q_m q_{m+1}) for CF frequencies,
  /// the exact distance for rational ones.
  BigRational alpha_error_upper(std::size_t m) const;

  bool operator==(const FrequencySpec& other) const {
    return exact_ == other.exact_ && cf_ == other.cf_ && proxy_order_ == other.proxy_order_;
  }

 private:
  bool exact_ = true;
  ContinuedFraction cf_;
  std::size_t proxy_order_ = 0;
  BigRational alpha_;
};

}  // namespace gordonlab
