#include "gordonlab/exact_arith.hpp"

#include <mpfr.h>

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "gordonlab/errors.hpp"

namespace gordonlab {

std::size_t digit_budget() {
  if (const char* env = std::getenv("GORDONLAB_DIGIT_BUDGET")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultDigitBudget;
}

BigRational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  BigRational r(num, den);
  r.canonicalize();
  return r;
}

namespace {

BigInt parse_integer(const std::string& text, const std::string& whole) {
  if (text.empty()) throw DomainError("malformed rational '" + whole + "'");
  std::size_t i = (text[0] == '-' || text[0] == '+') ? 1 : 0;
  if (i == text.size()) throw DomainError("malformed rational '" + whole + "'");
  for (std::size_t k = i; k < text.size(); ++k) {
    if (!std::isdigit(static_cast<unsigned char>(text[k]))) {
      throw DomainError("malformed rational '" + whole + "'");
    }
  }
  return BigInt(text[0] == '+' ? text.substr(1) : text, 10);
}

BigRational parse_decimal(const std::string& text) {
  // [sign] digits [. digits] [(e|E) [sign] digits]
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) negative = text[i++] == '-';
  std::string digits;
  long exponent = 0;
  bool any = false;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
    digits += text[i++];
    any = true;
  }
  if (i < text.size() && text[i] == '.') {
    ++i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      digits += text[i++];
      --exponent;
      any = true;
    }
  }
  if (!any) throw DomainError("malformed number '" + text + "'");
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    const std::string exp_text = text.substr(i);
    exponent += std::stol(parse_integer(exp_text, text).get_str());
    i = text.size();
  }
  if (i != text.size()) throw DomainError("malformed number '" + text + "'");
  BigInt num(digits, 10);
  BigInt scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
  BigRational r = exponent >= 0 ? BigRational(num * scale) : make_rational(num, scale);
  return negative ? BigRational(-r) : r;
}

}  // namespace

BigRational parse_rational(const std::string& raw) {
  std::string text;
  for (char c : raw) {
    if (!std::isspace(static_cast<unsigned char>(c))) text += c;
  }
  const auto slash = text.find('/');
  if (slash == std::string::npos) return parse_decimal(text);
  return make_rational(parse_integer(text.substr(0, slash), raw), parse_integer(text.substr(slash + 1), raw));
}

BigRational exact_from_double(double value) {
  if (!std::isfinite(value)) throw DomainError("non-finite value has no exact rational form");
  BigRational r;
  mpq_set_d(r.get_mpq_t(), value);
  return r;
}

BigInt floor_of(const BigRational& x) {
  BigInt out;
  mpz_fdiv_q(out.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return out;
}

BigRational frac_of(const BigRational& x) { return x - BigRational(floor_of(x)); }

double to_double(const BigRational& x) {
  // mpq_get_d truncates; round through MPFR to get the nearest double.
  mpfr_t t;
  mpfr_init2(t, 53);
  mpfr_set_q(t, x.get_mpq_t(), MPFR_RNDN);
  const double d = mpfr_get_d(t, MPFR_RNDN);
  mpfr_clear(t);
  return d;
}

double log_abs(const BigRational& x) {
  if (x == 0) return -HUGE_VAL;
  mpfr_t t;
  mpfr_init2(t, 128);
  mpfr_set_q(t, x.get_mpq_t(), MPFR_RNDN);
  mpfr_abs(t, t, MPFR_RNDN);
  mpfr_log(t, t, MPFR_RNDN);
  const double d = mpfr_get_d(t, MPFR_RNDN);
  mpfr_clear(t);
  return d;
}

std::size_t decimal_digits(const BigInt& x) {
  if (x == 0) return 1;
  return x.get_str(10).size() - (x < 0 ? 1 : 0);
}

std::string to_string(const BigInt& x) { return x.get_str(10); }

std::string to_string(const BigRational& x) {
  if (x.get_den() == 1) return x.get_num().get_str(10);
  return x.get_str(10);
}

// ---------------------------------------------------------------------------

ContinuedFraction::ContinuedFraction(std::vector<BigInt> partial_quotients) {
  for (std::size_t i = 0; i < partial_quotients.size(); ++i) {
    if (partial_quotients[i] < 1) {
      throw DomainError("partial quotient a_" + std::to_string(i + 1) + " must be >= 1");
    }
  }
  quotients_ = std::move(partial_quotients);
  p_.reserve(quotients_.size() + 1);
  q_.reserve(quotients_.size() + 1);
  // p_{-1} = 1, q_{-1} = 0 make the recurrence uniform from m = 1.
  BigInt p_prev = 1, q_prev = 0;
  for (const BigInt& a : quotients_) {
    BigInt p_next = a * p_.back() + p_prev;
    BigInt q_next = a * q_.back() + q_prev;
    p_prev = p_.back();
    q_prev = q_.back();
    p_.push_back(std::move(p_next));
    q_.push_back(std::move(q_next));
  }
}

const BigInt& ContinuedFraction::a(std::size_t m) const {
  if (m < 1 || m > quotients_.size()) {
    throw RangeError("partial quotient a_" + std::to_string(m) + " not available (length " +
                     std::to_string(quotients_.size()) + ")");
  }
  return quotients_[m - 1];
}

const BigInt& ContinuedFraction::p(std::size_t m) const {
  if (m >= p_.size()) throw RangeError("convergent p_" + std::to_string(m) + " not available");
  return p_[m];
}

const BigInt& ContinuedFraction::q(std::size_t m) const {
  if (m >= q_.size()) throw RangeError("convergent q_" + std::to_string(m) + " not available");
  return q_[m];
}

BigRational ContinuedFraction::convergent(std::size_t m) const { return make_rational(p(m), q(m)); }

BigRational ContinuedFraction::reconstruct() const {
  if (quotients_.empty()) return 0;
  BigRational tail = 0;
  for (auto it = quotients_.rbegin(); it != quotients_.rend(); ++it) {
    tail = BigRational(1) / (BigRational(*it) + tail);
  }
  tail.canonicalize();
  return tail;
}

bool ContinuedFraction::determinant_identity_holds() const {
  for (std::size_t m = 1; m < p_.size(); ++m) {
    const BigInt det = p_[m] * q_[m - 1] - p_[m - 1] * q_[m];
    const int expected = (m % 2 == 1) ? 1 : -1;
    if (det != expected) return false;
  }
  return true;
}

ContinuedFraction ContinuedFraction::truncated(std::size_t m) const {
  if (m > quotients_.size()) throw RangeError("cannot truncate to " + std::to_string(m) + " quotients");
  return ContinuedFraction(std::vector<BigInt>(quotients_.begin(), quotients_.begin() + static_cast<long>(m)));
}

ContinuedFraction ContinuedFraction::extended(const BigInt& next) const {
  auto qs = quotients_;
  qs.push_back(next);
  return ContinuedFraction(std::move(qs));
}

ContinuedFraction cf_expand(const BigRational& x) {
  if (x <= 0 || x >= 1) throw DomainError("cf_expand requires 0 < x < 1, got " + to_string(x));
  std::vector<BigInt> quotients;
  BigInt n = x.get_num();
  BigInt d = x.get_den();
  while (n != 0) {
    BigInt a, r;
    mpz_fdiv_qr(a.get_mpz_t(), r.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    quotients.push_back(std::move(a));
    d = std::move(n);
    n = std::move(r);
  }
  return ContinuedFraction(std::move(quotients));
}

std::vector<std::pair<BigInt, BigInt>> convergents(const ContinuedFraction& cf, std::size_t m_max) {
  if (m_max > cf.size()) {
    throw RangeError("convergents up to m = " + std::to_string(m_max) + " requested but only " +
                     std::to_string(cf.size()) + " partial quotients are available");
  }
  std::vector<std::pair<BigInt, BigInt>> out;
  out.reserve(m_max + 1);
  for (std::size_t m = 0; m <= m_max; ++m) out.emplace_back(cf.p(m), cf.q(m));
  return out;
}

BigInt liouville_default_rule(std::size_t m, const BigInt& q_m, std::size_t budget) {
  if (m <= 1) return 2;  // 1^{q_1} = 1
  const double digits = q_m.get_d() * std::log10(static_cast<double>(m)) + 1.0;
  if (!q_m.fits_ulong_p() || digits > static_cast<double>(budget)) {
    std::ostringstream os;
    os << "default growth rule at m=" << m << ": a_" << m + 1 << " = " << m << "^" << to_string(q_m)
       << " needs ~" << digits << " decimal digits, budget is " << budget;
    throw ResourceError(os.str());
  }
  BigInt out;
  mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(m), q_m.get_ui());
  return out < 2 ? BigInt(2) : out;
}

GrowthRule constant_rule(BigInt value) {
  return [value = std::move(value)](std::size_t, const BigInt&) { return value; };
}

ContinuedFraction build_liouville(const BigInt& a1, std::size_t m_max, const GrowthRule& rule,
                                  std::size_t budget) {
  if (m_max < 1) throw DomainError("build_liouville needs m_max >= 1");
  if (a1 < 1) throw DomainError("build_liouville needs a_1 >= 1");
  ContinuedFraction cf({a1});
  for (std::size_t m = 1; m < m_max; ++m) {
    BigInt next = rule ? rule(m, cf.q(m)) : liouville_default_rule(m, cf.q(m), budget);
    if (decimal_digits(next) > budget) {
      throw ResourceError("growth rule at m=" + std::to_string(m) + " produced a_" + std::to_string(m + 1) +
                          " with more than " + std::to_string(budget) + " digits");
    }
    cf = cf.extended(next);
  }
  return cf;
}

std::vector<LiouvilleCertificate> liouville_certify(const ContinuedFraction& cf, const BigRational& bound,
                                                    std::size_t m_max) {
  if (cf.size() < m_max + 1) {
    throw RangeError("liouville_certify up to m = " + std::to_string(m_max) + " needs " +
                     std::to_string(m_max + 1) + " convergents, have " + std::to_string(cf.size()));
  }
  if (bound <= 0) throw DomainError("Liouville constant B must be positive");
  std::vector<LiouvilleCertificate> out;
  for (std::size_t m = 1; m <= m_max; ++m) {
    const BigInt denom = cf.q(m) * cf.q(m + 1);
    LiouvilleCertificate cert{m, false, make_rational(1, denom)};
    // 1/(q_m q_{m+1}) <= B m^{-q_m}  <=>  m^{q_m} <= B q_m q_{m+1}
    const BigRational rhs = bound * BigRational(denom);
    const double lhs_log = cf.q(m).get_d() * std::log(static_cast<double>(m));
    const double rhs_log = log_abs(rhs);
    if (lhs_log > rhs_log + 1.0) {
      cert.holds = false;
    } else if (lhs_log < rhs_log - 1.0) {
      cert.holds = true;
    } else {
      BigInt power;
      mpz_ui_pow_ui(power.get_mpz_t(), static_cast<unsigned long>(m), cf.q(m).get_ui());
      cert.holds = BigRational(power) <= rhs;
    }
    out.push_back(std::move(cert));
  }
  return out;
}

// ---------------------------------------------------------------------------

FrequencySpec FrequencySpec::exact(const BigRational& alpha) {
  FrequencySpec f;
  f.exact_ = true;
  f.cf_ = cf_expand(alpha);
  f.proxy_order_ = f.cf_.size();
  f.alpha_ = alpha;
  return f;
}

FrequencySpec FrequencySpec::from_cf(ContinuedFraction cf, std::size_t proxy_order) {
  if (proxy_order < 1 || proxy_order > cf.size()) {
    throw RangeError("proxy order " + std::to_string(proxy_order) + " outside 1.." + std::to_string(cf.size()));
  }
  FrequencySpec f;
  f.exact_ = false;
  f.cf_ = cf.truncated(proxy_order);
  f.proxy_order_ = proxy_order;
  f.alpha_ = f.cf_.value();
  return f;
}

FrequencySpec FrequencySpec::liouville_default() {
  BigInt tail;
  mpz_ui_pow_ui(tail.get_mpz_t(), 10, 100);
  return from_cf(build_liouville(1, 4).extended(tail), 5);
}

FrequencySpec FrequencySpec::golden() { return from_cf(ContinuedFraction(std::vector<BigInt>(40, 1)), 40); }

std::size_t FrequencySpec::max_order() const {
  if (exact_) return proxy_order_;
  return proxy_order_ >= 2 ? proxy_order_ - 2 : 0;
}

void FrequencySpec::require_order(std::size_t m) const {
  if (m < 1 || m > max_order()) {
    throw RangeError("approximation order m = " + std::to_string(m) + " outside 1.." +
                     std::to_string(max_order()) + (exact_ ? "" : " (proxy order minus 2)"));
  }
}

BigRational FrequencySpec::alpha_error_upper(std::size_t m) const {
  require_order(m);
  if (exact_) return abs(alpha_ - approximant(m));
  return make_rational(1, cf_.q(m) * cf_.q(m + 1));
}

}  // namespace gordonlab
