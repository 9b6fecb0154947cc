#include "gordonlab/dsl.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

#include "gordonlab/errors.hpp"

namespace gordonlab {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  PeriodicPotential potential() {
    std::vector<std::pair<double, PeriodicPotential>> parts;
    parts.push_back(term());
    skip_space();
    while (peek() == '+') {
      advance();
      parts.push_back(term());
      skip_space();
    }
    if (!at_end()) fail("expected '+' or end of input");
    return PeriodicPotential::sum(parts);
  }

 private:
  struct Mark {
    std::size_t pos, line, column;
  };

  std::pair<double, PeriodicPotential> term() {
    skip_space();
    double coefficient = 1.0;
    if (starts_number()) {
      const Mark at = mark();
      coefficient = to_double(number());
      if (!std::isfinite(coefficient)) fail_at(at, "coefficient out of range");
      expect('*');
    }
    return {coefficient, atom()};
  }

  PeriodicPotential atom() {
    skip_space();
    const Mark at = mark();
    std::string word;
    while (!at_end() && std::isalpha(static_cast<unsigned char>(peek()))) word += advance();
    if (word == "zero") return PeriodicPotential::zero();
    if (word == "step") return step(at);
    if (word == "cos") {
      expect('(');
      skip_space();
      const Mark k_at = mark();
      const BigRational k = number();
      if (k.get_den() != 1 || k < 1 || k > 1'000'000) fail_at(k_at, "cos frequency must be an integer in [1, 10^6]");
      expect(',');
      const double a = to_double(number());
      expect(',');
      const double phi = to_double(number());
      expect(')');
      return PeriodicPotential::cosine(k.get_num().get_si(), a, phi);
    }
    if (word == "sing") {
      expect('(');
      skip_space();
      const Mark g_at = mark();
      const double gamma = to_double(number());
      if (!(gamma > 0.0 && gamma < 1.0)) fail_at(g_at, "singularity exponent gamma must lie in (0, 1)");
      expect(',');
      const double c = to_double(number());
      expect(')');
      return PeriodicPotential::power_singular(gamma, c);
    }
    fail_at(at, word.empty() ? "expected atom 'step{', 'cos(', 'sing(' or 'zero'"
                             : "unknown atom '" + word + "', expected step, cos, sing or zero");
  }

  PeriodicPotential step(const Mark& at) {
    expect('{');
    std::vector<BigRational> breakpoints;
    std::vector<double> values;
    while (true) {
      skip_space();
      const Mark bp_at = mark();
      BigRational r = number();
      if (r < 0 || r >= 1) fail_at(bp_at, "breakpoint must lie in [0, 1)");
      if (!breakpoints.empty() && r <= breakpoints.back()) fail_at(bp_at, "breakpoints not increasing");
      breakpoints.push_back(r);
      expect(':');
      values.push_back(to_double(number()));
      skip_space();
      if (peek() == ',') {
        advance();
        continue;
      }
      expect('}');
      break;
    }
    try {
      return PeriodicPotential::step(std::move(breakpoints), std::move(values));
    } catch (const std::exception& e) {
      fail_at(at, e.what());
    }
  }

  bool starts_number() const {
    const char c = peek();
    return std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '.' ||
           (c == '+' && pos_ + 1 < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])));
  }

  BigRational number() {
    skip_space();
    const Mark at = mark();
    std::string tok;
    if (peek() == '-' || peek() == '+') tok += advance();
    auto digits = [&] {
      std::size_t n = 0;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
        tok += advance();
        ++n;
      }
      return n;
    };
    std::size_t n = digits();
    if (peek() == '.') {
      tok += advance();
      n += digits();
    }
    if (n == 0) fail_at(at, "expected number");
    if (peek() == 'e' || peek() == 'E') {
      tok += advance();
      if (peek() == '-' || peek() == '+') tok += advance();
      if (digits() == 0) fail("expected exponent digits");
    }
    if (peek() == '/') {
      tok += advance();
      if (digits() == 0) fail("expected denominator digits");
    }
    try {
      return parse_rational(tok);
    } catch (const std::exception& e) {
      fail_at(at, std::string("bad number '") + tok + "': " + e.what());
    }
  }

  void expect(char c) {
    skip_space();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    advance();
  }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) advance();
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  char advance() {
    const char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }
  Mark mark() const { return {pos_, line_, column_}; }

  [[noreturn]] void fail(const std::string& msg) const {
    std::string found = at_end() ? "end of input" : std::string("'") + peek() + "'";
    throw ParseError(msg + ", found " + found, line_, column_);
  }
  [[noreturn]] void fail_at(const Mark& m, const std::string& msg) const { throw ParseError(msg, m.line, m.column); }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

std::string atom_dsl(const Atom& atom) {
  return std::visit(
      [](const auto& a) -> std::string {
        using A = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<A, StepFunction>) {
          std::string s = "step{";
          for (std::size_t i = 0; i < a.breakpoints.size(); ++i) {
            if (i) s += ", ";
            s += to_string(a.breakpoints[i]) + ":" + format_double(a.values[i]);
          }
          return s + "}";
        } else if constexpr (std::is_same_v<A, Cosine>) {
          return "cos(" + std::to_string(a.k) + ", " + format_double(a.amplitude) + ", " + format_double(a.phase) + ")";
        } else {
          return "sing(" + format_double(a.gamma) + ", " + format_double(a.scale) + ")";
        }
      },
      atom);
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

PeriodicPotential parse_potential(std::string_view text) { return Parser(text).potential(); }

std::string to_dsl(const PeriodicPotential& p) {
  if (p.is_zero()) return "zero";
  std::string out;
  for (const auto& t : p.terms()) {
    if (!out.empty()) out += " + ";
    if (t.coefficient != 1.0) out += format_double(t.coefficient) + "*";
    out += atom_dsl(t.atom);
  }
  return out;
}

}  // namespace gordonlab
