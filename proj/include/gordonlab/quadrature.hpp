#pragma once

// Adaptive quadrature used where no closed form is available.

#include <array>
#include <cmath>
#include <functional>

namespace gordonlab::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;
};

namespace detail {

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
inline constexpr std::array<double, 8> kXgk{0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk{0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg{0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
Result gk15(const F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    kronrod += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  return {kronrod * h, std::abs((kronrod - gauss) * h)};
}

template <class F>
Result gk_adapt(const F& f, double a, double b, double tol, int depth) {
  const Result whole = gk15(f, a, b);
  if (whole.error <= tol || depth <= 0 || !(b - a > 1e-14 * (std::abs(a) + std::abs(b)))) return whole;
  const double m = 0.5 * (a + b);
  const Result l = gk_adapt(f, a, m, 0.5 * tol, depth - 1);
  const Result r = gk_adapt(f, m, b, 0.5 * tol, depth - 1);
  return {l.value + r.value, l.error + r.error};
}

}  // namespace detail

/// Adaptive Gauss-Kronrod for integrands smooth inside [a, b].
template <class F>
Result gauss_kronrod(const F& f, double a, double b, double tol = 1e-12, int max_depth = 30) {
  if (a == b) return {};
  return detail::gk_adapt(f, a, b, tol, max_depth);
}

/// Double-exponential (tanh-sinh) rule; tolerates integrable endpoint singularities.
/// The integrand is never evaluated at a or b.
template <class F>
Result tanh_sinh(const F& f, double a, double b, double tol = 1e-12, int max_level = 10) {
  if (a == b) return {};
  const double c = 0.5 * (a + b);
  const double h2 = 0.5 * (b - a);
  constexpr double kHalfPi = 1.5707963267948966;
  constexpr double kTmax = 3.2;
  auto node_sum = [&](double t) {
    const double s = kHalfPi * std::sinh(t);
    const double ch = std::cosh(s);
    const double w = kHalfPi * std::cosh(t) / (ch * ch);
    // distance of the node from the nearer endpoint, in units of h2: 1 - tanh(s)
    const double d = 1.0 / (std::exp(2.0 * s) + 1.0) * 2.0;
    if (d == 0.0 || w == 0.0) return 0.0;
    const double left = a + h2 * d;   // node near a
    const double right = b - h2 * d;  // node near b
    double acc = 0.0;
    if (left > a && left < b) acc += w * f(left);
    if (right > a && right < b) acc += w * f(right);
    return acc;
  };
  double step = 1.0;
  double sum = kHalfPi * f(c);
  for (double t = step; t <= kTmax; t += step) sum += node_sum(t);
  double estimate = sum * step * h2;
  double error = std::abs(estimate);
  for (int level = 1; level <= max_level; ++level) {
    step *= 0.5;
    for (double t = step; t <= kTmax; t += 2.0 * step) sum += node_sum(t);
    const double next = sum * step * h2;
    error = std::abs(next - estimate);
    estimate = next;
    if (level >= 3 && error <= tol) break;
  }
  return {estimate, error};
}

}  // namespace gordonlab::quad
