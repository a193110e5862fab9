#pragma once

// Special-function kernel: Kummer M = 1F1, Tricomi U, log-Gamma, Hermite and
// generalized Laguerre polynomials, plus first derivatives.
//
// Everything is evaluated in the widest native floating type (`wide`).  The
// confluent hypergeometric functions additionally come in a `Scaled` form
// (sign and log-magnitude) because the parameter regimes of the exponential
// seed push M(a,b,z) past the range of long double.

#include <cmath>
#include <concepts>
#include <limits>

namespace susyritus::specfun {

using wide = long double;

struct KummerParams {
  double a = 0.0;
  double b = 1.0;
  double z = 0.0;
};

/// A real number stored as sign * exp(log_abs).
struct Scaled {
  int sign = 0;
  wide log_abs = 0.0L;

  static Scaled from(wide v);
  static Scaled exp_of(wide log_value) { return {1, log_value}; }

  /// Plain value; overflows to +-inf (or underflows to 0) outside range.
  wide value() const;
  bool is_zero() const { return sign == 0; }

  Scaled operator-() const { return {-sign, log_abs}; }
  Scaled operator*(const Scaled& o) const { return {sign * o.sign, log_abs + o.log_abs}; }
  Scaled operator/(const Scaled& o) const;
  Scaled operator*(wide v) const { return *this * from(v); }
  friend Scaled operator+(const Scaled& x, const Scaled& y);
  friend Scaled operator-(const Scaled& x, const Scaled& y) { return x + (-y); }
};

/// num / den as a plain number (well defined whenever the ratio is in range).
wide ratio(const Scaled& num, const Scaled& den);

/// log|Gamma(x)|; +inf at the poles x = 0, -1, -2, ...
wide log_gamma(wide x);
double log_gamma(double x);
/// Sign of Gamma(x) (0 at the poles).
int gamma_sign(wide x);

Scaled kummer_m_scaled(wide a, wide b, wide z);
Scaled tricomi_u_scaled(wide a, wide b, wide z);

double kummer_m(const KummerParams& p);
/// dM/dz = (a/b) M(a+1, b+1, z).
double kummer_m_deriv(const KummerParams& p);
double tricomi_u(const KummerParams& p);
/// dU/dz = -a U(a+1, b+1, z).
double tricomi_u_deriv(const KummerParams& p);

/// Physicists' Hermite polynomial H_n(x).
template <std::floating_point T>
T hermite(int n, T x) {
  if (n <= 0) return T(1);
  T prev = T(1);
  T cur = T(2) * x;
  for (int k = 1; k < n; ++k) {
    const T next = T(2) * x * cur - T(2 * k) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

template <std::floating_point T>
T hermite_deriv(int n, T x) {
  return n == 0 ? T(0) : T(2 * n) * hermite(n - 1, x);
}

/// Generalized Laguerre polynomial L_n^alpha(x).
template <std::floating_point T>
T laguerre(int n, T alpha, T x) {
  if (n <= 0) return T(1);
  T prev = T(1);
  T cur = T(1) + alpha - x;
  for (int k = 1; k < n; ++k) {
    const T next = ((T(2 * k + 1) + alpha - x) * cur - (T(k) + alpha) * prev) / T(k + 1);
    prev = cur;
    cur = next;
  }
  return cur;
}

template <std::floating_point T>
T laguerre_deriv(int n, T alpha, T x) {
  return n == 0 ? T(0) : -laguerre(n - 1, alpha + T(1), x);
}

}  // namespace susyritus::specfun
