#include "susyritus/specfun.hpp"

#include <algorithm>
#include <string>

#include "susyritus/errors.hpp"

namespace susyritus::specfun {

namespace {

constexpr wide kEps = std::numeric_limits<wide>::epsilon();
constexpr wide kPi = 3.141592653589793238462643383279502884L;
constexpr wide kInf = std::numeric_limits<wide>::infinity();

// Partial sums are renormalised whenever they exceed this bound.
constexpr wide kRescale = 1e1000L;
constexpr wide kLogRescale = 2302.585092994045684017991454684364208L;

// A method is accepted outright below kAccept; kGiveUp is the worst estimate
// tolerated after every route has been tried.
constexpr wide kAccept = 1e-15L;
constexpr wide kGiveUp = 1e-11L;
constexpr int kMaxTerms = 400000;

// Largest Taylor step of the continuation, relative to the distance from the
// singular point z = 0 and in absolute terms.
constexpr wide kStepRatio = 0.5L;
constexpr wide kMaxStep = 1.0L;

bool is_nonpositive_integer(wide x) { return x <= 0 && x == std::floor(x); }

// sin(pi x) with argument reduction, so large |x| keep their accuracy.
wide sin_pi(wide x) {
  const wide r = x - 2.0L * std::round(x / 2.0L);  // r in [-1, 1]
  return std::sin(kPi * r);
}

wide cos_pi(wide x) {
  const wide r = x - 2.0L * std::round(x / 2.0L);
  if (std::fabs(r) == 0.5L) return 0.0L;
  return std::cos(kPi * r);
}

struct Sum {
  Scaled value;
  wide rel_error = kInf;
};

Sum better(const Sum& x, const Sum& y) { return x.rel_error <= y.rel_error ? x : y; }

Scaled with_shift(wide v, wide log_shift) {
  Scaled s = Scaled::from(v);
  if (!s.is_zero()) s.log_abs += log_shift;
  return s;
}

// sum_k (a)_k / (b)_k z^k / k!
Sum kummer_series(wide a, wide b, wide z) {
  wide term = 1.0L;
  wide sum = 1.0L;
  wide abs_sum = 1.0L;
  wide log_shift = 0.0L;
  bool converged = false;
  int k = 0;
  for (; k < kMaxTerms; ++k) {
    const wide r = (a + k) / (b + k) * z / (k + 1);
    term *= r;
    if (term == 0.0L) {
      converged = true;
      break;
    }
    sum += term;
    abs_sum += std::fabs(term);
    if (abs_sum > kRescale) {
      term /= kRescale;
      sum /= kRescale;
      abs_sum /= kRescale;
      log_shift += kLogRescale;
    }
    if (std::fabs(term) <= kEps * std::fabs(sum) && std::fabs(r) < 0.5L) {
      converged = true;
      break;
    }
  }
  Sum out;
  out.value = with_shift(sum, log_shift);
  if (converged && sum != 0.0L) {
    out.rel_error = (4.0L + std::sqrt(static_cast<wide>(k))) * kEps * abs_sum / std::fabs(sum);
  }
  return out;
}

// sum_k (p)_k (q)_k / k! x^k, truncated at its smallest term when divergent.
Sum hyp2f0(wide p, wide q, wide x) {
  wide term = 1.0L;
  wide sum = 1.0L;
  wide abs_sum = 1.0L;
  wide log_shift = 0.0L;
  wide truncation = kInf;
  const wide k_turn = std::max({0.0L, -p, -q});
  for (int k = 0; k < kMaxTerms; ++k) {
    const wide r = (p + k) * (q + k) * x / (k + 1);
    if (r == 0.0L) {
      truncation = 0.0L;
      break;
    }
    if (k > k_turn && std::fabs(r) >= 1.0L) {
      truncation = std::fabs(term);
      break;
    }
    term *= r;
    sum += term;
    abs_sum += std::fabs(term);
    if (abs_sum > kRescale) {
      term /= kRescale;
      sum /= kRescale;
      abs_sum /= kRescale;
      log_shift += kLogRescale;
    }
    if (k > k_turn && std::fabs(term) <= kEps * std::fabs(sum)) {
      truncation = 0.0L;
      break;
    }
  }
  Sum out;
  out.value = with_shift(sum, log_shift);
  if (sum != 0.0L && std::isfinite(truncation)) {
    out.rel_error = (truncation + 4.0L * kEps * abs_sum) / std::fabs(sum);
  }
  return out;
}

// Relative error carried by a prefactor exp(sum of logs) of magnitude `log_mag`.
wide log_prefactor_error(wide log_mag) { return 4.0L * kEps * (1.0L + std::fabs(log_mag)); }

Sum combine(const Scaled& t1, wide e1, const Scaled& t2, wide e2) {
  Sum out;
  out.value = t1 + t2;
  if (out.value.is_zero()) return out;
  const wide r1 = t1.is_zero() ? 0.0L : std::fabs(ratio(t1, out.value));
  const wide r2 = t2.is_zero() ? 0.0L : std::fabs(ratio(t2, out.value));
  out.rel_error = r1 * e1 + r2 * e2 + 2.0L * kEps * (r1 + r2);
  return out;
}

// Large-z expansion of M for z > 0, including the recessive z^{-a} part.
Sum kummer_asymptotic(wide a, wide b, wide z) {
  const wide log_z = std::log(z);
  Scaled t1, t2;
  wide e1 = 0.0L, e2 = 0.0L;
  if (!is_nonpositive_integer(a)) {
    const Sum s = hyp2f0(b - a, 1.0L - a, 1.0L / z);
    const wide lg = log_gamma(b) - log_gamma(a) + z + (a - b) * log_z;
    t1 = Scaled{gamma_sign(b) * gamma_sign(a), lg} * s.value;
    e1 = s.rel_error + log_prefactor_error(std::fabs(log_gamma(b)) + std::fabs(log_gamma(a)) +
                                           std::fabs((a - b) * log_z));
  }
  if (!is_nonpositive_integer(b - a)) {
    const wide c = cos_pi(a);
    if (c != 0.0L) {
      const Sum s = hyp2f0(a, a - b + 1.0L, -1.0L / z);
      const wide lg = log_gamma(b) - log_gamma(b - a) - a * log_z;
      t2 = Scaled{gamma_sign(b) * gamma_sign(b - a), lg} * s.value * c;
      e2 = s.rel_error + log_prefactor_error(std::fabs(log_gamma(b)) + std::fabs(log_gamma(b - a)) +
                                             std::fabs(a * log_z));
    }
  }
  return combine(t1, e1, t2, e2);
}

Sum tricomi_asymptotic(wide a, wide b, wide z) {
  const Sum s = hyp2f0(a, a - b + 1.0L, -1.0L / z);
  Sum out;
  out.value = Scaled{1, -a * std::log(z)} * s.value;
  out.rel_error = s.rel_error + log_prefactor_error(a * std::log(z));
  return out;
}

// U from the two-M connection formula; requires non-integer b.
Sum tricomi_connection(wide a, wide b, wide z) {
  Scaled t1, t2;
  wide e1 = 0.0L, e2 = 0.0L;
  if (!is_nonpositive_integer(a - b + 1.0L)) {
    const Sum m = kummer_series(a, b, z);
    const wide lg = log_gamma(1.0L - b) - log_gamma(a - b + 1.0L);
    t1 = Scaled{gamma_sign(1.0L - b) * gamma_sign(a - b + 1.0L), lg} * m.value;
    e1 = m.rel_error +
         log_prefactor_error(std::fabs(log_gamma(1.0L - b)) + std::fabs(log_gamma(a - b + 1.0L)));
  }
  if (!is_nonpositive_integer(a)) {
    const Sum m = kummer_series(a - b + 1.0L, 2.0L - b, z);
    const wide lg = log_gamma(b - 1.0L) - log_gamma(a) + (1.0L - b) * std::log(z);
    t2 = Scaled{gamma_sign(b - 1.0L) * gamma_sign(a), lg} * m.value;
    e2 = m.rel_error + log_prefactor_error(std::fabs(log_gamma(b - 1.0L)) + std::fabs(log_gamma(a)) +
                                           std::fabs((1.0L - b) * std::log(z)));
  }
  return combine(t1, e1, t2, e2);
}

// A solution of z y'' + (b - z) y' - a y = 0 as (y, y') * exp(log_scale).
struct OdePoint {
  wide z = 0.0L;
  wide y = 0.0L;
  wide dy = 0.0L;
  wide log_scale = 0.0L;
  wide rel_error = 0.0L;
};

OdePoint ode_point(wide z, const Scaled& y, const Scaled& dy, wide rel_error) {
  OdePoint p;
  p.z = z;
  p.log_scale = y.log_abs;
  p.y = static_cast<wide>(y.sign);
  p.dy = ratio(dy, y) * p.y;
  p.rel_error = rel_error;
  return p;
}

// Taylor-series continuation of a Kummer-equation solution to z_target.
OdePoint kummer_ode_continue(wide a, wide b, OdePoint p, wide z_target) {
  int steps = 0;
  while (p.z != z_target) {
    if (++steps > kMaxTerms) throw ConvergenceError("Kummer continuation: too many steps");
    const wide z0 = p.z;
    wide h = z_target - z0;
    const wide h_max = std::min(kStepRatio * z0, std::max(kMaxStep, z0 / (4.0L * (std::fabs(a) + 1.0L))));
    if (std::fabs(h) > h_max) h = std::copysign(h_max, h);

    wide c0 = p.y;
    wide c1 = p.dy;
    wide sum_y = c0 + c1 * h;
    wide sum_dy = c1;
    wide abs_y = std::fabs(c0) + std::fabs(c1 * h);
    wide abs_dy = std::fabs(c1);
    wide h_pow = h;  // h^(k+1)
    int small_run = 0;
    for (int k = 0; k < 4000; ++k) {
      const wide c2 = ((k + a) * c0 - (k + 1) * (k + b - z0) * c1) / (z0 * (k + 1) * (k + 2));
      const wide term_dy = (k + 2) * c2 * h_pow;
      h_pow *= h;
      const wide term_y = c2 * h_pow;
      sum_y += term_y;
      sum_dy += term_dy;
      abs_y += std::fabs(term_y);
      abs_dy += std::fabs(term_dy);
      c0 = c1;
      c1 = c2;
      const bool small = std::fabs(term_y) <= kEps * std::fabs(sum_y) &&
                         std::fabs(term_dy) <= kEps * std::fabs(sum_dy);
      small_run = small ? small_run + 1 : 0;
      if (small_run >= 2) break;
    }
    if (sum_y != 0.0L) p.rel_error += 4.0L * kEps * abs_y / std::fabs(sum_y);
    if (sum_dy != 0.0L) p.rel_error += 4.0L * kEps * abs_dy / std::fabs(sum_dy);

    const wide scale = std::max(std::fabs(sum_y), std::fabs(sum_dy));
    if (scale == 0.0L || !std::isfinite(scale)) {
      throw ConvergenceError("Kummer continuation lost the solution (a=" + std::to_string(static_cast<double>(a)) +
                             ", b=" + std::to_string(static_cast<double>(b)) +
                             ", z=" + std::to_string(static_cast<double>(z0)) + ")");
    }
    p.y = sum_y / scale;
    p.dy = sum_dy / scale;
    p.log_scale += std::log(scale);
    p.z = (h == z_target - z0) ? z_target : z0 + h;
  }
  return p;
}

Sum from_ode(const OdePoint& p) {
  Sum out;
  out.value = Scaled::from(p.y);
  if (!out.value.is_zero()) out.value.log_abs += p.log_scale;
  out.rel_error = p.rel_error;
  return out;
}

[[noreturn]] void fail(const char* what, wide a, wide b, wide z, wide err) {
  throw ConvergenceError(std::string(what) + ": no route met its error estimate (a=" +
                         std::to_string(static_cast<double>(a)) + ", b=" +
                         std::to_string(static_cast<double>(b)) + ", z=" +
                         std::to_string(static_cast<double>(z)) +
                         ", best estimate=" + std::to_string(static_cast<double>(err)) + ")");
}

void require_finite(wide a, wide b, wide z, const char* what) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(z)) {
    throw DomainError(std::string(what) + ": non-finite argument");
  }
}

}  // namespace

Scaled Scaled::from(wide v) {
  if (v == 0.0L) return {};
  return {v > 0 ? 1 : -1, std::log(std::fabs(v))};
}

wide Scaled::value() const { return sign == 0 ? 0.0L : sign * std::exp(log_abs); }

Scaled Scaled::operator/(const Scaled& o) const {
  if (o.sign == 0) throw DomainError("Scaled: division by zero");
  return {sign * o.sign, log_abs - o.log_abs};
}

Scaled operator+(const Scaled& x, const Scaled& y) {
  if (x.sign == 0) return y;
  if (y.sign == 0) return x;
  const wide hi = std::max(x.log_abs, y.log_abs);
  const wide s = x.sign * std::exp(x.log_abs - hi) + y.sign * std::exp(y.log_abs - hi);
  if (s == 0.0L) return {};
  return {s > 0 ? 1 : -1, hi + std::log(std::fabs(s))};
}

wide ratio(const Scaled& num, const Scaled& den) {
  if (den.sign == 0) throw DomainError("ratio: zero denominator");
  if (num.sign == 0) return 0.0L;
  return num.sign * den.sign * std::exp(num.log_abs - den.log_abs);
}

wide log_gamma(wide x) {
  if (std::isnan(x)) return x;
  if (is_nonpositive_integer(x)) return kInf;
  if (x < 0.5L) {
    return std::log(kPi / std::fabs(sin_pi(x))) - log_gamma(1.0L - x);
  }
  wide shift = 1.0L;
  while (x < 16.0L) {
    shift *= x;
    x += 1.0L;
  }
  // Stirling series, coefficients B_2k / (2k (2k-1)).
  static constexpr wide c[] = {1.0L / 12.0L,           -1.0L / 360.0L,
                               1.0L / 1260.0L,         -1.0L / 1680.0L,
                               1.0L / 1188.0L,         -691.0L / 360360.0L,
                               1.0L / 156.0L,          -3617.0L / 122400.0L,
                               43867.0L / 244188.0L,   -174611.0L / 125400.0L};
  const wide inv = 1.0L / x;
  const wide inv2 = inv * inv;
  wide series = 0.0L;
  for (int k = 9; k >= 0; --k) series = c[k] + inv2 * series;
  series *= inv;
  constexpr wide half_log_two_pi = 0.918938533204672741780329736405617639861L;
  return (x - 0.5L) * std::log(x) - x + half_log_two_pi + series - std::log(shift);
}

double log_gamma(double x) { return static_cast<double>(log_gamma(static_cast<wide>(x))); }

int gamma_sign(wide x) {
  if (x > 0) return 1;
  if (is_nonpositive_integer(x)) return 0;
  return std::fmod(std::floor(x), 2.0L) != 0.0L ? -1 : 1;
}

Scaled kummer_m_scaled(wide a, wide b, wide z) {
  require_finite(a, b, z, "kummer_m");
  if (is_nonpositive_integer(b)) {
    throw DomainError("kummer_m: b must not be a non-positive integer (b=" +
                      std::to_string(static_cast<double>(b)) + ")");
  }
  if (z == 0.0L || a == 0.0L) return Scaled::from(1.0L);
  if (a == b) return Scaled::exp_of(z);

  Sum best = kummer_series(a, b, z);
  if (best.rel_error < kAccept) return best.value;

  if (z < 0.0L) {
    // Kummer transformation M(a,b,z) = e^z M(b-a,b,-z).
    return Scaled::exp_of(z) * kummer_m_scaled(b - a, b, -z);
  }
  if (z > 30.0L) {
    best = better(best, kummer_asymptotic(a, b, z));
    if (best.rel_error < kAccept) return best.value;
  }

  // Forward continuation from a point where the series is benign.
  const wide z_start = std::min(z, 1.0L);
  const Sum m0 = kummer_series(a, b, z_start);
  const Sum m1 = kummer_series(a + 1.0L, b + 1.0L, z_start);
  if (std::isfinite(m0.rel_error) && std::isfinite(m1.rel_error) && !m0.value.is_zero()) {
    const Scaled dm = m1.value * (a / b);
    const OdePoint start = ode_point(z_start, m0.value, dm, m0.rel_error + m1.rel_error);
    try {
      best = better(best, from_ode(kummer_ode_continue(a, b, start, z)));
    } catch (const ConvergenceError&) {
      if (!(best.rel_error <= kGiveUp)) throw;
    }
  }
  if (best.rel_error > kGiveUp) fail("kummer_m", a, b, z, best.rel_error);
  return best.value;
}

Scaled tricomi_u_scaled(wide a, wide b, wide z) {
  require_finite(a, b, z, "tricomi_u");
  if (z <= 0.0L) {
    throw DomainError("tricomi_u: z must be positive (z=" + std::to_string(static_cast<double>(z)) +
                      ")");
  }
  if (a == 0.0L) return Scaled::from(1.0L);

  // Terminating cases: the large-z series is a finite polynomial in 1/z.
  Sum best = tricomi_asymptotic(a, b, z);
  if (is_nonpositive_integer(a) || is_nonpositive_integer(a - b + 1.0L)) return best.value;
  if (best.rel_error < kAccept) return best.value;

  if (b != std::floor(b)) {
    best = better(best, tricomi_connection(a, b, z));
    if (best.rel_error < kAccept) return best.value;
  }

  // Backward continuation from a point where the asymptotic series is accurate.
  wide z_start = 0.0L;
  Sum u0, u1;
  wide z_try = std::max(z, 1.0L);
  for (int i = 0; i < 16; ++i) {
    z_try *= 2.0L;
    const Sum v0 = tricomi_asymptotic(a, b, z_try);
    const Sum v1 = tricomi_asymptotic(a + 1.0L, b + 1.0L, z_try);
    if (v0.rel_error + v1.rel_error < u0.rel_error + u1.rel_error) {
      u0 = v0;
      u1 = v1;
      z_start = z_try;
    }
    if (u0.rel_error + u1.rel_error < 1e-17L) break;
  }
  if (std::isfinite(u0.rel_error) && std::isfinite(u1.rel_error) && !u0.value.is_zero()) {
    const Scaled du = u1.value * (-a);
    const OdePoint start = ode_point(z_start, u0.value, du, u0.rel_error + u1.rel_error);
    try {
      best = better(best, from_ode(kummer_ode_continue(a, b, start, z)));
    } catch (const ConvergenceError&) {
      if (!(best.rel_error <= kGiveUp)) throw;
    }
  }
  if (best.rel_error > kGiveUp) fail("tricomi_u", a, b, z, best.rel_error);
  return best.value;
}

double kummer_m(const KummerParams& p) {
  return static_cast<double>(kummer_m_scaled(p.a, p.b, p.z).value());
}

double kummer_m_deriv(const KummerParams& p) {
  if (p.a == 0.0) {
    kummer_m_scaled(p.a, p.b, p.z);  // domain checks
    return 0.0;
  }
  const wide a = p.a;
  const wide b = p.b;
  return static_cast<double>((kummer_m_scaled(a + 1.0L, b + 1.0L, p.z) * (a / b)).value());
}

double tricomi_u(const KummerParams& p) {
  return static_cast<double>(tricomi_u_scaled(p.a, p.b, p.z).value());
}

double tricomi_u_deriv(const KummerParams& p) {
  if (p.a == 0.0) {
    tricomi_u_scaled(p.a, p.b, p.z);
    return 0.0;
  }
  const wide a = p.a;
  return static_cast<double>((tricomi_u_scaled(a + 1.0L, p.b + 1.0L, p.z) * (-a)).value());
}

}  // namespace susyritus::specfun
