#include "susyritus/intertwine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "susyritus/errors.hpp"

namespace susyritus {

namespace {

using specfun::Scaled;
using specfun::wide;

Scaled M(wide a, wide b, wide z) { return specfun::kummer_m_scaled(a, b, z); }
Scaled U(wide a, wide b, wide z) { return specfun::tricomi_u_scaled(a, b, z); }

}  // namespace

IntertwinedSystem::IntertwinedSystem(const FieldConfig& cfg) : IntertwinedSystem(cfg, ScreenSpec{}) {}

IntertwinedSystem::IntertwinedSystem(const FieldConfig& cfg, const ScreenSpec& spec) : seed_(cfg) {
  const double eps1 = cfg.epsilon1;
  if (!std::isfinite(eps1) || !std::isfinite(cfg.nu1)) throw ConfigError("epsilon1 and nu1 must be finite");
  if (eps1 > 0) {
    throw UnsupportedTransformError("epsilon1 > 0: only factorization energies at or below k_0^+ = 0 are supported");
  }
  case_ = eps1 == 0 ? TransformCase::LevelDeletion : TransformCase::LevelAddition;

  if (cfg.seed_kind == SeedKind::Uniform) {
    if (!(std::fabs(cfg.nu1) < 1.0)) {
      throw SingularTransformError("uniform seed: |nu1| >= 1 makes u1 vanish or change sign");
    }
    a_ = -static_cast<wide>(eps1) / (2.0L * cfg.omega());
    b_ = 0.5L;
    // g = 2 nu1 Gamma(a+1/2)/Gamma(a); 1/Gamma(0) = 0.
    mix_ = a_ == 0 ? 0.0L : 2.0L * cfg.nu1 * std::exp(specfun::log_gamma(a_ + 0.5L) - specfun::log_gamma(a_));
  } else {
    const wide q2 = cfg.q2();
    const wide alpha = cfg.alpha;
    kappa_ = std::sqrt(q2 * q2 - static_cast<wide>(eps1));
    a_ = -static_cast<wide>(eps1) / ((kappa_ + q2) * alpha);
    b_ = 1.0L + 2.0L * kappa_ / alpha;
    if (cfg.nu1 == 0.0) throw SingularTransformError("exponential seed: nu1 = 0 leaves only the U solution");
    mix_ = 2.0L * q2 / alpha * (1.0L + 1.0L / cfg.nu1);
    if (!(mix_ > 0)) {
      throw SingularTransformError("exponential seed: nu1 in [-1, 0] makes u1 change sign or lose its growth");
    }
  }

  ScreenSpec s = spec;
  if (!(s.window.hi > s.window.lo)) s.window = numerics::hull(seed_.default_window(), seed_.support(0));
  screen(s);
}

IntertwinedSystem::IntertwinedSystem(const IntertwinedSystem& other)
    : seed_(other.seed_), case_(other.case_), a_(other.a_), b_(other.b_), kappa_(other.kappa_), mix_(other.mix_) {
  std::lock_guard<std::mutex> lock(other.mutex_);
  log_norms_ = other.log_norms_;
}

void IntertwinedSystem::screen(const ScreenSpec& spec) const {
  const numerics::Grid grid(spec.window, std::max(16, spec.n_points));
  int first = 0;
  for (int i = 0; i < grid.size(); ++i) {
    const int sign = ratios(grid[i], false).w.sign;
    if (sign == 0 || (first != 0 && sign != first)) {
      throw SingularTransformError("u1 has a node near x = " + std::to_string(grid[i]) +
                                   "; the transformed system would be singular");
    }
    first = sign;
  }
}

IntertwinedSystem::Ratios IntertwinedSystem::ratios(double x, bool derivatives) const {
  Ratios r;
  const wide a = a_;
  const wide c = mix_;
  if (seed_.kind() == SeedKind::Uniform) {
    const wide eta = seed_.eta(x);
    const wide z = eta * eta;
    const Scaled m1 = M(a, 0.5L, z);
    const Scaled m2 = c == 0 ? Scaled{} : M(a + 0.5L, 1.5L, z);
    r.w = m1 + m2 * (c * eta);
    if (!derivatives) return r;
    // d/dz and d^2/dz^2 of both Kummer functions by the contiguous identities.
    const Scaled m1p = a == 0 ? Scaled{} : M(a + 1, 1.5L, z) * (2 * a);
    const Scaled m1pp = a == 0 ? Scaled{} : M(a + 2, 2.5L, z) * (4 * a * (a + 1) / 3);
    Scaled m2p, m2pp;
    if (c != 0) {
      m2p = M(a + 1.5L, 2.5L, z) * ((a + 0.5L) / 1.5L);
      m2pp = M(a + 2.5L, 3.5L, z) * ((a + 0.5L) * (a + 1.5L) / 3.75L);
    }
    const Scaled w_eta = m1p * (2 * eta) + (m2 + m2p * (2 * z)) * c;
    const Scaled w_eta2 = m1p * 2 + m1pp * (4 * z) + (m2p * (6 * eta) + m2pp * (4 * z * eta)) * c;
    r.d1 = specfun::ratio(w_eta, r.w);
    r.d2 = specfun::ratio(w_eta2, r.w);
    return r;
  }
  const wide rho = seed_.rho(x);
  const wide b = b_;
  r.w = M(a, b, rho) + U(a, b, rho) * c;
  if (!derivatives || a == 0) return r;
  const Scaled w_rho = M(a + 1, b + 1, rho) * (a / b) - U(a + 1, b + 1, rho) * (a * c);
  const Scaled w_rho2 = M(a + 2, b + 2, rho) * (a * (a + 1) / (b * (b + 1))) + U(a + 2, b + 2, rho) * (a * (a + 1) * c);
  r.d1 = specfun::ratio(w_rho, r.w);
  r.d2 = specfun::ratio(w_rho2, r.w);
  return r;
}

double IntertwinedSystem::shifted_potential(double x) const { return seed_.v0(1, x) - epsilon1(); }

double IntertwinedSystem::log_u1(double x) const {
  const Ratios r = ratios(x, false);
  if (seed_.kind() == SeedKind::Uniform) {
    const wide eta = seed_.eta(x);
    return static_cast<double>(-eta * eta / 2 + r.w.log_abs);
  }
  const wide rho = seed_.rho(x);
  return static_cast<double>(-rho / 2 - kappa_ * x + r.w.log_abs);
}

double IntertwinedSystem::u1(double x) const {
  const int sign = ratios(x, false).w.sign;
  return sign * std::exp(log_u1(x));
}

double IntertwinedSystem::w1(double x) const {
  const Ratios r = ratios(x, true);
  if (seed_.kind() == SeedKind::Uniform) {
    return static_cast<double>(std::sqrt(0.5L * seed_.omega()) * (-seed_.eta(x) + r.d1));
  }
  const wide alpha = config().alpha;
  const wide rho = seed_.rho(x);
  return static_cast<double>(alpha * rho / 2 - kappa_ - alpha * rho * r.d1);
}

double IntertwinedSystem::w1_prime(double x) const {
  const Ratios r = ratios(x, true);
  if (seed_.kind() == SeedKind::Uniform) {
    return static_cast<double>(0.5L * seed_.omega() * (-1 + r.d2 - r.d1 * r.d1));
  }
  const wide alpha = config().alpha;
  const wide rho = seed_.rho(x);
  const wide calf_rho = -alpha * r.d1 - alpha * rho * (r.d2 - r.d1 * r.d1);
  return static_cast<double>(-alpha * alpha * rho / 2 - alpha * rho * calf_rho);
}

double IntertwinedSystem::v1(double x) const { return shifted_potential(x) - 2.0 * w1_prime(x); }

double IntertwinedSystem::b1(double x) const { return w1_prime(x) / config().e_charge; }

double IntertwinedSystem::calF(double rho) const {
  if (seed_.kind() != SeedKind::Exponential) throw DomainError("calF is defined for the exponential seed only");
  const Ratios r = ratios(seed_.x_of_rho(rho), true);
  return static_cast<double>(-static_cast<wide>(config().alpha) * rho * r.d1);
}

double IntertwinedSystem::calF_rho(double rho) const {
  if (seed_.kind() != SeedKind::Exponential) throw DomainError("calF is defined for the exponential seed only");
  const Ratios r = ratios(seed_.x_of_rho(rho), true);
  const wide alpha = config().alpha;
  return static_cast<double>(-alpha * r.d1 - alpha * rho * (r.d2 - r.d1 * r.d1));
}

void IntertwinedSystem::require_level_addition() const {
  if (case_ != TransformCase::LevelAddition) {
    throw UnsupportedTransformError(
        "epsilon1 = 0 reproduces the seed ground state (level deletion); transformed states are only "
        "provided for level addition, epsilon1 < 0");
  }
}

double IntertwinedSystem::eigenvalue(int n) const {
  require_level_addition();
  if (n < 0) throw IndexError("transformed level index must be non-negative");
  if (n == 0) return 0.0;
  return seed_.eigenvalue(n - 1, 1) - epsilon1();
}

int IntertwinedSystem::n_max() const {
  const int seed_max = seed_.n_max();
  return seed_max >= std::numeric_limits<int>::max() - 1 ? seed_max : seed_max + 1;
}

numerics::Window IntertwinedSystem::support(int n) const {
  if (n < 0) throw IndexError("transformed level index must be non-negative");
  return seed_.support(n == 0 ? 0 : n - 1);
}

double IntertwinedSystem::raw_state(int n, double x, double* deriv) const {
  const int m = n - 1;
  const double f = seed_.eigenfunction(m, 1, x);
  const double df = seed_.eigenfunction_deriv(m, 1, x);
  const double k = seed_.eigenvalue(m, 1);
  const double scale = 1.0 / std::sqrt(k - epsilon1());
  const double w = w1(x);
  if (deriv) {
    const double f2 = (seed_.v0(1, x) - k) * f;
    *deriv = (-f2 + w1_prime(x) * f + w * df) * scale;
  }
  return (-df + w * f) * scale;
}

double IntertwinedSystem::log_norm(int n) const {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = log_norms_.find(n);
    if (it != log_norms_.end()) return it->second;
  }
  const numerics::Window win = support(n);
  numerics::QuadOptions opt;
  opt.abs_tol = 0.0;
  opt.rel_tol = 1e-13;
  opt.initial_intervals = 64;
  double value = 0.0;
  if (n == 0) {
    double shift = std::numeric_limits<double>::infinity();
    const numerics::Grid probe(win, 513);
    for (int i = 0; i < probe.size(); ++i) shift = std::min(shift, log_u1(probe[i]));
    const double integral =
        numerics::integrate_adaptive([&](double x) { return std::exp(-2.0 * (log_u1(x) - shift)); }, win, opt).value;
    value = shift - 0.5 * std::log(integral);
  } else {
    const double integral = numerics::integrate_adaptive(
                                [&](double x) {
                                  const double v = raw_state(n, x, nullptr);
                                  return v * v;
                                },
                                win, opt)
                                .value;
    value = -0.5 * std::log(integral);
  }
  std::lock_guard<std::mutex> lock(mutex_);
  log_norms_.emplace(n, value);
  return value;
}

TransformedState IntertwinedSystem::state(int n) const {
  TransformedState s;
  s.n = n;
  s.eigenvalue = eigenvalue(n);
  s.norm_constant = std::exp(log_norm(n));
  return s;
}

double IntertwinedSystem::eigenfunction(int n, double x) const {
  eigenvalue(n);
  if (n == 0) return std::exp(log_norm(0) - log_u1(x));
  return std::exp(log_norm(n)) * raw_state(n, x, nullptr);
}

double IntertwinedSystem::eigenfunction_deriv(int n, double x) const {
  eigenvalue(n);
  if (n == 0) return -w1(x) * eigenfunction(0, x);
  double d = 0.0;
  raw_state(n, x, &d);
  return std::exp(log_norm(n)) * d;
}

namespace closed_forms {

namespace {

// R = M(11/10, 3/2, z) / M(1/10, 1/2, z).
wide ratio_r(wide z) { return specfun::ratio(M(1.1L, 1.5L, z), M(0.1L, 0.5L, z)); }

}  // namespace

double uniform_w1(double omega, double eta) {
  const wide e = eta;
  return static_cast<double>(std::sqrt(omega / 2.0L) * e * (-1 + 0.4L * ratio_r(e * e)));
}

double uniform_b1(double B0, double omega, double eta) {
  (void)omega;  // sqrt(2/omega) cancels against d/dx = sqrt(omega/2) d/deta
  const wide e = eta;
  const wide z = e * e;
  const wide r = ratio_r(z);
  const wide num_p = specfun::ratio(M(2.1L, 2.5L, z), M(0.1L, 0.5L, z)) * (1.1L / 1.5L);
  const wide r_eta = 2 * e * (num_p - 0.2L * r * r);
  return static_cast<double>(-B0 + 0.4L * B0 * (r + e * r_eta));
}

double uniform_excited(int n, double eta, double f_n, double f_n_minus_1) {
  const wide e = eta;
  const wide r = ratio_r(e * e);
  const wide prev = n == 0 ? 0.0L : std::sqrt(2.0L * n) * f_n_minus_1;
  return static_cast<double>((0.4L * e * r * f_n - prev) / std::sqrt(2.0L * (n + 0.2L)));
}

double exponential_excited(const IntertwinedSystem& sys, int n, double rho, double f_n, double df_n_drho) {
  const double q2 = sys.seed().q2();
  const double alpha = sys.config().alpha;
  const double lead = (q2 - sys.kappa() + sys.calF(rho)) * f_n;
  const double a_minus = -alpha * rho * df_n_drho + (q2 - alpha * rho / 2.0) * f_n;
  return (lead - a_minus) / std::sqrt(alpha * (n * (2.0 * q2 - alpha * n) + 0.5 * (2.0 * q2 - alpha)));
}

}  // namespace closed_forms

}  // namespace susyritus
