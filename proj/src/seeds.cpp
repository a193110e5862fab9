#include "susyritus/seeds.hpp"

#include <cmath>
#include <limits>

#include "susyritus/errors.hpp"
#include "susyritus/specfun.hpp"

namespace susyritus {

namespace {

using specfun::wide;

constexpr double kPi = 3.14159265358979323846;
constexpr int kUniformLevels = std::numeric_limits<int>::max() / 4;

// Depth (in log of F^2) at which a support window is cut.
constexpr double kSupportDepth = 70.0;

bool finite_all(std::initializer_list<double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

// Positive t with 2S (t + e^{-t} - 1) = depth (inner side) or
// 2S (e^t - 1 - t) = depth (outer side).
double log_offset(double S, bool inner) {
  auto g = [&](double t) { return 2.0 * S * (inner ? t + std::exp(-t) - 1.0 : std::expm1(t) - t); };
  double lo = 0.0, hi = 1.0;
  while (g(hi) < kSupportDepth) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < kSupportDepth ? lo : hi) = mid;
  }
  return hi;
}

}  // namespace

std::string to_string(SeedKind kind) { return kind == SeedKind::Uniform ? "uniform" : "exponential"; }

SeedKind seed_kind_from_string(const std::string& name) {
  if (name == "uniform") return SeedKind::Uniform;
  if (name == "exponential") return SeedKind::Exponential;
  throw ConfigError("unknown seed '" + name + "' (expected uniform or exponential)");
}

int FieldConfig::sign_of_mass() const {
  if (mass_sign != 0) return mass_sign > 0 ? 1 : -1;
  if (m > 0) return 1;
  if (m < 0) return -1;
  throw ConfigError("m = 0 needs an explicit mass sign");
}

void FieldConfig::validate() const {
  if (!finite_all({B0, e_charge, alpha, p2, m, epsilon1, nu1})) {
    throw ConfigError("all field parameters must be finite");
  }
  if (B0 <= 0) throw ConfigError("B0 must be positive");
  if (e_charge <= 0) throw ConfigError("e must be positive");
  if (epsilon1 > 0) throw ConfigError("epsilon1 must satisfy epsilon1 <= 0");
  if (mass_sign < -1 || mass_sign > 1) throw ConfigError("mass sign must be -1, 0 or +1");
  if (mass_sign != 0 && m != 0 && (m > 0) != (mass_sign > 0)) {
    throw ConfigError("mass sign contradicts the sign of m");
  }
  if (seed_kind == SeedKind::Uniform) {
    if (!(nu1 > -1.0 && nu1 < 1.0)) throw ConfigError("uniform seed requires nu1 in (-1, 1)");
  } else {
    if (alpha <= 0) throw ConfigError("exponential seed requires alpha > 0");
    if (nu1 >= -1.0 && nu1 <= 0.0) {
      throw ConfigError("exponential seed requires nu1 outside [-1, 0]");
    }
    if (q2() <= 0) throw ConfigError("exponential seed requires q2 = p2 + D > 0");
  }
}

std::vector<std::string> FieldConfig::warnings() const {
  std::vector<std::string> out;
  if (seed_kind == SeedKind::Exponential && B0 <= 1.0) {
    out.push_back("exponential seed with B0 <= 1: outside the B0 > 1 regime of the original construction");
  }
  return out;
}

SeedSystem::SeedSystem(const FieldConfig& cfg) : cfg_(cfg) {
  if (!finite_all({cfg.B0, cfg.e_charge, cfg.alpha, cfg.p2})) {
    throw ConfigError("seed parameters must be finite");
  }
  if (cfg.B0 <= 0 || cfg.e_charge <= 0) throw ConfigError("B0 and e must be positive");
  if (cfg.seed_kind == SeedKind::Uniform) {
    n_max_ = kUniformLevels;
  } else {
    if (cfg.alpha <= 0) throw ConfigError("exponential seed requires alpha > 0");
    if (cfg.q2() <= 0) throw ConfigError("exponential seed has no bound states (q2 <= 0)");
    const double r = cfg.q2() / cfg.alpha;
    if (r > 1e8) throw ConfigError("alpha too small for the exponential seed");
    n_max_ = static_cast<int>(std::ceil(r)) - 1;
  }
}

SeedSystem::SeedSystem(const SeedSystem& other) : cfg_(other.cfg_), n_max_(other.n_max_) {
  std::lock_guard<std::mutex> lock(other.mutex_);
  log_norms_ = other.log_norms_;
}

SeedSystem& SeedSystem::operator=(const SeedSystem& other) {
  if (this == &other) return *this;
  std::map<int, double> norms;
  {
    std::lock_guard<std::mutex> lock(other.mutex_);
    norms = other.log_norms_;
  }
  std::lock_guard<std::mutex> lock(mutex_);
  cfg_ = other.cfg_;
  n_max_ = other.n_max_;
  log_norms_ = std::move(norms);
  return *this;
}

double SeedSystem::D() const {
  if (kind() != SeedKind::Exponential) throw DomainError("D is defined for the exponential seed only");
  return cfg_.D();
}

double SeedSystem::q2() const {
  if (kind() != SeedKind::Exponential) throw DomainError("q2 is defined for the exponential seed only");
  return cfg_.q2();
}

double SeedSystem::w0(double x) const {
  if (kind() == SeedKind::Uniform) return 0.5 * omega() * x + cfg_.p2;
  return cfg_.q2() - cfg_.D() * std::exp(-cfg_.alpha * x);
}

double SeedSystem::w0_prime(double x) const {
  if (kind() == SeedKind::Uniform) return 0.5 * omega();
  return cfg_.alpha * cfg_.D() * std::exp(-cfg_.alpha * x);
}

double SeedSystem::v0(int sigma, double x) const {
  if (sigma != 1 && sigma != -1) throw DomainError("sigma must be +1 or -1");
  const double w = w0(x);
  return w * w - sigma * w0_prime(x);
}

double SeedSystem::b0_field(double x) const { return w0_prime(x) / cfg_.e_charge; }

double SeedSystem::eta(double x) const {
  return std::sqrt(0.5 * omega()) * (x + 2.0 * cfg_.p2 / omega());
}

double SeedSystem::rho(double x) const {
  return 2.0 * cfg_.D() / cfg_.alpha * std::exp(-cfg_.alpha * x);
}

double SeedSystem::x_of_rho(double r) const {
  return -std::log(cfg_.alpha * r / (2.0 * cfg_.D())) / cfg_.alpha;
}

void SeedSystem::check_index(int n, int sigma) const {
  if (sigma != 1 && sigma != -1) throw DomainError("sigma must be +1 or -1");
  const int top = sigma == 1 ? n : n + 1;
  if (n < 0 || top > n_max_) {
    throw IndexError("seed level n=" + std::to_string(n) + " (sigma=" + std::to_string(sigma) +
                     ") outside the bound-state range 0.." + std::to_string(sigma == 1 ? n_max_ : n_max_ - 1));
  }
}

double SeedSystem::eigenvalue(int n, int sigma) const {
  check_index(n, sigma);
  if (sigma == -1) return eigenvalue(n + 1, 1);
  return eigenvalue_formula(n);
}

double SeedSystem::eigenvalue_formula(int n) const {
  if (kind() == SeedKind::Uniform) return omega() * n;
  const double a = cfg_.alpha;
  return a * n * (2.0 * cfg_.q2() - a * n);
}

double SeedSystem::log_norm_constant(int n) const {
  check_index(n, 1);
  if (kind() == SeedKind::Uniform) {
    return 0.5 * (0.5 * std::log(omega() / (2.0 * kPi)) - n * std::log(2.0) - specfun::log_gamma(n + 1.0));
  }
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = log_norms_.find(n);
    if (it != log_norms_.end()) return it->second;
  }
  const wide s = static_cast<wide>(cfg_.q2()) / cfg_.alpha - n;
  const wide peak = -s + s * std::log(2.0L * s);
  auto shape = [&](double x) {
    const wide r = rho(x);
    const wide lg = -r / 2 + s * std::log(r) - peak;
    const wide l = specfun::laguerre<wide>(n, 2 * s, r);
    const wide v = std::exp(lg) * l;
    return static_cast<double>(v * v);
  };
  numerics::QuadOptions opt;
  opt.abs_tol = 0.0;
  opt.rel_tol = 1e-13;
  opt.initial_intervals = 64;
  const double integral = numerics::integrate_adaptive(shape, support(n), opt).value;
  const double value = static_cast<double>(-peak) - 0.5 * std::log(integral);
  std::lock_guard<std::mutex> lock(mutex_);
  log_norms_.emplace(n, value);
  return value;
}

double SeedSystem::plus_state(int n, double x, double* deriv) const {
  const wide log_n = log_norm_constant(n);
  if (kind() == SeedKind::Uniform) {
    const wide e = eta(x);
    const wide pre = std::exp(log_n - e * e / 2);
    const wide f = pre * specfun::hermite<wide>(n, e);
    if (deriv) {
      // dF_n/dx = sqrt(w/2) (-eta F_n + sqrt(2n) F_{n-1}), with N_{n-1} = sqrt(2n) N_n.
      const wide f_prev = n == 0 ? 0.0L : pre * std::sqrt(2.0L * n) * specfun::hermite<wide>(n - 1, e);
      *deriv = static_cast<double>(std::sqrt(0.5L * omega()) * (-e * f + std::sqrt(2.0L * n) * f_prev));
    }
    return static_cast<double>(f);
  }
  const wide a = cfg_.alpha;
  const wide s = static_cast<wide>(cfg_.q2()) / a - n;
  const wide r = rho(x);
  const wide pre = std::exp(log_n - r / 2 + s * std::log(r));
  const wide l = specfun::laguerre<wide>(n, 2 * s, r);
  if (deriv) {
    const wide lp = specfun::laguerre_deriv<wide>(n, 2 * s, r);
    *deriv = static_cast<double>(-a * pre * ((s - r / 2) * l + r * lp));
  }
  return static_cast<double>(pre * l);
}

double SeedSystem::eigenfunction(int n, int sigma, double x) const {
  check_index(n, sigma);
  if (sigma == 1) return plus_state(n, x, nullptr);
  // F_{n,-1} = L0^- F_{n+1,+1} / sqrt(k_{n+1}^+), L0^- = d/dx + W0.
  double d = 0.0;
  const double f = plus_state(n + 1, x, &d);
  return (d + w0(x) * f) / std::sqrt(eigenvalue(n + 1, 1));
}

double SeedSystem::eigenfunction_deriv(int n, int sigma, double x) const {
  check_index(n, sigma);
  double d = 0.0;
  if (sigma == 1) {
    plus_state(n, x, &d);
    return d;
  }
  const double f = plus_state(n + 1, x, &d);
  const double k = eigenvalue(n + 1, 1);
  const double f2 = (v0(1, x) - k) * f;
  return (f2 + w0_prime(x) * f + w0(x) * d) / std::sqrt(k);
}

numerics::Window SeedSystem::support(int n) const {
  check_index(n, 1);
  if (kind() == SeedKind::Uniform) {
    const double half = std::sqrt(2.0 * n + 1.0) + 8.0;
    const double scale = std::sqrt(0.5 * omega());
    const double centre = -2.0 * cfg_.p2 / omega();
    return {centre - half / scale, centre + half / scale};
  }
  const double s = cfg_.q2() / cfg_.alpha - n;
  const double rho_min = 2.0 * s * std::exp(-log_offset(s, true));
  const double rho_max = 2.0 * (s + n) * std::exp(log_offset(s + n, false)) + 4.0 * n + 10.0;
  return {x_of_rho(rho_max), x_of_rho(rho_min)};
}

numerics::Window SeedSystem::default_window(int n) const {
  if (kind() == SeedKind::Uniform) {
    const double centre = -2.0 * cfg_.p2 / omega();
    const double half = 8.0 / std::sqrt(omega());
    return {centre - half, centre + half};
  }
  // Turning points V0^+ = k_n with y = D e^{-alpha x}:
  // y^2 - (2 q2 + alpha) y + q2^2 - k_n = 0.
  const double k = eigenvalue(std::min(n, n_max_), 1);
  const double q = cfg_.q2();
  const double a = cfg_.alpha;
  const double bq = 2.0 * q + a;
  const double disc = std::sqrt(bq * bq - 4.0 * (q * q - k));
  const double y_hi = 0.5 * (bq + disc);
  const double y_lo = 0.5 * (bq - disc);
  const double x_left = -std::log(y_hi / cfg_.D()) / a;
  const double x_right = -std::log(y_lo / cfg_.D()) / a;
  return {x_left, x_right + 10.0 / a};
}

}  // namespace susyritus
