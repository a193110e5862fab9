#pragma once

// Seed systems: uniform field (shifted oscillator) and exponentially decaying
// field (Morse).  Superpotential, partner potentials, field profile, spectrum
// and normalized eigenfunctions of both spin towers.

#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "susyritus/numerics.hpp"

namespace susyritus {

enum class SeedKind { Uniform, Exponential };

std::string to_string(SeedKind kind);
SeedKind seed_kind_from_string(const std::string& name);

struct FieldConfig {
  SeedKind seed_kind = SeedKind::Uniform;
  double B0 = 0.5;
  double e_charge = 1.0;
  double alpha = 0.0;
  double p2 = 1.0;
  double m = 1.0;
  /// Explicit sign of the mass: +1, -1, or 0 to take it from m.
  int mass_sign = 0;
  double epsilon1 = -0.2;
  double nu1 = 0.0;

  double omega() const { return 2.0 * e_charge * B0; }
  /// D = e B0 / alpha (Exponential).
  double D() const { return e_charge * B0 / alpha; }
  /// q2 = p2 + D (Exponential).
  double q2() const { return p2 + D(); }

  /// sgn(m); needs an explicit mass_sign when m == 0.
  int sign_of_mass() const;

  /// Full parameter check, including the nu1 ranges.  Throws ConfigError.
  void validate() const;
  /// Recorded, non-fatal restrictions (e.g. B0 <= 1 for the exponential seed).
  std::vector<std::string> warnings() const;
};

class SeedSystem {
 public:
  explicit SeedSystem(const FieldConfig& cfg);
  SeedSystem(const SeedSystem& other);
  SeedSystem& operator=(const SeedSystem& other);

  const FieldConfig& config() const { return cfg_; }
  SeedKind kind() const { return cfg_.seed_kind; }
  double omega() const { return cfg_.omega(); }
  double D() const;
  double q2() const;

  /// Largest bound-state index of the sigma = +1 tower (a large sentinel for Uniform).
  int n_max() const { return n_max_; }

  double w0(double x) const;
  double w0_prime(double x) const;
  double v0(int sigma, double x) const;
  double b0_field(double x) const;

  /// k_n^sigma, with k_n^- = k_{n+1}^+.
  double eigenvalue(int n, int sigma) const;
  /// omega n or alpha n (2 q2 - alpha n) without the bound-state check.
  double eigenvalue_formula(int n) const;
  double eigenfunction(int n, int sigma, double x) const;
  double eigenfunction_deriv(int n, int sigma, double x) const;
  /// log N_n of the sigma = +1 tower.
  double log_norm_constant(int n) const;

  /// eta(x) = sqrt(omega/2) (x + 2 p2/omega) (Uniform).
  double eta(double x) const;
  /// rho(x) = (2D/alpha) exp(-alpha x) (Exponential).
  double rho(double x) const;
  double x_of_rho(double rho) const;

  /// Window outside which F_{n,+1} is negligible (below ~1e-18 of its peak).
  numerics::Window support(int n) const;
  /// Plotting window: Uniform [-2p2/w - 8/sqrt(w), -2p2/w + 8/sqrt(w)];
  /// Exponential [x_turn-, x_turn+ + 10/alpha] at level n.
  numerics::Window default_window(int n = 0) const;

 private:
  void check_index(int n, int sigma) const;
  double plus_state(int n, double x, double* deriv) const;

  FieldConfig cfg_;
  int n_max_ = 0;
  mutable std::mutex mutex_;
  mutable std::map<int, double> log_norms_;
};

}  // namespace susyritus
