#pragma once

// First-order intertwining of a seed system at factorization energy epsilon1
// with deformation parameter nu1: u1, W1, V1, B1, the transformed spectrum and
// the normalized transformed eigenfunctions.

#include <map>
#include <mutex>

#include "susyritus/numerics.hpp"
#include "susyritus/seeds.hpp"
#include "susyritus/specfun.hpp"

namespace susyritus {

enum class TransformCase {
  /// epsilon1 < 0: a new ground level is created at k = 0.
  LevelAddition,
  /// epsilon1 = 0: u1 is the seed ground state, which is removed.
  LevelDeletion,
};

struct TransformedState {
  int n = 0;
  double eigenvalue = 0.0;
  /// 1 / || raw state ||, raw = 1/u1 (n = 0) or L1^+ F_{n-1} / sqrt(k_{n-1}^+ - epsilon1).
  double norm_constant = 1.0;
};

struct ScreenSpec {
  numerics::Window window;
  int n_points = 10240;
};

class IntertwinedSystem {
 public:
  /// Runs the nodelessness screen over the hull of the seed display window and
  /// the ground-state support at 10x the default 1024-point density.
  explicit IntertwinedSystem(const FieldConfig& cfg);
  IntertwinedSystem(const FieldConfig& cfg, const ScreenSpec& screen);
  IntertwinedSystem(const IntertwinedSystem& other);

  const SeedSystem& seed() const { return seed_; }
  const FieldConfig& config() const { return seed_.config(); }
  double epsilon1() const { return config().epsilon1; }
  double nu1() const { return config().nu1; }
  TransformCase transform_case() const { return case_; }

  /// Kummer parameters of u1: Uniform a = -epsilon1/(2 omega), b = 1/2;
  /// Exponential a = (kappa - q2)/alpha, b = 1 + 2 kappa/alpha.
  double kummer_a() const { return static_cast<double>(a_); }
  double kummer_b() const { return static_cast<double>(b_); }
  /// kappa = sqrt(q2^2 - epsilon1) (Exponential).
  double kappa() const { return static_cast<double>(kappa_); }
  /// Coefficient of the second solution in u1: 2 nu1 Gamma(a+1/2)/Gamma(a)
  /// (Uniform) or (2 q2/alpha)(1 + 1/nu1) (Exponential).
  double mix_coefficient() const { return static_cast<double>(mix_); }

  double shifted_potential(double x) const;
  double u1(double x) const;
  double log_u1(double x) const;
  double w1(double x) const;
  double w1_prime(double x) const;
  double v1(double x) const;
  double b1(double x) const;
  /// F(rho) = -alpha rho w_rho / w, the non-trivial part of W1 (Exponential).
  double calF(double rho) const;
  double calF_rho(double rho) const;

  /// L1^+ f = -f' + W1 f and L1^- f = f' + W1 f.
  double ladder_plus(double f, double df, double x) const { return -df + w1(x) * f; }
  double ladder_minus(double f, double df, double x) const { return df + w1(x) * f; }

  /// k_0^(1) = 0, k_{n+1}^(1) = k_n^+ - epsilon1.
  double eigenvalue(int n) const;
  int n_max() const;
  TransformedState state(int n) const;
  double eigenfunction(int n, double x) const;
  double eigenfunction_deriv(int n, double x) const;
  numerics::Window support(int n) const;
  numerics::Window default_window() const { return seed_.default_window(); }

 private:
  struct Ratios {
    specfun::Scaled w;  // u1 without its elementary prefactor
    specfun::wide d1 = 0;  // w'/w in the natural variable (eta or rho)
    specfun::wide d2 = 0;  // w''/w
  };
  Ratios ratios(double x, bool derivatives) const;
  void require_level_addition() const;
  double raw_state(int n, double x, double* deriv) const;
  double log_norm(int n) const;
  void screen(const ScreenSpec& spec) const;

  SeedSystem seed_;
  TransformCase case_ = TransformCase::LevelAddition;
  specfun::wide a_ = 0, b_ = 0.5L, kappa_ = 0, mix_ = 0;
  mutable std::mutex mutex_;
  mutable std::map<int, double> log_norms_;
};

namespace closed_forms {

/// Uniform seed at epsilon1 = -omega/5, nu1 = 0, with R = M(11/10,3/2,eta^2)/M(1/10,1/2,eta^2).
double uniform_w1(double omega, double eta);
/// -B0 + (2 B0/5) d/dx[ sqrt(2/omega) eta R ].
double uniform_b1(double B0, double omega, double eta);
/// ((2 eta/5) R F_n - sqrt(2n) F_{n-1}) / sqrt(2(n + 1/5)), with the seed states supplied.
double uniform_excited(int n, double eta, double f_n, double f_n_minus_1);

/// Exponential excited state ((q2 - kappa + F) - A^-) F_n / sqrt(alpha [n(2 q2 - alpha n) + (2 q2 - alpha)/2]),
/// A^- = -alpha rho d/drho + (q2 - alpha rho/2), given F_n and dF_n/drho.  Valid at epsilon1 = -k_1^+/2.
double exponential_excited(const IntertwinedSystem& sys, int n, double rho, double f_n, double df_n_drho);

}  // namespace closed_forms

}  // namespace susyritus
