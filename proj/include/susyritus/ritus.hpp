#pragma once

// Dirac algebra in 2+1 dimensions, the diagonal momentum-space propagator,
// Ritus matrices of the intertwined system, per-mode charge and current
// densities, and the alpha -> 0 limit scan of the exponential seed.

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "susyritus/intertwine.hpp"

namespace susyritus::ritus {

using Complex = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;

/// gamma^0 = sigma_3, gamma^1 = i sigma_1, gamma^2 = i sigma_2.
Mat2 gamma(int mu);
/// Metric diag(1, -1, -1).
double metric(int mu, int nu);
/// P_{+-} = (1 +- gamma^0)/2.
Mat2 projector(int sign);

struct AlgebraCheck {
  std::string name;
  double error = 0.0;
};

struct TraceReport {
  std::vector<AlgebraCheck> checks;
  double max_error() const;
  bool passed(double tol = 1e-14) const { return max_error() <= tol; }
};

/// Tr{g^l g^mu} = -2 delta, Tr{g^l g^0 g^mu g^0} = 2 delta (l = 1,2),
/// Clifford relations and projector algebra.
TraceReport dirac_trace_identities();

/// gamma.pbar with pbar^mu = (p0, 0, sqrt(k)).
Mat2 slash_pbar(double p0, double k);

/// (gamma.pbar + m) / (p0^2 - k - m^2); PoleError within pole_tol of the pole.
Mat2 propagator_momentum(double p0, double k, double m, double pole_tol = 1e-9);

struct RitusMode {
  double p0 = 0.0;
  double p2 = 0.0;
  int n = 0;
  double k = 0.0;

  /// (p0, 0, sqrt(k))
  Eigen::Vector3d pbar() const { return {p0, 0.0, std::sqrt(k)}; }
};

RitusMode make_mode(const IntertwinedSystem& sys, int n, double p0);

/// Components (E_{p,+1}, E_{p,-1}) at (t, x, y): phase F^(1)_n(x) and phase F_{n-1,+1}(x)
/// (zero for n = 0), phase = exp(-i (p0 t - p2 y)).
std::pair<Complex, Complex> ritus_components(const IntertwinedSystem& sys, const RitusMode& mode, double t,
                                             double x, double y);
Mat2 ritus_matrix(const IntertwinedSystem& sys, const RitusMode& mode, double t, double x, double y);

enum class DensityKind { Charge, Current };

struct DensityProfile {
  DensityKind kind = DensityKind::Charge;
  /// Transformed level: 0 is the new ground state, n+1 pairs F^(1)_{n+1} with F_{n,+1}.
  int level = 0;
  double p2 = 0.0;
  double m = 0.0;
  /// Spatial index for currents (1 or 2); 0 for charge.
  int ell = 0;
  std::vector<double> grid;
  std::vector<double> values;
  /// Spectral weight from the p0 integral.
  double coefficient = 0.0;
  /// Overall factor kept symbolic.
  std::string prefactor;
};

/// rho_0 = |F^(1)_0|^2 with weight sgn(m); rho_{n+1} = |F^(1)_{n+1}|^2 + |F_{n,+1}|^2 with
/// weight m / sqrt(m^2 + k^(1)_{n+1}).  mass_sign is needed only when m = 0.
DensityProfile charge_density_mode(const IntertwinedSystem& sys, int level, double m,
                                   const std::vector<double>& grid, int mass_sign = 0, int jobs = 1);

/// j_{n+1} = F_{n,+1} F^(1)_{n+1} with weight sqrt(k)/sqrt(m^2 + k); j_0 = 0.
DensityProfile current_density_mode(const IntertwinedSystem& sys, int level, double m,
                                    const std::vector<double>& grid, int ell = 1, int jobs = 1);

struct QuadratureSpec {
  enum class Rule { Single, Trapezoid, GaussLegendre };
  Rule rule = Rule::GaussLegendre;
  int nodes = 16;
};

/// Gauss-Legendre nodes and weights on [lo, hi].
void gauss_legendre(int n, double lo, double hi, std::vector<double>& nodes, std::vector<double>& weights);

/// Sum over p2 nodes of weight * coefficient(p2) * density(x, p2); the returned
/// coefficient is 1.  TailError when the end nodes carry more than 1e-4 of the total.
DensityProfile density_p2_integral(const FieldConfig& base, DensityKind kind, int level, double m,
                                   const std::vector<double>& grid, const numerics::Window& p2_range,
                                   const QuadratureSpec& spec, int mass_sign = 0);

struct LimitScanRow {
  double alpha = 0.0;
  /// max_n |k_n^+(alpha) - omega n|
  double k_error = 0.0;
  /// sup_x |W0(alpha, x) - W0_unif(x)| and the same at x = 2
  double w0_error = 0.0;
  double w0_error_at_2 = 0.0;
  /// sup_x |V0^+(alpha, x) - V0^+_unif(x)|
  double v0_error = 0.0;
  /// sup_x |rho_0^exp - rho_0^unif| / max rho_0^unif
  double rho0_discrepancy = 0.0;
};

struct LimitScanOptions {
  int n_max = 3;
  numerics::Window window{-10.0, 6.0};
  int n_points = 1024;
  /// epsilon1 = -fraction * k_1^+ on both sides
  double epsilon_fraction = 0.2;
  /// nu1 of the uniform reference
  double uniform_nu1 = 0.0;
};

/// Exponential seeds at fixed omega (D = omega/(2 alpha)) against the uniform seed.
std::vector<LimitScanRow> limit_scan_alpha(const FieldConfig& base, const std::vector<double>& alphas,
                                           const LimitScanOptions& opt = {});

}  // namespace susyritus::ritus
