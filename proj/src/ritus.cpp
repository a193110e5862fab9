#include "susyritus/ritus.hpp"

#include <algorithm>
#include <cmath>

#include "susyritus/errors.hpp"

namespace susyritus::ritus {

namespace {

constexpr double kPi = 3.14159265358979323846;
const Complex kI{0.0, 1.0};

void check_level(const IntertwinedSystem& sys, int level) {
  if (level < 0 || level > sys.n_max()) {
    throw IndexError("transformed level " + std::to_string(level) + " outside 0.." + std::to_string(sys.n_max()));
  }
}

std::string charge_prefactor() { return "pi*e*Integral dp2"; }
std::string current_prefactor(int ell) { return "-2*i^" + std::to_string(ell) + "*e*pi*Integral dp2"; }

}  // namespace

Mat2 gamma(int mu) {
  Mat2 g;
  switch (mu) {
    case 0:
      g << 1.0, 0.0, 0.0, -1.0;
      break;
    case 1:
      g << 0.0, kI, kI, 0.0;
      break;
    case 2:
      g << 0.0, 1.0, -1.0, 0.0;
      break;
    default:
      throw DomainError("gamma index must be 0, 1 or 2");
  }
  return g;
}

double metric(int mu, int nu) {
  if (mu != nu) return 0.0;
  return mu == 0 ? 1.0 : -1.0;
}

Mat2 projector(int sign) {
  if (sign != 1 && sign != -1) throw DomainError("projector sign must be +1 or -1");
  return 0.5 * (Mat2::Identity() + static_cast<double>(sign) * gamma(0));
}

double TraceReport::max_error() const {
  double e = 0.0;
  for (const auto& c : checks) e = std::max(e, c.error);
  return e;
}

TraceReport dirac_trace_identities() {
  TraceReport rep;
  const Mat2 g0 = gamma(0);
  for (int l = 1; l <= 2; ++l) {
    for (int mu = 0; mu <= 2; ++mu) {
      const double delta = l == mu ? 1.0 : 0.0;
      const Complex t1 = (gamma(l) * gamma(mu)).trace();
      rep.checks.push_back({"Tr{g" + std::to_string(l) + " g" + std::to_string(mu) + "} = -2 delta",
                            std::abs(t1 - Complex(-2.0 * delta))});
      const Complex t2 = (gamma(l) * g0 * gamma(mu) * g0).trace();
      rep.checks.push_back({"Tr{g" + std::to_string(l) + " g0 g" + std::to_string(mu) + " g0} = 2 delta",
                            std::abs(t2 - Complex(2.0 * delta))});
    }
  }
  for (int mu = 0; mu <= 2; ++mu) {
    for (int nu = 0; nu <= 2; ++nu) {
      const Mat2 anti = gamma(mu) * gamma(nu) + gamma(nu) * gamma(mu) - 2.0 * metric(mu, nu) * Mat2::Identity();
      rep.checks.push_back({"{g" + std::to_string(mu) + ", g" + std::to_string(nu) + "} = 2 g", anti.cwiseAbs().maxCoeff()});
    }
  }
  for (int s : {1, -1}) {
    const Mat2 p = projector(s);
    const std::string name = s > 0 ? "P+" : "P-";
    rep.checks.push_back({name + " " + name + " = " + name, (p * p - p).cwiseAbs().maxCoeff()});
    rep.checks.push_back({name + " " + (s > 0 ? "P-" : "P+") + " = 0", (p * projector(-s)).cwiseAbs().maxCoeff()});
  }
  return rep;
}

Mat2 slash_pbar(double p0, double k) {
  if (k < 0) throw DomainError("slash_pbar: k must be non-negative");
  return gamma(0) * p0 - gamma(2) * std::sqrt(k);
}

Mat2 propagator_momentum(double p0, double k, double m, double pole_tol) {
  const double denom = p0 * p0 - k - m * m;
  if (std::fabs(denom) < pole_tol) {
    throw PoleError("propagator evaluated within " + std::to_string(pole_tol) + " of its pole (p0^2 - k - m^2 = " +
                    std::to_string(denom) + ")");
  }
  return (slash_pbar(p0, k) + m * Mat2::Identity()) / denom;
}

RitusMode make_mode(const IntertwinedSystem& sys, int n, double p0) {
  check_level(sys, n);
  RitusMode mode;
  mode.p0 = p0;
  mode.p2 = sys.config().p2;
  mode.n = n;
  mode.k = sys.eigenvalue(n);
  return mode;
}

std::pair<Complex, Complex> ritus_components(const IntertwinedSystem& sys, const RitusMode& mode, double t,
                                             double x, double y) {
  check_level(sys, mode.n);
  const Complex phase = std::exp(-kI * (mode.p0 * t - mode.p2 * y));
  const Complex plus = phase * sys.eigenfunction(mode.n, x);
  const Complex minus = mode.n == 0 ? Complex(0.0) : phase * sys.seed().eigenfunction(mode.n - 1, 1, x);
  return {plus, minus};
}

Mat2 ritus_matrix(const IntertwinedSystem& sys, const RitusMode& mode, double t, double x, double y) {
  const auto [plus, minus] = ritus_components(sys, mode, t, x, y);
  Mat2 e = Mat2::Zero();
  e(0, 0) = plus;
  e(1, 1) = minus;
  return e;
}

DensityProfile charge_density_mode(const IntertwinedSystem& sys, int level, double m,
                                   const std::vector<double>& grid, int mass_sign, int jobs) {
  check_level(sys, level);
  DensityProfile p;
  p.kind = DensityKind::Charge;
  p.level = level;
  p.p2 = sys.config().p2;
  p.m = m;
  p.grid = grid;
  p.prefactor = charge_prefactor();
  if (level == 0) {
    FieldConfig c = sys.config();
    c.m = m;
    c.mass_sign = mass_sign;
    p.coefficient = c.sign_of_mass();
    sys.state(0);
    p.values = numerics::evaluate_on_grid(
        [&](double x) {
          const double f = sys.eigenfunction(0, x);
          return f * f;
        },
        grid, jobs);
    return p;
  }
  const double k = sys.eigenvalue(level);
  p.coefficient = m / std::sqrt(m * m + k);
  sys.state(level);
  p.values = numerics::evaluate_on_grid(
      [&](double x) {
        const double f1 = sys.eigenfunction(level, x);
        const double f0 = sys.seed().eigenfunction(level - 1, 1, x);
        return f1 * f1 + f0 * f0;
      },
      grid, jobs);
  return p;
}

DensityProfile current_density_mode(const IntertwinedSystem& sys, int level, double m,
                                    const std::vector<double>& grid, int ell, int jobs) {
  check_level(sys, level);
  if (ell != 1 && ell != 2) throw DomainError("current component must be 1 or 2");
  DensityProfile p;
  p.kind = DensityKind::Current;
  p.level = level;
  p.p2 = sys.config().p2;
  p.m = m;
  p.ell = ell;
  p.grid = grid;
  p.prefactor = current_prefactor(ell);
  if (level == 0) {
    p.coefficient = 0.0;
    p.values.assign(grid.size(), 0.0);
    return p;
  }
  const double k = sys.eigenvalue(level);
  p.coefficient = std::sqrt(k) / std::sqrt(m * m + k);
  sys.state(level);
  p.values = numerics::evaluate_on_grid(
      [&](double x) { return sys.seed().eigenfunction(level - 1, 1, x) * sys.eigenfunction(level, x); }, grid,
      jobs);
  return p;
}

void gauss_legendre(int n, double lo, double hi, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw DomainError("Gauss-Legendre needs at least one node");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    nodes[i] = mid - half * x;
    nodes[n - 1 - i] = mid + half * x;
    weights[i] = weights[n - 1 - i] = 2.0 * half / ((1.0 - x * x) * dp * dp);
  }
}

DensityProfile density_p2_integral(const FieldConfig& base, DensityKind kind, int level, double m,
                                   const std::vector<double>& grid, const numerics::Window& p2_range,
                                   const QuadratureSpec& spec, int mass_sign) {
  std::vector<double> p2s, ws;
  switch (spec.rule) {
    case QuadratureSpec::Rule::Single:
      p2s = {p2_range.lo};
      ws = {1.0};
      break;
    case QuadratureSpec::Rule::Trapezoid: {
      const int n = std::max(2, spec.nodes);
      const double h = p2_range.width() / (n - 1);
      for (int i = 0; i < n; ++i) {
        p2s.push_back(p2_range.lo + i * h);
        ws.push_back((i == 0 || i == n - 1) ? 0.5 * h : h);
      }
      break;
    }
    case QuadratureSpec::Rule::GaussLegendre:
      gauss_legendre(spec.nodes, p2_range.lo, p2_range.hi, p2s, ws);
      break;
  }

  DensityProfile out;
  out.kind = kind;
  out.level = level;
  out.m = m;
  out.ell = kind == DensityKind::Current ? 1 : 0;
  out.grid = grid;
  out.values.assign(grid.size(), 0.0);
  out.coefficient = 1.0;
  out.prefactor = kind == DensityKind::Charge ? "pi*e" : "-2*i^1*e*pi";

  std::vector<double> edge(grid.size(), 0.0);
  for (std::size_t i = 0; i < p2s.size(); ++i) {
    FieldConfig cfg = base;
    cfg.p2 = p2s[i];
    const IntertwinedSystem sys(cfg);
    const DensityProfile mode = kind == DensityKind::Charge ? charge_density_mode(sys, level, m, grid, mass_sign)
                                                            : current_density_mode(sys, level, m, grid, 1);
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double v = ws[i] * mode.coefficient * mode.values[j];
      out.values[j] += v;
      if (spec.rule != QuadratureSpec::Rule::Single && (i == 0 || i + 1 == p2s.size())) {
        edge[j] = std::max(edge[j], std::fabs(mode.coefficient * mode.values[j]) * p2_range.width() / p2s.size());
      }
    }
  }
  if (spec.rule != QuadratureSpec::Rule::Single) {
    double total = 0.0, boundary = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
      total = std::max(total, std::fabs(out.values[j]));
      boundary = std::max(boundary, edge[j]);
    }
    if (total > 0.0 && boundary > 1e-4 * total) {
      throw TailError("density_p2_integral: p2 integrand has not decayed at the range ends (" +
                      std::to_string(boundary / total) + " of the total)");
    }
  }
  return out;
}

std::vector<LimitScanRow> limit_scan_alpha(const FieldConfig& base, const std::vector<double>& alphas,
                                           const LimitScanOptions& opt) {
  FieldConfig ucfg = base;
  ucfg.seed_kind = SeedKind::Uniform;
  ucfg.alpha = 0.0;
  ucfg.nu1 = opt.uniform_nu1;
  ucfg.epsilon1 = -opt.epsilon_fraction * ucfg.omega();
  const IntertwinedSystem uni(ucfg);
  const double omega = ucfg.omega();
  const numerics::Grid grid(opt.window, opt.n_points);
  const std::vector<double> xs = grid.samples();

  std::vector<double> rho_uni(xs.size());
  double rho_max = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = uni.eigenfunction(0, xs[i]);
    rho_uni[i] = f * f;
    rho_max = std::max(rho_max, rho_uni[i]);
  }

  std::vector<LimitScanRow> rows;
  for (double alpha : alphas) {
    if (!(alpha > 0)) throw ConfigError("limit scan needs positive alpha values");
    FieldConfig ecfg = base;
    ecfg.seed_kind = SeedKind::Exponential;
    ecfg.alpha = alpha;
    const SeedSystem probe(ecfg);
    ecfg.epsilon1 = -opt.epsilon_fraction * probe.eigenvalue_formula(1);
    const IntertwinedSystem ex(ecfg);

    LimitScanRow row;
    row.alpha = alpha;
    for (int n = 0; n <= std::min(opt.n_max, ex.seed().n_max()); ++n) {
      row.k_error = std::max(row.k_error, std::fabs(ex.seed().eigenvalue(n, 1) - omega * n));
    }
    row.w0_error_at_2 = std::fabs(ex.seed().w0(2.0) - uni.seed().w0(2.0));
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double x = xs[i];
      row.w0_error = std::max(row.w0_error, std::fabs(ex.seed().w0(x) - uni.seed().w0(x)));
      row.v0_error = std::max(row.v0_error, std::fabs(ex.seed().v0(1, x) - uni.seed().v0(1, x)));
      const double f = ex.eigenfunction(0, x);
      row.rho0_discrepancy = std::max(row.rho0_discrepancy, std::fabs(f * f - rho_uni[i]));
    }
    row.rho0_discrepancy /= rho_max;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace susyritus::ritus
