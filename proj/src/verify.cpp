#include "susyritus/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "susyritus/errors.hpp"
#include "susyritus/ritus.hpp"

namespace susyritus::verify {

namespace {

using numerics::RealFn;
using numerics::Window;

constexpr double kRiccatiTol = 1e-8;
constexpr double kOdeTol = 1e-8;
constexpr double kSchrodingerTol = 1e-5;
constexpr double kAnnihilationTol = 1e-8;
constexpr double kLadderTol = 1e-6;
constexpr double kIntertwiningTol = 1e-5;
constexpr double kGramTol = 1e-6;
constexpr double kSpectrumTol = 1e-12;
constexpr double kClosedFormTol = 1e-8;
constexpr double kFieldFdTol = 1e-6;
constexpr double kDensityNormTol = 1e-6;
constexpr double kDiracTol = 1e-12;
constexpr int kLadderStates = 3;

void add(std::vector<InvariantResult>& out, const std::string& name, double measured, double threshold,
         const std::string& note = {}) {
  InvariantResult r;
  r.name = name;
  r.measured = measured;
  r.threshold = threshold;
  r.passed = std::isfinite(measured) && measured <= threshold;
  r.note = note;
  out.push_back(r);
}

void add_count(std::vector<InvariantResult>& out, const std::string& name, int measured, int expected) {
  InvariantResult r;
  r.name = name;
  r.measured = measured;
  r.threshold = expected;
  r.passed = measured == expected;
  r.note = "exact count";
  out.push_back(r);
}

double sup_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

// sup|residual| / sup|scale| over the samples.
double sup_ratio(const std::vector<double>& xs, const RealFn& residual, const RealFn& scale, int jobs) {
  const double num = sup_abs(numerics::evaluate_on_grid(residual, xs, jobs));
  const double den = sup_abs(numerics::evaluate_on_grid(scale, xs, jobs));
  return den > 0.0 ? num / den : num;
}

double d2(const RealFn& f, double x) { return numerics::second_derivative(f, x).value; }
double d1(const RealFn& f, double x) { return numerics::first_derivative(f, x).value; }

double gram_deviation(const std::vector<RealFn>& fs, const Window& w) {
  const Eigen::MatrixXd g = numerics::gram_matrix(fs, w);
  return (g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

bool is_uniform_fig1_form(const IntertwinedSystem& sys) {
  const auto& c = sys.config();
  return c.seed_kind == SeedKind::Uniform && c.nu1 == 0.0 &&
         std::fabs(c.epsilon1 + c.omega() / 5.0) <= 1e-14 * c.omega();
}

bool is_exponential_half_form(const IntertwinedSystem& sys) {
  const auto& c = sys.config();
  if (c.seed_kind != SeedKind::Exponential || sys.seed().n_max() < 1) return false;
  const double k1 = sys.seed().eigenvalue(1, 1);
  return std::fabs(c.epsilon1 + 0.5 * k1) <= 1e-14 * k1;
}

}  // namespace

bool VerifyReport::passed() const {
  return std::all_of(results.begin(), results.end(), [](const InvariantResult& r) { return r.passed; });
}

const InvariantResult* VerifyReport::find(const std::string& name) const {
  for (const auto& r : results)
    if (r.name == name) return &r;
  return nullptr;
}

std::vector<std::string> VerifyReport::failures() const {
  std::vector<std::string> names;
  for (const auto& r : results)
    if (!r.passed) names.push_back(r.name);
  return names;
}

void check_seed(const SeedSystem& seed, const Window& window, const VerifyOptions& opt,
                std::vector<InvariantResult>& out) {
  const int top = std::min(opt.n_max, seed.n_max());
  const std::vector<double> xs = numerics::Grid(window, opt.n_points).samples();

  for (int sigma : {1, -1}) {
    const int last = sigma == 1 ? top : std::min(top, seed.n_max() - 1);
    double worst = 0.0;
    for (int n = 0; n <= last; ++n) {
      const double k = seed.eigenvalue(n, sigma);
      const RealFn f = [&seed, n, sigma](double x) { return seed.eigenfunction(n, sigma, x); };
      const Window w = numerics::hull(window, seed.support(sigma == 1 ? n : n + 1));
      const std::vector<double> ys = numerics::Grid(w, opt.n_points).samples();
      worst = std::max(worst, sup_ratio(
                                  ys, [&](double x) { return -d2(f, x) + (seed.v0(sigma, x) - k) * f(x); }, f,
                                  opt.jobs));
    }
    add(out, sigma == 1 ? "seed.schrodinger.plus" : "seed.schrodinger.minus", worst, kSchrodingerTol,
        "sup|-F'' + (V - k)F| / sup|F|, n <= " + std::to_string(last));
  }

  {
    const RealFn f0 = [&seed](double x) { return seed.eigenfunction(0, 1, x); };
    add(out, "seed.ground_annihilation",
        sup_ratio(xs, [&](double x) { return d1(f0, x) + seed.w0(x) * f0(x); }, f0, opt.jobs), kAnnihilationTol,
        "sup|L0^- F_0| / sup|F_0|");
  }

  {
    double worst = 0.0;
    for (int n = 0; n < std::min(kLadderStates, seed.n_max()); ++n) {
      const double k = seed.eigenvalue(n + 1, 1);
      const RealFn up = [&seed, n](double x) { return seed.eigenfunction(n + 1, 1, x); };
      const RealFn down = [&seed, n](double x) { return seed.eigenfunction(n, -1, x); };
      worst = std::max(worst, sup_ratio(
                                  xs,
                                  [&](double x) { return d1(up, x) + seed.w0(x) * up(x) - std::sqrt(k) * down(x); },
                                  down, opt.jobs));
    }
    add(out, "seed.ladder", worst, kLadderTol, "sup|L0^- F_{n+1} - sqrt(k) F_{n,-1}| / sup|F_{n,-1}|");
  }

  {
    int bad = 0;
    for (int n = 0; n <= top; ++n) {
      const Window w = numerics::hull(window, seed.support(n));
      std::vector<double> s = numerics::evaluate_on_grid([&seed, n](double x) { return seed.eigenfunction(n, 1, x); },
                                                         numerics::Grid(w, 4 * opt.n_points).samples(), opt.jobs);
      if (numerics::count_nodes(s) != n) ++bad;
    }
    add_count(out, "seed.node_theorem", bad, 0);
  }

  {
    std::vector<RealFn> fs;
    for (int n = 0; n <= top; ++n) fs.push_back([&seed, n](double x) { return seed.eigenfunction(n, 1, x); });
    add(out, "seed.gram", gram_deviation(fs, numerics::hull(seed.support(0), seed.support(top))), kGramTol,
        "max |G - I|, n <= " + std::to_string(top));
  }
}

void check_transform(const IntertwinedSystem& sys, const Window& window, const VerifyOptions& opt,
                     std::vector<InvariantResult>& out) {
  const SeedSystem& seed = sys.seed();
  const double e = sys.config().e_charge;
  const std::vector<double> xs = numerics::Grid(window, opt.n_points).samples();

  {
    std::vector<double> v = numerics::evaluate_on_grid([&](double x) { return sys.shifted_potential(x); }, xs,
                                                       opt.jobs);
    const double scale = 1.0 + sup_abs(v);
    std::vector<double> r = numerics::evaluate_on_grid(
        [&](double x) {
          const double w = sys.w1(x);
          return w * w + sys.w1_prime(x) - sys.shifted_potential(x);
        },
        xs, opt.jobs);
    add(out, "transform.riccati", sup_abs(r) / scale, kRiccatiTol, "sup|W1^2 + W1' - V0~| / (1 + sup|V0~|)");
  }

  {
    // u1 normalised to 1 at the evaluation point keeps the stencil away from overflow.
    std::vector<double> r = numerics::evaluate_on_grid(
        [&](double x) {
          const double l0 = sys.log_u1(x);
          const RealFn g = [&sys, l0](double y) { return std::exp(sys.log_u1(y) - l0); };
          return (-d2(g, x) + sys.shifted_potential(x)) / (1.0 + std::fabs(sys.shifted_potential(x)));
        },
        xs, opt.jobs);
    add(out, "transform.u1_ode", sup_abs(r), kOdeTol, "sup|(-u1'' + V0~ u1) / u1| / (1 + |V0~|)");
  }

  {
    const RealFn w1 = [&sys](double x) { return sys.w1(x); };
    add(out, "transform.field_fd",
        sup_ratio(xs, [&](double x) { return sys.b1(x) - d1(w1, x) / e; }, [&](double x) { return sys.b1(x); },
                  opt.jobs),
        kFieldFdTol, "sup|B1 - W1'_fd / e| / sup|B1|");
  }

  if (sys.transform_case() == TransformCase::LevelDeletion) {
    add(out, "transform.deletion_potential",
        sup_ratio(xs, [&](double x) { return sys.v1(x) - seed.v0(-1, x); }, [&](double x) { return seed.v0(-1, x); },
                  opt.jobs),
        kClosedFormTol, "sup|V1 - V0^-| / sup|V0^-|");
    add(out, "transform.deletion_field",
        sup_ratio(xs, [&](double x) { return sys.b1(x) + seed.b0_field(x); }, [&](double x) { return seed.b0_field(x); },
                  opt.jobs),
        kClosedFormTol, "sup|B1 + B0| / sup|B0|");
    return;
  }

  const int top = std::min(opt.n_max, sys.n_max());

  {
    double worst = std::fabs(sys.eigenvalue(0) + opt.corrupt_spectrum);
    for (int n = 0; n + 1 <= top; ++n) {
      const double lhs = sys.eigenvalue(n + 1) + opt.corrupt_spectrum;
      worst = std::max(worst, std::fabs(lhs - seed.eigenvalue(n, 1) + sys.epsilon1()));
    }
    add(out, "transform.spectrum_rule", worst, kSpectrumTol, "|k0^(1)| and |k_{n+1}^(1) - k_n^+ + eps1|");
  }

  {
    double worst = 0.0;
    for (int n = 0; n <= top; ++n) {
      const double k = sys.eigenvalue(n);
      const RealFn f = [&sys, n](double x) { return sys.eigenfunction(n, x); };
      const std::vector<double> ys = numerics::Grid(numerics::hull(window, sys.support(n)), opt.n_points).samples();
      worst = std::max(worst,
                       sup_ratio(ys, [&](double x) { return -d2(f, x) + (sys.v1(x) - k) * f(x); }, f, opt.jobs));
    }
    add(out, "transform.schrodinger", worst, kSchrodingerTol,
        "sup|-F'' + (V1 - k)F| / sup|F|, n <= " + std::to_string(top));
  }

  {
    const RealFn f0 = [&sys](double x) { return sys.eigenfunction(0, x); };
    add(out, "transform.ground_annihilation",
        sup_ratio(xs, [&](double x) { return d1(f0, x) + sys.w1(x) * f0(x); }, f0, opt.jobs), kAnnihilationTol,
        "sup|L1^- F0^(1)| / sup|F0^(1)|");
    std::vector<double> s = numerics::evaluate_on_grid(f0, numerics::Grid(window, 4 * opt.n_points).samples(),
                                                       opt.jobs);
    add_count(out, "transform.ground_nodes", numerics::count_nodes(s), 0);
  }

  {
    double inter = 0.0, fact_down = 0.0, fact_up = 0.0;
    const int states = std::min(kLadderStates, seed.n_max() + 1);
    for (int n = 0; n < states; ++n) {
      const double kt = seed.eigenvalue(n, 1) - sys.epsilon1();
      const RealFn psi = [&seed, n](double x) { return seed.eigenfunction(n, 1, x); };
      const RealFn phi = [&sys, &seed, n](double x) {
        return sys.ladder_plus(seed.eigenfunction(n, 1, x), seed.eigenfunction_deriv(n, 1, x), x);
      };
      const std::vector<double> ys = numerics::Grid(numerics::hull(window, seed.support(n)), opt.n_points).samples();
      inter = std::max(inter,
                       sup_ratio(ys, [&](double x) { return -d2(phi, x) + (sys.v1(x) - kt) * phi(x); }, phi, opt.jobs));
      fact_down = std::max(fact_down, sup_ratio(
                                          ys, [&](double x) { return sys.ladder_minus(phi(x), d1(phi, x), x) - kt * psi(x); },
                                          [&](double x) { return kt * psi(x); }, opt.jobs));

      const int m = n + 1;
      if (m <= sys.n_max()) {
        const double km = sys.eigenvalue(m);
        const RealFn f = [&sys, m](double x) { return sys.eigenfunction(m, x); };
        const RealFn g = [&sys, m](double x) {
          return sys.ladder_minus(sys.eigenfunction(m, x), sys.eigenfunction_deriv(m, x), x);
        };
        fact_up = std::max(fact_up, sup_ratio(
                                        ys, [&](double x) { return sys.ladder_plus(g(x), d1(g, x), x) - km * f(x); },
                                        [&](double x) { return km * f(x); }, opt.jobs));
      }
    }
    add(out, "transform.intertwining", inter, kIntertwiningTol, "sup|(H1 - k~) L1^+ psi| / sup|L1^+ psi|");
    add(out, "transform.factorization_down", fact_down, kIntertwiningTol, "sup|L1^- L1^+ psi - H0~ psi|, relative");
    add(out, "transform.factorization_up", fact_up, kIntertwiningTol, "sup|L1^+ L1^- phi - H1 phi|, relative");
  }

  {
    std::vector<RealFn> fs;
    for (int n = 0; n <= top; ++n) fs.push_back([&sys, n](double x) { return sys.eigenfunction(n, x); });
    add(out, "transform.gram", gram_deviation(fs, numerics::hull(sys.support(0), sys.support(top))), kGramTol,
        "max |G - I|, n <= " + std::to_string(top));
  }

  {
    const Window w = numerics::hull(window, numerics::hull(sys.support(0), sys.support(1)));
    const RealFn v1 = [&sys](double x) { return sys.v1(x); };
    const double level = 0.5 * sys.eigenvalue(1);
    add_count(out, "transform.extra_level", numerics::count_eigenvalues_below(v1, w, 6000, level), 1);
    const double k0 = numerics::fd_eigenvalue(v1, w, 6000, 0, 1e-10);
    add(out, "transform.extra_level_energy", std::fabs(k0) / sys.eigenvalue(1), 1e-3,
        "|lowest FD eigenvalue of H1| / k1^(1)");
  }

  if (is_uniform_fig1_form(sys)) {
    const double omega = seed.omega();
    const double B0 = sys.config().B0;
    add(out, "closed_form.uniform_w1",
        sup_ratio(xs, [&](double x) { return sys.w1(x) - closed_forms::uniform_w1(omega, seed.eta(x)); },
                  [&](double x) { return sys.w1(x); }, opt.jobs),
        kClosedFormTol, "W1 against the a = 1/10 closed form");
    add(out, "closed_form.uniform_b1",
        sup_ratio(xs, [&](double x) { return sys.b1(x) - closed_forms::uniform_b1(B0, omega, seed.eta(x)); },
                  [&](double x) { return sys.b1(x); }, opt.jobs),
        kClosedFormTol, "B1 against the a = 1/10 closed form");
    double worst = 0.0;
    for (int n = 0; n < std::min(kLadderStates, top); ++n) {
      worst = std::max(worst, sup_ratio(
                                  xs,
                                  [&](double x) {
                                    const double prev = n > 0 ? seed.eigenfunction(n - 1, 1, x) : 0.0;
                                    return sys.eigenfunction(n + 1, x) -
                                           closed_forms::uniform_excited(n, seed.eta(x), seed.eigenfunction(n, 1, x),
                                                                         prev);
                                  },
                                  [&](double x) { return sys.eigenfunction(n + 1, x); }, opt.jobs));
    }
    add(out, "closed_form.uniform_excited", worst, kClosedFormTol, "F^(1)_{n+1} against the closed form");
  }

  if (is_exponential_half_form(sys)) {
    const double alpha = sys.config().alpha;
    double worst = 0.0;
    for (int n = 0; n < std::min(kLadderStates, top); ++n) {
      worst = std::max(worst, sup_ratio(
                                  xs,
                                  [&](double x) {
                                    const double rho = seed.rho(x);
                                    const double df = -seed.eigenfunction_deriv(n, 1, x) / (alpha * rho);
                                    return sys.eigenfunction(n + 1, x) -
                                           closed_forms::exponential_excited(sys, n, rho, seed.eigenfunction(n, 1, x), df);
                                  },
                                  [&](double x) { return sys.eigenfunction(n + 1, x); }, opt.jobs));
    }
    add(out, "closed_form.exponential_excited", worst, kClosedFormTol, "F^(1)_{n+1} against the closed form");
  }
}

void check_densities(const IntertwinedSystem& sys, const Window& window, const VerifyOptions& opt,
                     std::vector<InvariantResult>& out) {
  if (sys.transform_case() == TransformCase::LevelDeletion) return;
  const int top = std::min(opt.n_max, sys.n_max());
  const std::vector<double> xs = numerics::Grid(window, opt.n_points).samples();

  double most_negative = 0.0;
  for (int level = 0; level <= top; ++level) {
    const auto p = ritus::charge_density_mode(sys, level, opt.m, xs, 0, opt.jobs);
    for (double v : p.values) most_negative = std::max(most_negative, -v);
  }
  add(out, "density.charge_nonnegative", most_negative, 0.0, "max(-rho_n) over the grid");

  const auto j0 = ritus::current_density_mode(sys, 0, opt.m, xs, 1, opt.jobs);
  add(out, "density.ground_current_zero", sup_abs(j0.values), 0.0, "sup|j_0|");

  double worst = 0.0;
  for (int level = 1; level <= top; ++level) {
    const Window w = numerics::hull(sys.support(level), sys.seed().support(level - 1));
    const double total = numerics::integrate(
        [&](double x) {
          const double f1 = sys.eigenfunction(level, x);
          const double f0 = sys.seed().eigenfunction(level - 1, 1, x);
          return f1 * f1 + f0 * f0;
        },
        w, 1e-12);
    worst = std::max(worst, std::fabs(total - 2.0));
  }
  add(out, "density.excited_norm", worst, kDensityNormTol, "|Integral rho_{n+1} dx - 2|");
}

void check_dirac(const VerifyOptions& opt, std::vector<InvariantResult>& out) {
  add(out, "dirac.trace_identities", ritus::dirac_trace_identities().max_error(), kDiracTol,
      "trace, Clifford and projector identities");

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> p0d(-5.0, 5.0), kd(0.0, 10.0), md(-2.0, 2.0);
  double worst = 0.0;
  int done = 0;
  while (done < 100) {
    const double p0 = p0d(rng), k = kd(rng), m = md(rng);
    const double den = p0 * p0 - k - m * m;
    if (std::fabs(den) < 0.1) continue;
    const ritus::Mat2 s = ritus::propagator_momentum(p0, k, m);
    const ritus::Mat2 lhs = (ritus::slash_pbar(p0, k) - m * ritus::Mat2::Identity()) * s;
    worst = std::max(worst, (lhs - ritus::Mat2::Identity()).cwiseAbs().maxCoeff());
    ++done;
  }
  add(out, "dirac.propagator_inverse", worst, kDiracTol, "max |(gamma.pbar - m) S_F - 1| over 100 draws");
}

VerifyReport run_all(const FieldConfig& cfg, const VerifyOptions& opt) {
  VerifyReport report;
  const IntertwinedSystem sys(cfg);
  const Window window = opt.window ? *opt.window : sys.default_window();
  check_seed(sys.seed(), window, opt, report.results);
  check_transform(sys, window, opt, report.results);
  check_densities(sys, window, opt, report.results);
  check_dirac(opt, report.results);
  return report;
}

}  // namespace susyritus::verify
