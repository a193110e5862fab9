#include <doctest.h>

#include <cmath>
#include <thread>

#include "susyritus/errors.hpp"
#include "susyritus/numerics.hpp"
#include "susyritus/seeds.hpp"
#include "susyritus/specfun.hpp"

using namespace susyritus;

namespace {

FieldConfig uniform_cfg() {
  FieldConfig c;
  c.B0 = 0.5;
  c.p2 = 1.0;
  return c;
}

FieldConfig exponential_cfg(double p2 = 5.0) {
  FieldConfig c;
  c.seed_kind = SeedKind::Exponential;
  c.B0 = 1.0;
  c.alpha = 1.0;
  c.p2 = p2;
  c.nu1 = -1.5;
  c.epsilon1 = -5.5;
  return c;
}

double sup_fd_residual(const SeedSystem& s, int n, int sigma) {
  const numerics::Window w = s.support(sigma == 1 ? n : n + 1);
  const double k = s.eigenvalue(n, sigma);
  const numerics::RealFn f = [&](double x) { return s.eigenfunction(n, sigma, x); };
  double worst = 0.0, peak = 0.0;
  for (double x : numerics::Grid(w, 600).samples()) {
    const double r = -numerics::second_derivative(f, x).value + (s.v0(sigma, x) - k) * f(x);
    worst = std::max(worst, std::fabs(r));
    peak = std::max(peak, std::fabs(f(x)));
  }
  return worst / peak;
}

}  // namespace

TEST_CASE("seed kind names") {
  CHECK(to_string(SeedKind::Uniform) == "uniform");
  CHECK(seed_kind_from_string("exponential") == SeedKind::Exponential);
  CHECK_THROWS_AS(seed_kind_from_string("gaussian"), ConfigError);
}

TEST_CASE("field config validation") {
  FieldConfig c = uniform_cfg();
  CHECK_NOTHROW(c.validate());
  c.B0 = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = uniform_cfg();
  c.nu1 = 1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = exponential_cfg();
  CHECK_NOTHROW(c.validate());
  c.nu1 = -0.5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.nu1 = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = exponential_cfg();
  c.alpha = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  CHECK(exponential_cfg().warnings().size() == 1);
  FieldConfig strong = exponential_cfg();
  strong.B0 = 2.0;
  CHECK(strong.warnings().empty());
  FieldConfig massless = uniform_cfg();
  massless.m = 0.0;
  CHECK_THROWS_AS(massless.sign_of_mass(), ConfigError);
  massless.mass_sign = -1;
  CHECK(massless.sign_of_mass() == -1);
  CHECK_THROWS_AS(SeedSystem(FieldConfig{SeedKind::Uniform, -1.0}), ConfigError);
}

TEST_CASE("uniform superpotential, potentials and field") {
  const SeedSystem s(uniform_cfg());
  CHECK(s.omega() == 1.0);
  CHECK(s.w0(0.0) == doctest::Approx(1.0));
  CHECK(s.w0(-2.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(s.w0_prime(3.0) == doctest::Approx(0.5));
  CHECK(s.v0(1, -2.0) == doctest::Approx(-0.5));
  CHECK(s.v0(-1, -2.0) == doctest::Approx(0.5));
  CHECK(s.b0_field(7.0) == doctest::Approx(0.5));
  CHECK(s.eta(-2.0) == doctest::Approx(0.0).epsilon(1e-15));
  const auto w = s.default_window();
  CHECK(w.lo == doctest::Approx(-10.0));
  CHECK(w.hi == doctest::Approx(6.0));
}

TEST_CASE("exponential superpotential and field") {
  const SeedSystem s(exponential_cfg());
  CHECK(s.D() == doctest::Approx(1.0));
  CHECK(s.q2() == doctest::Approx(6.0));
  CHECK(s.w0(0.0) == doctest::Approx(5.0));
  CHECK(s.w0(40.0) == doctest::Approx(6.0));
  CHECK(s.b0_field(1.0) == doctest::Approx(std::exp(-1.0)));
  CHECK(s.rho(0.0) == doctest::Approx(2.0));
  CHECK(s.x_of_rho(s.rho(1.7)) == doctest::Approx(1.7));
  CHECK(s.v0(1, 60.0) == doctest::Approx(36.0));
}

TEST_CASE("seed spectra") {
  const SeedSystem u(uniform_cfg());
  for (int n = 0; n <= 6; ++n) {
    CHECK(u.eigenvalue(n, 1) == doctest::Approx(n));
    CHECK(u.eigenvalue(n, -1) == doctest::Approx(n + 1));
  }
  const SeedSystem e(exponential_cfg());
  CHECK(e.eigenvalue(0, 1) == 0.0);
  CHECK(e.eigenvalue(1, 1) == doctest::Approx(11.0));
  CHECK(e.eigenvalue(1, -1) == doctest::Approx(e.eigenvalue(2, 1)));
  CHECK(e.n_max() == 5);
  CHECK_THROWS_AS(e.eigenvalue(6, 1), IndexError);
  CHECK_THROWS_AS(e.eigenvalue(5, -1), IndexError);
  CHECK_THROWS_AS(e.eigenvalue(-1, 1), IndexError);
  CHECK_THROWS_AS(e.eigenvalue(0, 2), DomainError);
  CHECK(e.eigenvalue_formula(7) == doctest::Approx(7.0 * (12.0 - 7.0)));

  FieldConfig edge = exponential_cfg(2.0);
  CHECK(SeedSystem(edge).n_max() == 2);
}

TEST_CASE("uniform eigenfunctions") {
  const SeedSystem s(uniform_cfg());
  CHECK(s.eigenfunction(0, 1, -2.0) == doctest::Approx(std::pow(1.0 / (2 * M_PI), 0.25)).epsilon(1e-14));
  for (int n = 0; n <= 5; ++n) {
    const double norm = numerics::integrate(
        [&](double x) {
          const double f = s.eigenfunction(n, 1, x);
          return f * f;
        },
        s.support(n), 1e-12);
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-10));
  }
  for (int n = 0; n <= 4; ++n)
    for (double x : {-5.3, -2.0, 0.4, 1.9}) {
      CHECK(s.eigenfunction(n, -1, x) == doctest::Approx(s.eigenfunction(n, 1, x)).epsilon(1e-12));
      const double h = 1e-4;
      const double fd = (s.eigenfunction(n, 1, x + h) - s.eigenfunction(n, 1, x - h)) / (2 * h);
      CHECK(std::fabs(s.eigenfunction_deriv(n, 1, x) - fd) < 1e-7);
    }
}

TEST_CASE("exponential eigenfunctions against the Laguerre form") {
  const FieldConfig c = exponential_cfg();
  const SeedSystem s(c);
  for (int n = 0; n <= 5; ++n) {
    const double lambda = 2.0 * (s.q2() / c.alpha - n);
    const double log_norm = 0.5 * (std::log(c.alpha) + std::lgamma(n + 1.0) + std::log(lambda) - std::lgamma(n + lambda + 1));
    for (double x : {-1.5, 0.0, 0.9, 3.0, 6.0}) {
      const double rho = s.rho(x);
      const double want = std::exp(log_norm + 0.5 * lambda * std::log(rho) - 0.5 * rho) *
                          specfun::laguerre(n, lambda, rho);
      CHECK(std::fabs(std::fabs(s.eigenfunction(n, 1, x)) - std::fabs(want)) < 1e-10);
    }
  }
}

TEST_CASE("exponential lower tower equals the shifted-q2 upper tower") {
  const SeedSystem s(exponential_cfg());
  const SeedSystem shifted(exponential_cfg(5.0 - 1.0));
  for (int n = 0; n < s.n_max(); ++n)
    for (double x : {-1.0, 0.5, 2.0, 4.5}) {
      CHECK(std::fabs(std::fabs(s.eigenfunction(n, -1, x)) - std::fabs(shifted.eigenfunction(n, 1, x))) < 1e-10);
    }
}

TEST_CASE("schrodinger residuals, ladder and nodes") {
  for (const FieldConfig& c : {uniform_cfg(), exponential_cfg()}) {
    const SeedSystem s(c);
    for (int n = 0; n <= std::min(5, s.n_max()); ++n) {
      CHECK(sup_fd_residual(s, n, 1) < 1e-5);
      if (n < s.n_max()) CHECK(sup_fd_residual(s, n, -1) < 1e-5);
      const auto samples = numerics::Grid(s.support(n), 4000).samples();
      std::vector<double> f;
      for (double x : samples) f.push_back(s.eigenfunction(n, 1, x));
      CHECK(numerics::count_nodes(f) == n);
    }
    for (double x : numerics::Grid(s.default_window(), 50).samples()) {
      const double f = s.eigenfunction(0, 1, x);
      CHECK(std::fabs(s.eigenfunction_deriv(0, 1, x) + s.w0(x) * f) < 1e-12);
    }
  }
}

TEST_CASE("seed gram matrix") {
  for (const FieldConfig& c : {uniform_cfg(), exponential_cfg()}) {
    const SeedSystem s(c);
    std::vector<numerics::RealFn> fs;
    for (int n = 0; n <= std::min(5, s.n_max()); ++n) fs.push_back([&s, n](double x) { return s.eigenfunction(n, 1, x); });
    const auto g = numerics::gram_matrix(fs, numerics::hull(s.support(0), s.support(5)));
    CHECK((g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("concurrent evaluation is consistent") {
  const SeedSystem s(exponential_cfg());
  std::vector<double> results(8);
  std::vector<std::thread> pool;
  for (int t = 0; t < 8; ++t) pool.emplace_back([&, t] { results[t] = s.eigenfunction(t % 4, 1, 0.3); });
  for (auto& th : pool) th.join();
  for (int t = 0; t < 8; ++t) CHECK(results[t] == s.eigenfunction(t % 4, 1, 0.3));
}
