#include <doctest.h>

#include <cmath>
#include <thread>

#include "susyritus/errors.hpp"
#include "susyritus/intertwine.hpp"
#include "susyritus/numerics.hpp"
#include "susyritus/verify.hpp"

using namespace susyritus;

namespace {

FieldConfig fig1() {
  FieldConfig c;
  c.B0 = 0.5;
  c.p2 = 1.0;
  c.epsilon1 = -0.2;
  c.nu1 = 0.0;
  return c;
}

FieldConfig fig2() {
  FieldConfig c;
  c.seed_kind = SeedKind::Exponential;
  c.B0 = 1.0;
  c.alpha = 1.0;
  c.p2 = 5.0;
  c.nu1 = -1.5;
  c.epsilon1 = -5.5;
  return c;
}

// Five-point stencils, independent of the analytic W1.
double fd1(const numerics::RealFn& f, double x, double h) {
  return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
}

double fd2(const numerics::RealFn& f, double x, double h) {
  return (-f(x - 2 * h) + 16 * f(x - h) - 30 * f(x) + 16 * f(x + h) - f(x + 2 * h)) / (12 * h * h);
}

}  // namespace

TEST_CASE("shifted potential") {
  const IntertwinedSystem u(fig1());
  CHECK(u.shifted_potential(-2.0) == doctest::Approx(-0.3).epsilon(1e-14));
  const IntertwinedSystem e(fig2());
  CHECK(e.shifted_potential(60.0) == doctest::Approx(36.0 + 5.5).epsilon(1e-12));
  FieldConfig zero = fig1();
  zero.epsilon1 = 0.0;
  const IntertwinedSystem z(zero);
  for (double x : {-5.0, -2.0, 1.3}) CHECK(z.shifted_potential(x) == z.seed().v0(1, x));
}

TEST_CASE("kummer parameters and u1") {
  const IntertwinedSystem u(fig1());
  CHECK(u.kummer_a() == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(u.kummer_b() == 0.5);
  CHECK(u.u1(-2.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(u.transform_case() == TransformCase::LevelAddition);

  const IntertwinedSystem e(fig2());
  CHECK(e.kappa() == doctest::Approx(std::sqrt(41.5)).epsilon(1e-15));
  CHECK(e.kummer_a() == doctest::Approx(-6.0 + std::sqrt(41.5)).epsilon(1e-13));
  CHECK(e.kummer_b() == doctest::Approx(1.0 + 2 * std::sqrt(41.5)).epsilon(1e-14));
  CHECK(e.mix_coefficient() == doctest::Approx(12.0 * (1.0 - 1.0 / 1.5)).epsilon(1e-14));

  for (const FieldConfig& c : {fig1(), fig2()}) {
    const IntertwinedSystem s(c);
    const auto w = s.default_window();
    double worst = 0.0;
    for (double x : numerics::Grid(w, 200).samples()) {
      // u1 relative to its value at x, so the growth of u1 does not swamp the stencil.
      const double lx = s.log_u1(x);
      const numerics::RealFn r = [&](double y) { return std::exp(s.log_u1(y) - lx); };
      const double res = -fd2(r, x, 1e-3) + s.shifted_potential(x);
      worst = std::max(worst, std::fabs(res) / (1 + std::fabs(s.shifted_potential(x))));
      CHECK(s.u1(x) > 0);
    }
    CHECK(worst < 1e-7);
  }
}

TEST_CASE("superpotential W1") {
  const IntertwinedSystem u(fig1());
  CHECK(std::fabs(u.w1(-2.0)) < 1e-15);
  CHECK(u.w1(-2.0 + 0.7) == doctest::Approx(-u.w1(-2.0 - 0.7)).epsilon(1e-13));
  for (const FieldConfig& c : {fig1(), fig2()}) {
    const IntertwinedSystem s(c);
    for (double x : numerics::Grid(s.default_window(), 41).samples()) {
      const double riccati = s.w1(x) * s.w1(x) + s.w1_prime(x) - s.shifted_potential(x);
      CHECK(std::fabs(riccati) < 1e-8 * (1 + std::fabs(s.shifted_potential(x))));
      const numerics::RealFn lu = [&](double y) { return s.log_u1(y); };
      CHECK(s.w1(x) == doctest::Approx(fd1(lu, x, 1e-3)).epsilon(1e-9).scale(1.0));
    }
  }
  const IntertwinedSystem e(fig2());
  for (double x : {-1.0, 0.0, 2.0, 8.0, 25.0}) {
    const double rho = e.seed().rho(x);
    CHECK(e.w1(x) == doctest::Approx(rho / 2 - e.kappa() + e.calF(rho)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(u.calF(1.0), DomainError);
}

TEST_CASE("partner potential V1 against finite differences") {
  for (const FieldConfig& c : {fig1(), fig2()}) {
    const IntertwinedSystem s(c);
    const numerics::RealFn lu = [&](double y) { return s.log_u1(y); };
    for (double x : {-1.0, 0.0, 0.5}) {
      const double oracle = s.shifted_potential(x) - 2 * fd2(lu, x, 1e-3);
      CHECK(s.v1(x) == doctest::Approx(oracle).epsilon(1e-7).scale(1.0));
      CHECK(s.b1(x) == doctest::Approx(fd1([&](double y) { return s.w1(y); }, x, 1e-3) / c.e_charge).epsilon(1e-6).scale(1.0));
    }
  }
  const IntertwinedSystem u(fig1());
  CHECK(u.v1(0.0) == doctest::Approx(u.shifted_potential(0.0) - 2 * u.w1_prime(0.0)).epsilon(1e-14));
}

TEST_CASE("uniform V1 approaches the shifted potential in relative terms") {
  const IntertwinedSystem u(fig1());
  double prev = 1.0;
  for (double d : {4.0, 8.0, 12.0}) {
    const double x = -2.0 + d;
    const double rel = std::fabs(u.v1(x) - u.shifted_potential(x)) / std::fabs(u.shifted_potential(x));
    CHECK(rel < prev);
    prev = rel;
  }
  CHECK(prev < 0.05);
}

TEST_CASE("level deletion reduces to standard SUSY") {
  for (FieldConfig c : {fig1(), fig2()}) {
    c.epsilon1 = 0.0;
    c.nu1 = c.seed_kind == SeedKind::Uniform ? 0.0 : -1.5;
    const IntertwinedSystem s(c);
    CHECK(s.transform_case() == TransformCase::LevelDeletion);
    for (double x : numerics::Grid(s.default_window(), 31).samples()) {
      CHECK(std::fabs(s.v1(x) - s.seed().v0(-1, x)) < 1e-8 * (1 + std::fabs(s.seed().v0(-1, x))));
      CHECK(std::fabs(s.b1(x) + s.seed().b0_field(x)) < 1e-8);
    }
    CHECK_THROWS_AS(s.eigenvalue(1), UnsupportedTransformError);
  }
}

TEST_CASE("transformed spectrum") {
  const IntertwinedSystem u(fig1());
  CHECK(u.eigenvalue(0) == 0.0);
  CHECK(u.eigenvalue(1) == doctest::Approx(0.2).epsilon(1e-15));
  for (int n = 0; n <= 5; ++n) CHECK(std::fabs(u.eigenvalue(n + 1) - (n + 0.2)) < 1e-12);
  CHECK_THROWS_AS(u.eigenvalue(-1), IndexError);

  const IntertwinedSystem e(fig2());
  CHECK(e.eigenvalue(1) == doctest::Approx(5.5).epsilon(1e-15));
  for (int n = 0; n <= 4; ++n) CHECK(std::fabs(e.eigenvalue(n + 1) - (n * (12.0 - n) + 5.5)) < 1e-12);
  CHECK(e.n_max() == 6);
  CHECK_THROWS_AS(e.eigenvalue(7), IndexError);
  for (int n = 0; n < e.n_max(); ++n) CHECK(e.eigenvalue(n + 1) - e.seed().eigenvalue(n, 1) + e.epsilon1() == 0.0);
}

TEST_CASE("transformed eigenfunctions") {
  for (const FieldConfig& c : {fig1(), fig2()}) {
    const IntertwinedSystem s(c);
    const auto w = s.support(0);
    std::vector<double> f0;
    for (double x : numerics::Grid(w, 4000).samples()) f0.push_back(s.eigenfunction(0, x));
    CHECK(numerics::count_nodes(f0) == 0);
    CHECK(s.eigenfunction(0, 0.5 * (w.lo + w.hi)) > 0);
    for (double x : numerics::Grid(w, 60).samples()) {
      const double f = s.eigenfunction(0, x);
      CHECK(std::fabs(s.ladder_minus(f, s.eigenfunction_deriv(0, x), x)) < 1e-8);
      CHECK(f * s.u1(x) == doctest::Approx(s.eigenfunction(0, w.lo) * s.u1(w.lo)).epsilon(1e-10));
    }
    std::vector<numerics::RealFn> fs;
    for (int n = 0; n <= std::min(4, s.n_max()); ++n) fs.push_back([&s, n](double x) { return s.eigenfunction(n, x); });
    const auto g = numerics::gram_matrix(fs, numerics::hull(s.support(0), s.support(4)));
    CHECK((g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("uniform closed forms") {
  const IntertwinedSystem u(fig1());
  const SeedSystem& seed = u.seed();
  for (double x : numerics::Grid(u.default_window(), 101).samples()) {
    const double eta = seed.eta(x);
    CHECK(u.w1(x) == doctest::Approx(closed_forms::uniform_w1(1.0, eta)).epsilon(1e-8).scale(1.0));
    CHECK(u.b1(x) == doctest::Approx(closed_forms::uniform_b1(0.5, 1.0, eta)).epsilon(1e-8).scale(1.0));
  }
  for (int n = 0; n <= 3; ++n) {
    double ratio = 0.0;
    for (double x : {-4.0, -2.5, -1.0, 0.3}) {
      const double eta = seed.eta(x);
      const double prev = n == 0 ? 0.0 : seed.eigenfunction(n - 1, 1, x);
      const double cf = closed_forms::uniform_excited(n, eta, seed.eigenfunction(n, 1, x), prev);
      const double r = u.eigenfunction(n + 1, x) / cf;
      if (ratio == 0.0) ratio = r;
      CHECK(r == doctest::Approx(ratio).epsilon(1e-8));
    }
    CHECK(std::fabs(std::fabs(ratio) - 1.0) < 1e-8);
  }
}

TEST_CASE("exponential closed form at epsilon1 = -k1/2") {
  const IntertwinedSystem e(fig2());
  const SeedSystem& seed = e.seed();
  for (int n = 0; n <= 3; ++n) {
    double ratio = 0.0;
    for (double x : {-0.5, 0.4, 1.5, 3.0}) {
      const double rho = seed.rho(x);
      const double df_drho = seed.eigenfunction_deriv(n, 1, x) / (-rho);
      const double cf = closed_forms::exponential_excited(e, n, rho, seed.eigenfunction(n, 1, x), df_drho);
      const double r = e.eigenfunction(n + 1, x) / cf;
      if (ratio == 0.0) ratio = r;
      CHECK(r == doctest::Approx(ratio).epsilon(1e-8));
    }
    CHECK(std::fabs(std::fabs(ratio) - 1.0) < 1e-8);
  }
}

TEST_CASE("transform errors") {
  FieldConfig c = fig1();
  c.epsilon1 = 0.1;
  CHECK_THROWS_AS(IntertwinedSystem{c}, UnsupportedTransformError);
  c = fig1();
  c.nu1 = 1.0;
  CHECK_THROWS_AS(IntertwinedSystem{c}, Error);
  c = fig2();
  c.nu1 = -0.5;
  CHECK_THROWS_AS(IntertwinedSystem{c}, Error);
  c = fig2();
  c.nu1 = 0.0;
  CHECK_THROWS_AS(IntertwinedSystem{c}, Error);
  c = fig1();
  c.epsilon1 = std::nan("");
  CHECK_THROWS_AS(IntertwinedSystem{c}, Error);
  CHECK_THROWS_AS(IntertwinedSystem(fig1()).support(-1), IndexError);
}

TEST_CASE("verification invariants hold for both examples") {
  for (const FieldConfig& c : {fig1(), fig2()}) {
    verify::VerifyOptions opt;
    opt.n_max = 4;
    const IntertwinedSystem s(c);
    std::vector<verify::InvariantResult> report;
    verify::check_transform(s, s.default_window(), opt, report);
    CHECK(report.size() > 10);
    for (const auto& r : report) CHECK_MESSAGE(r.passed, r.name << " measured " << r.measured);
  }
}

TEST_CASE("copies and concurrent evaluation") {
  const IntertwinedSystem s(fig2());
  const IntertwinedSystem copy(s);
  std::vector<double> out(8);
  std::vector<std::thread> pool;
  for (int t = 0; t < 8; ++t) pool.emplace_back([&, t] { out[t] = s.eigenfunction(1 + t % 3, 0.7); });
  for (auto& th : pool) th.join();
  for (int t = 0; t < 8; ++t) CHECK(out[t] == copy.eigenfunction(1 + t % 3, 0.7));
}
