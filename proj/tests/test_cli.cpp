#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "susyritus/cli.hpp"
#include "susyritus/errors.hpp"

using namespace susyritus;

namespace {

struct Run {
  int code = 0;
  std::string out, err;
};

Run run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "susyritus");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  Run r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return static_cast<int>(i);
    return -1;
  }
  double num(std::size_t row, const std::string& name) const { return std::stod(rows.at(row).at(column(name))); }
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

Csv parse(const std::string& text) {
  Csv csv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (csv.header.empty())
      csv.header = split(line);
    else
      csv.rows.push_back(split(line));
  }
  return csv;
}

cli::RunConfig preset_config(const std::string& name) {
  cli::RunConfig cfg;
  cfg.preset = name;
  cfg.n_points = 128;
  return cfg;
}

}  // namespace

TEST_CASE("preset table") {
  const auto& names = cli::preset_names();
  CHECK(names == std::vector<std::string>{"fig1", "fig2", "fig3", "fig4", "fig5", "fig7", "fig8"});
  const cli::Preset p1 = cli::preset("fig1");
  REQUIRE(p1.variants.size() == 1);
  CHECK(p1.variants[0].field.B0 == 0.5);
  CHECK(p1.variants[0].field.epsilon1 == -0.2);
  const cli::Preset p2 = cli::preset("fig2");
  CHECK(p2.variants[0].field.q2() == 6.0);
  CHECK(p2.variants[0].field.epsilon1 == -5.5);
  CHECK(cli::preset("fig5").variants.size() == 4);
  CHECK(cli::preset("fig8").levels == "ground");
  CHECK_THROWS_AS(cli::preset("fig6"), ConfigError);
}

TEST_CASE("levels") {
  CHECK(cli::parse_levels("ground,0,1,2") == std::vector<int>{0, 1, 2, 3});
  CHECK(cli::parse_levels("3") == std::vector<int>{4});
  CHECK(cli::level_label(0) == "ground");
  CHECK(cli::level_label(2) == "excited n=1");
  CHECK_THROWS_AS(cli::parse_levels("first"), ConfigError);
  CHECK_THROWS_AS(cli::parse_levels("-1"), ConfigError);
}

TEST_CASE("spectrum rows") {
  const Csv u = parse(cli::cmd_spectrum(preset_config("fig1")));
  CHECK(u.header == std::vector<std::string>{"n", "k_seed_plus", "k_transformed"});
  REQUIRE(u.rows.size() >= 3);
  CHECK(u.rows[0] == std::vector<std::string>{"0", "0", "0"});
  CHECK(u.rows[1] == std::vector<std::string>{"1", "1", "0.2"});
  CHECK(u.rows[2] == std::vector<std::string>{"2", "2", "1.2"});
  for (std::size_t n = 0; n < u.rows.size(); ++n) CHECK(std::fabs(u.num(n, "k_transformed") - (n == 0 ? 0.0 : n - 0.8)) < 1e-12);

  const Csv e = parse(cli::cmd_spectrum(preset_config("fig2")));
  REQUIRE(e.rows.size() >= 2);
  CHECK(e.rows[1] == std::vector<std::string>{"1", "11", "5.5"});
  for (std::size_t n = 1; n <= 5; ++n) CHECK(std::fabs(e.num(n, "k_transformed") - ((n - 1) * (13.0 - n) + 5.5)) < 1e-12);
}

TEST_CASE("profile columns") {
  cli::RunConfig cfg;
  cfg.field.B0 = 0.5;
  cfg.field.p2 = 1.0;
  cfg.field.epsilon1 = 0.0;
  cfg.n_points = 101;
  const Csv c = parse(cli::cmd_profile(cfg));
  CHECK(c.header == std::vector<std::string>{"x", "V0_tilde", "V1", "B0", "B1"});
  REQUIRE(c.rows.size() == 101);
  for (std::size_t i = 0; i < c.rows.size(); ++i) CHECK(std::fabs(c.num(i, "B1") + c.num(i, "B0")) < 1e-8);

  const Csv multi = parse(cli::cmd_profile(preset_config("fig5")));
  CHECK(multi.column("V1_alpha0.11") > 0);
  CHECK(multi.column("B1_alpha0.05") > 0);
  CHECK(multi.num(0, "x") == -30.0);
}

TEST_CASE("density output") {
  const cli::RunConfig cfg = preset_config("fig3");
  const Csv rho = parse(cli::cmd_density(cfg, ritus::DensityKind::Charge, cli::parse_levels("ground,0,1")));
  CHECK(rho.header == std::vector<std::string>{"x", "rho0", "rho1", "rho2"});
  for (std::size_t i = 0; i < rho.rows.size(); ++i)
    for (int c = 1; c < 4; ++c) CHECK(std::stod(rho.rows[i][c]) >= 0.0);

  const std::string text = cli::cmd_density(preset_config("fig4"), ritus::DensityKind::Current, cli::parse_levels("ground,0"));
  CHECK(text.find("-2*i^1*e*pi*Integral dp2") != std::string::npos);
  const Csv j = parse(text);
  for (std::size_t i = 0; i < j.rows.size(); ++i) CHECK(j.num(i, "j0") == 0.0);
  CHECK_THROWS_AS(cli::cmd_density(preset_config("fig8"), ritus::DensityKind::Charge, {2}), IndexError);
}

TEST_CASE("every preset emits finite data deterministically") {
  for (const std::string& name : cli::preset_names()) {
    cli::RunConfig cfg = preset_config(name);
    const std::string levels = cli::preset(name).levels;
    const std::string a = cli::cmd_profile(cfg) + cli::cmd_density(cfg, ritus::DensityKind::Charge, cli::parse_levels(levels));
    cfg.jobs = 4;
    const std::string b = cli::cmd_profile(cfg) + cli::cmd_density(cfg, ritus::DensityKind::Charge, cli::parse_levels(levels));
    CHECK_MESSAGE(a == b, name);
    CHECK(a.find("nan") == std::string::npos);
    CHECK(a.find("inf") == std::string::npos);
  }
}

TEST_CASE("verify command and negative control") {
  cli::RunConfig cfg = preset_config("fig1");
  cfg.n_points = 1024;
  const cli::VerifyOutcome ok = cli::cmd_verify(cfg);
  CHECK(ok.passed);
  CHECK(ok.text.find("FAIL") == std::string::npos);
  const cli::VerifyOutcome bad = cli::cmd_verify(cfg, 1e-3);
  CHECK_FALSE(bad.passed);
  CHECK(bad.text.find("transform.spectrum_rule") != std::string::npos);
  CHECK(bad.text.find("FAIL") != std::string::npos);
}

TEST_CASE("limit scan command") {
  cli::RunConfig cfg;
  cfg.field.seed_kind = SeedKind::Exponential;
  cfg.field.B0 = 0.5;
  cfg.field.p2 = 1.0;
  cfg.field.nu1 = -1.5;
  cfg.field.alpha = 0.1;
  const Csv c = parse(cli::cmd_limit_scan(cfg, {0.1, 0.05, 0.025}));
  CHECK(c.header.front() == "alpha");
  REQUIRE(c.rows.size() == 3);
  CHECK(c.num(2, "w0_error_at_2") < c.num(1, "w0_error_at_2"));
  CHECK(c.num(1, "rho0_discrepancy") > 0.01);
}

TEST_CASE("front end and exit codes") {
  Run r = run_cli({"spectrum", "--preset", "fig1"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("\n1,1,0.2\n") != std::string::npos);

  r = run_cli({"spectrum", "--preset", "fig1", "--B0", "3"});
  CHECK(r.code == cli::kOk);
  CHECK(r.err.find("--B0") != std::string::npos);
  CHECK(r.out.find("\n1,1,0.2\n") != std::string::npos);

  CHECK(run_cli({"profile", "--npoints", "5"}).code == cli::kConfig);
  CHECK(run_cli({"profile", "--nu1", "1.5"}).code == cli::kConfig);
  CHECK(run_cli({"profile", "--epsilon1", "0.3"}).code == cli::kConfig);
  CHECK(run_cli({"spectrum", "--preset", "fig9"}).code == cli::kConfig);
  CHECK(run_cli({"density", "--which", "spin"}).code == cli::kConfig);
  CHECK(run_cli({"nonsense"}).code == cli::kConfig);
  CHECK(run_cli({"profile", "--seed", "exponential", "--B0", "1", "--alpha", "1", "--p2", "5", "--epsilon1", "-5.5",
                 "--nu1", "-0.5"})
            .code == cli::kConfig);

  r = run_cli({"verify", "--preset", "fig1", "--corrupt-spectrum", "1e-3"});
  CHECK(r.code == cli::kVerifyFailed);
  CHECK(run_cli({"verify", "--preset", "fig1"}).code == cli::kOk);

  const std::string path = "cli_test_output.csv";
  r = run_cli({"density", "--preset", "fig3", "--npoints", "64", "--levels", "ground", "--out", path});
  CHECK(r.code == cli::kOk);
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(parse(ss.str()).rows.size() == 64);
  std::remove(path.c_str());
}
