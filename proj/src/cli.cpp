#include "susyritus/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>

#include "susyritus/errors.hpp"

namespace susyritus::cli {

namespace {

using numerics::Window;

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

std::string exact(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string short_number(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

std::string describe(const FieldConfig& f) {
  std::ostringstream os;
  os << "seed=" << to_string(f.seed_kind) << " B0=" << exact(f.B0) << " e=" << exact(f.e_charge)
     << " alpha=" << exact(f.alpha) << " p2=" << exact(f.p2) << " m=" << exact(f.m) << " mass_sign=" << f.mass_sign
     << " epsilon1=" << exact(f.epsilon1) << " nu1=" << exact(f.nu1);
  return os.str();
}

// Comment block, header row and numeric columns; NaN cells are left empty.
class Table {
 public:
  void comment(const std::string& line) { comments_.push_back(line); }
  void column(const std::string& name, std::vector<double> values) {
    names_.push_back(name);
    columns_.push_back(std::move(values));
  }

  std::string render_comments() const {
    std::ostringstream os;
    for (const auto& c : comments_) os << "# " << c << '\n';
    return os.str();
  }

  std::string render(int precision) const {
    std::ostringstream os;
    os << render_comments();
    for (std::size_t j = 0; j < names_.size(); ++j) os << (j ? "," : "") << names_[j];
    os << '\n';
    std::size_t rows = 0;
    for (const auto& c : columns_) rows = std::max(rows, c.size());
    os << std::setprecision(precision);
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < columns_.size(); ++j) {
        if (j) os << ',';
        if (i < columns_[j].size() && !std::isnan(columns_[j][i])) os << columns_[j][i];
      }
      os << '\n';
    }
    return os.str();
  }

 private:
  std::vector<std::string> comments_;
  std::vector<std::string> names_;
  std::vector<std::vector<double>> columns_;
};

std::string suffixed(const std::string& base, const Variant& v) {
  return v.suffix.empty() ? base : base + "_" + v.suffix;
}

FieldConfig uniform_caption() {
  FieldConfig f;
  f.seed_kind = SeedKind::Uniform;
  f.B0 = 0.5;
  f.p2 = 1.0;
  f.m = 1.0;
  f.epsilon1 = -0.2;
  f.nu1 = 0.0;
  return f;
}

FieldConfig exponential_caption() {
  FieldConfig f;
  f.seed_kind = SeedKind::Exponential;
  f.B0 = 1.0;
  f.alpha = 1.0;
  f.p2 = 5.0;
  f.m = 1.0;
  f.epsilon1 = -5.5;
  f.nu1 = -1.5;
  return f;
}

std::vector<Variant> alpha_family(const std::vector<double>& alphas) {
  std::vector<Variant> out;
  for (double a : alphas) {
    FieldConfig f;
    f.seed_kind = SeedKind::Exponential;
    f.B0 = 0.5;
    f.alpha = a;
    f.p2 = 1.0;
    f.m = 1.0;
    f.nu1 = -1.5;
    f.epsilon1 = -SeedSystem(f).eigenvalue_formula(1) / 5.0;
    out.push_back({"alpha" + short_number(a), f});
  }
  return out;
}

std::vector<IntertwinedSystem> build_all(const std::vector<Variant>& variants) {
  std::vector<IntertwinedSystem> out;
  out.reserve(variants.size());
  for (const auto& v : variants) out.emplace_back(v.field);
  return out;
}

Window resolve_window(const RunConfig& cfg, const std::vector<IntertwinedSystem>& systems) {
  if (!cfg.preset.empty()) {
    const Preset p = preset(cfg.preset);
    if (p.window) return *p.window;
  }
  if (cfg.window) return *cfg.window;
  Window w = systems.front().default_window();
  for (const auto& s : systems) w = numerics::hull(w, s.default_window());
  return w;
}

void describe_run(Table& t, const std::string& command, const RunConfig& cfg, const std::vector<Variant>& variants) {
  t.comment("susyritus " + command);
  if (!cfg.preset.empty()) t.comment("preset " + cfg.preset + ": " + preset(cfg.preset).caption);
  for (const auto& v : variants) {
    t.comment((v.suffix.empty() ? std::string("config") : "config " + v.suffix) + ": " + describe(v.field));
    for (const auto& w : v.field.warnings()) t.comment("warning: " + w);
  }
}

void describe_grid(Table& t, const RunConfig& cfg, const Window& w) {
  t.comment("grid x_min=" + exact(w.lo) + " x_max=" + exact(w.hi) + " n_points=" + std::to_string(cfg.n_points));
  t.comment("n_max=" + std::to_string(cfg.n_max) + " precision=" + std::to_string(cfg.precision));
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"fig1", "fig2", "fig3", "fig4", "fig5", "fig7", "fig8"};
  return names;
}

Preset preset(const std::string& name) {
  Preset p;
  p.name = name;
  if (name == "fig1" || name == "fig3") {
    p.caption = "uniform seed, B0 = 1/2, p2 = 1, epsilon1 = -omega/5, nu1 = 0, omega = 1";
    p.variants = {{"", uniform_caption()}};
    p.window = Window{-8.0, 4.0};
  } else if (name == "fig2" || name == "fig4") {
    p.caption = "exponential seed, B0 = 1, nu1 = -3/2, p2 = 5 alpha, epsilon1 = -11 alpha^2/2, alpha = 1";
    p.variants = {{"", exponential_caption()}};
  } else if (name == "fig5" || name == "fig7") {
    p.caption = "exponential seed, alpha in {0.11, 0.09, 0.07, 0.05}, B0 = 1/2, nu1 = -3/2, p2 = 1, epsilon1 = -k1+/5";
    p.variants = alpha_family({0.11, 0.09, 0.07, 0.05});
    if (name == "fig5") p.window = Window{-30.0, 30.0};
  } else if (name == "fig8") {
    p.caption = "exponential seed, alpha in {2, 1, 0.2, 0.11}, B0 = 1/2, nu1 = -3/2, p2 = 1, epsilon1 = -k1+/5";
    p.variants = alpha_family({2.0, 1.0, 0.2, 0.11});
    p.levels = "ground";
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  return p;
}

std::vector<Variant> RunConfig::variants() const {
  if (!preset.empty()) return cli::preset(preset).variants;
  return {{"", field}};
}

void RunConfig::validate() const {
  for (const auto& v : variants()) v.field.validate();
  if (n_points < 64) throw ConfigError("--npoints must be at least 64");
  if (n_max < 0) throw ConfigError("--nmax must be non-negative");
  if (precision < 1 || precision > 17) throw ConfigError("--precision must lie in 1..17");
  if (jobs < 1) throw ConfigError("--jobs must be at least 1");
  if (window && !(std::isfinite(window->lo) && std::isfinite(window->hi) && window->hi > window->lo)) {
    throw ConfigError("--xmin must be below --xmax");
  }
}

std::vector<int> parse_levels(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) continue;
    if (item == "ground" || item == "g") {
      out.push_back(0);
      continue;
    }
    std::size_t used = 0;
    int n = -1;
    try {
      n = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || n < 0) throw ConfigError("bad level '" + item + "' (use 'ground' or n >= 0)");
    out.push_back(n + 1);
  }
  if (out.empty()) throw ConfigError("--levels is empty");
  return out;
}

std::string level_label(int level) { return level == 0 ? "ground" : "excited n=" + std::to_string(level - 1); }

std::string cmd_profile(const RunConfig& cfg) {
  const auto variants = cfg.variants();
  const auto systems = build_all(variants);
  const Window w = resolve_window(cfg, systems);
  const std::vector<double> xs = numerics::Grid(w, cfg.n_points).samples();

  Table t;
  describe_run(t, "profile", cfg, variants);
  describe_grid(t, cfg, w);
  t.column("x", xs);
  for (std::size_t i = 0; i < variants.size(); ++i) {
    const IntertwinedSystem& s = systems[i];
    t.column(suffixed("V0_tilde", variants[i]),
             numerics::evaluate_on_grid([&](double x) { return s.shifted_potential(x); }, xs, cfg.jobs));
    t.column(suffixed("V1", variants[i]), numerics::evaluate_on_grid([&](double x) { return s.v1(x); }, xs, cfg.jobs));
    t.column(suffixed("B0", variants[i]),
             numerics::evaluate_on_grid([&](double x) { return s.seed().b0_field(x); }, xs, cfg.jobs));
    t.column(suffixed("B1", variants[i]), numerics::evaluate_on_grid([&](double x) { return s.b1(x); }, xs, cfg.jobs));
  }
  return t.render(cfg.precision);
}

std::string cmd_spectrum(const RunConfig& cfg) {
  const auto variants = cfg.variants();
  const auto systems = build_all(variants);

  Table t;
  describe_run(t, "spectrum", cfg, variants);
  t.comment("n_max=" + std::to_string(cfg.n_max) + " precision=" + std::to_string(cfg.precision));
  std::vector<double> ns;
  for (int n = 0; n <= cfg.n_max; ++n) ns.push_back(n);
  t.column("n", ns);
  for (std::size_t i = 0; i < variants.size(); ++i) {
    const IntertwinedSystem& s = systems[i];
    std::vector<double> seed_k, new_k;
    for (int n = 0; n <= cfg.n_max; ++n) {
      seed_k.push_back(n <= s.seed().n_max() ? s.seed().eigenvalue(n, 1) : kMissing);
      const bool has = s.transform_case() == TransformCase::LevelAddition && n <= s.n_max();
      new_k.push_back(has ? s.eigenvalue(n) : kMissing);
    }
    t.column(suffixed("k_seed_plus", variants[i]), seed_k);
    t.column(suffixed("k_transformed", variants[i]), new_k);
  }
  return t.render(cfg.precision);
}

std::string cmd_density(const RunConfig& cfg, ritus::DensityKind kind, const std::vector<int>& levels) {
  const auto variants = cfg.variants();
  const auto systems = build_all(variants);
  const Window w = resolve_window(cfg, systems);
  const std::vector<double> xs = numerics::Grid(w, cfg.n_points).samples();
  const bool charge = kind == ritus::DensityKind::Charge;

  Table t;
  describe_run(t, charge ? "density charge" : "density current", cfg, variants);
  describe_grid(t, cfg, w);
  t.column("x", xs);
  bool prefactor_written = false;
  for (std::size_t i = 0; i < variants.size(); ++i) {
    const IntertwinedSystem& s = systems[i];
    const double m = variants[i].field.m;
    for (int level : levels) {
      const ritus::DensityProfile p =
          charge ? ritus::charge_density_mode(s, level, m, xs, variants[i].field.mass_sign, cfg.jobs)
                 : ritus::current_density_mode(s, level, m, xs, 1, cfg.jobs);
      const std::string name = suffixed((charge ? "rho" : "j") + std::to_string(level), variants[i]);
      if (!prefactor_written) {
        t.comment("prefactor: " + p.prefactor);
        prefactor_written = true;
      }
      t.comment("coefficient " + name + " (" + level_label(level) + ", k=" + exact(s.eigenvalue(level)) +
                "): " + exact(p.coefficient));
      t.column(name, p.values);
    }
  }
  return t.render(cfg.precision);
}

VerifyOutcome cmd_verify(const RunConfig& cfg, double corrupt_spectrum) {
  const auto variants = cfg.variants();
  std::optional<Window> w = cfg.window;
  if (!cfg.preset.empty() && preset(cfg.preset).window) w = preset(cfg.preset).window;

  Table t;
  describe_run(t, "verify", cfg, variants);
  std::vector<double> measured, threshold, status;
  std::vector<std::string> labels;
  bool ok = true;
  for (const auto& v : variants) {
    verify::VerifyOptions opt;
    opt.n_max = cfg.n_max;
    opt.n_points = cfg.n_points;
    opt.window = w;
    opt.jobs = cfg.jobs;
    opt.corrupt_spectrum = corrupt_spectrum;
    opt.m = v.field.m;
    const verify::VerifyReport r = verify::run_all(v.field, opt);
    ok = ok && r.passed();
    for (const auto& item : r.results) {
      labels.push_back(suffixed(item.name, v));
      measured.push_back(item.measured);
      threshold.push_back(item.threshold);
      status.push_back(item.passed ? 1.0 : 0.0);
    }
  }

  std::ostringstream rows;
  rows << "invariant,measured,threshold,status\n" << std::setprecision(cfg.precision);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    rows << labels[i] << ',' << measured[i] << ',' << threshold[i] << ',' << (status[i] > 0 ? "PASS" : "FAIL") << '\n';
  }
  return {t.render_comments() + rows.str(), ok};
}

std::string cmd_limit_scan(const RunConfig& cfg, const std::vector<double>& alphas) {
  if (alphas.empty()) throw ConfigError("--alphas is empty");
  for (double a : alphas) {
    if (!(a > 0.0)) throw ConfigError("--alphas entries must be positive");
  }
  FieldConfig base = cfg.variants().front().field;
  ritus::LimitScanOptions opt;
  opt.n_max = std::min(cfg.n_max, 3);
  if (cfg.window) opt.window = *cfg.window;
  opt.n_points = cfg.n_points;
  const auto rows = ritus::limit_scan_alpha(base, alphas, opt);

  Table t;
  t.comment("susyritus limit-scan");
  if (!cfg.preset.empty()) t.comment("preset " + cfg.preset + ": " + preset(cfg.preset).caption);
  t.comment("base: " + describe(base));
  t.comment("fixed omega = " + exact(base.omega()) + ", D = omega/(2 alpha), epsilon1 = -" +
            exact(opt.epsilon_fraction) + " k1+ on both sides, uniform reference nu1 = " + exact(opt.uniform_nu1));
  t.comment("grid x_min=" + exact(opt.window.lo) + " x_max=" + exact(opt.window.hi) +
            " n_points=" + std::to_string(opt.n_points) + " n_max=" + std::to_string(opt.n_max));
  std::vector<double> a, k, w0, w2, v0, rho;
  for (const auto& r : rows) {
    a.push_back(r.alpha);
    k.push_back(r.k_error);
    w0.push_back(r.w0_error);
    w2.push_back(r.w0_error_at_2);
    v0.push_back(r.v0_error);
    rho.push_back(r.rho0_discrepancy);
  }
  t.column("alpha", a);
  t.column("k_error", k);
  t.column("w0_error", w0);
  t.column("w0_error_at_2", w2);
  t.column("v0_error", v0);
  t.column("rho0_discrepancy", rho);
  return t.render(cfg.precision);
}

namespace {

struct Flags {
  std::string seed = "uniform";
  double B0 = 0.5, alpha = 0.0, p2 = 1.0, m = 1.0, e = 1.0, epsilon1 = -0.2, nu1 = 0.0;
  int mass_sign = 0;
  int nmax = 5, npoints = 1024, precision = 12, jobs = 1;
  double xmin = 0.0, xmax = 0.0;
  std::string preset, out;
  std::string which = "charge";
  std::string levels = "ground,0,1,2";
  std::vector<double> alphas{0.1, 0.05, 0.025};
  double corrupt = 0.0;
};

const std::vector<std::string> kPresetOwned{"--seed", "--B0",       "--alpha", "--p2", "--m",
                                            "--e",    "--mass-sign", "--epsilon1", "--nu1"};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--seed", f.seed, "Seed field: uniform or exponential");
  sub->add_option("--B0", f.B0, "Seed field strength");
  sub->add_option("--alpha", f.alpha, "Decay rate of the exponential seed");
  sub->add_option("--p2", f.p2, "Momentum along y");
  sub->add_option("--m", f.m, "Mass gap");
  sub->add_option("--mass-sign", f.mass_sign, "Sign of the mass when m = 0");
  sub->add_option("--e", f.e, "Charge");
  sub->add_option("--epsilon1", f.epsilon1, "Factorization energy (<= 0)");
  sub->add_option("--nu1", f.nu1, "Deformation parameter of u1 (limit-scan default -1.5)");
  sub->add_option("--nmax", f.nmax, "Highest level index");
  sub->add_option("--xmin", f.xmin, "Left end of the grid");
  sub->add_option("--xmax", f.xmax, "Right end of the grid");
  sub->add_option("--npoints", f.npoints, "Grid points");
  sub->add_option("--preset", f.preset, "Figure preset: fig1 fig2 fig3 fig4 fig5 fig7 fig8");
  sub->add_option("--out", f.out, "Output file (stdout when omitted)");
  sub->add_option("--precision", f.precision, "Significant digits in the CSV");
  sub->add_option("--jobs", f.jobs, "Worker threads for grid columns");
}

RunConfig to_run_config(const CLI::App* sub, const Flags& f, std::ostream& err) {
  RunConfig cfg;
  cfg.field.seed_kind = seed_kind_from_string(f.seed);
  cfg.field.B0 = f.B0;
  cfg.field.alpha = f.alpha;
  cfg.field.p2 = f.p2;
  cfg.field.m = f.m;
  cfg.field.mass_sign = f.mass_sign;
  cfg.field.e_charge = f.e;
  cfg.field.epsilon1 = f.epsilon1;
  cfg.field.nu1 = f.nu1;
  cfg.n_max = f.nmax;
  cfg.n_points = f.npoints;
  cfg.precision = f.precision;
  cfg.jobs = f.jobs;
  cfg.out = f.out;
  const bool has_lo = sub->count("--xmin") > 0, has_hi = sub->count("--xmax") > 0;
  if (has_lo != has_hi) throw ConfigError("--xmin and --xmax must be given together");
  if (has_lo) cfg.window = Window{f.xmin, f.xmax};
  if (!f.preset.empty()) {
    const Preset p = preset(f.preset);
    cfg.preset = f.preset;
    for (const auto& name : kPresetOwned) {
      if (sub->count(name) > 0) err << "warning: preset " << f.preset << " overrides " << name << '\n';
    }
    if (p.window && has_lo) err << "warning: preset " << f.preset << " overrides --xmin/--xmax\n";
  }
  cfg.validate();
  std::vector<std::string> seen;
  for (const auto& v : cfg.variants()) {
    for (const auto& w : v.field.warnings()) {
      if (std::find(seen.begin(), seen.end(), w) != seen.end()) continue;
      seen.push_back(w);
      err << "warning: " << w << '\n';
    }
  }
  return cfg;
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(cfg.out, std::ios::binary);
  if (!file) throw ConfigError("cannot open output file " + cfg.out);
  file << text;
  if (!file) throw Error("failed writing " + cfg.out);
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dirac fermions in SUSY-generated magnetic fields: profiles, spectra, densities, checks"};
  app.require_subcommand(1);
  Flags f;

  CLI::App* profile = app.add_subcommand("profile", "Potentials V0~, V1 and fields B0, B1 on a grid");
  CLI::App* spectrum = app.add_subcommand("spectrum", "Seed and transformed eigenvalues");
  CLI::App* density = app.add_subcommand("density", "Per-mode charge or current densities");
  CLI::App* verify_cmd = app.add_subcommand("verify", "Run every invariant check");
  CLI::App* scan = app.add_subcommand("limit-scan", "Small-alpha comparison with the uniform seed");
  for (CLI::App* sub : {profile, spectrum, density, verify_cmd, scan}) add_common(sub, f);
  density->add_option("--which", f.which, "charge or current")->check(CLI::IsMember({"charge", "current"}));
  density->add_option("--levels", f.levels, "Comma list of 'ground' and excited indices n");
  verify_cmd->add_option("--corrupt-spectrum", f.corrupt, "Test hook: shift the transformed spectrum")
      ->group("");
  scan->add_option("--alphas", f.alphas, "Comma list of alpha values")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfig;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    if (sub == scan) {
      f.seed = "exponential";
      if (sub->count("--nu1") == 0) f.nu1 = -1.5;
      if (sub->count("--alpha") == 0 && !f.alphas.empty()) f.alpha = f.alphas.front();
    }
    const RunConfig cfg = to_run_config(sub, f, err);
    if (sub == profile) {
      emit(cfg, cmd_profile(cfg), out);
    } else if (sub == spectrum) {
      emit(cfg, cmd_spectrum(cfg), out);
    } else if (sub == density) {
      const auto kind = f.which == "current" ? ritus::DensityKind::Current : ritus::DensityKind::Charge;
      std::string levels = f.levels;
      if (!cfg.preset.empty() && sub->count("--levels") == 0) levels = preset(cfg.preset).levels;
      emit(cfg, cmd_density(cfg, kind, parse_levels(levels)), out);
    } else if (sub == verify_cmd) {
      const VerifyOutcome r = cmd_verify(cfg, f.corrupt);
      emit(cfg, r.text, out);
      if (!r.passed) {
        err << "verification failed\n";
        return kVerifyFailed;
      }
    } else {
      emit(cfg, cmd_limit_scan(cfg, f.alphas), out);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const IndexError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const UnsupportedTransformError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const SingularTransformError& e) {
    err << "singular transform: " << e.what() << '\n';
    return kSingular;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}

}  // namespace susyritus::cli
