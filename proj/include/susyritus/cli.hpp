#pragma once

// Command layer: run configuration, the figure presets, CSV emitters for the
// profile, spectrum, density, verify and limit-scan commands, and the argv
// front end with its exit codes.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "susyritus/ritus.hpp"
#include "susyritus/verify.hpp"

namespace susyritus::cli {

enum ExitCode { kOk = 0, kFailure = 1, kConfig = 2, kSingular = 3, kVerifyFailed = 4 };

/// One parameter set; `suffix` tags its columns when a preset carries several.
struct Variant {
  std::string suffix;
  FieldConfig field;
};

struct Preset {
  std::string name;
  std::string caption;
  std::vector<Variant> variants;
  std::optional<numerics::Window> window;
  /// Density levels plotted in the figure.
  std::string levels = "ground,0,1,2";
};

const std::vector<std::string>& preset_names();
/// ConfigError for an unknown name.
Preset preset(const std::string& name);

struct RunConfig {
  FieldConfig field;
  std::optional<numerics::Window> window;
  int n_points = 1024;
  int n_max = 5;
  std::string out;
  int precision = 12;
  int jobs = 1;
  std::string preset;

  /// Parameter sets to run: the preset's variants, or `field` alone.
  std::vector<Variant> variants() const;
  /// ConfigError on any invalid field or grid setting.
  void validate() const;
};

/// Transformed levels from "ground" and the excited indices n (level n + 1).
std::vector<int> parse_levels(const std::string& text);
std::string level_label(int level);

std::string cmd_profile(const RunConfig& cfg);
std::string cmd_spectrum(const RunConfig& cfg);
std::string cmd_density(const RunConfig& cfg, ritus::DensityKind kind, const std::vector<int>& levels);

struct VerifyOutcome {
  std::string text;
  bool passed = false;
};
VerifyOutcome cmd_verify(const RunConfig& cfg, double corrupt_spectrum = 0.0);

std::string cmd_limit_scan(const RunConfig& cfg, const std::vector<double>& alphas);

/// Full front end; returns the process exit code.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace susyritus::cli
