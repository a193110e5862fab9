#pragma once

// Invariant suite: every analytic identity of the seed, the intertwined system
// and the Dirac algebra, measured numerically against a pinned threshold.

#include <optional>
#include <string>
#include <vector>

#include "susyritus/intertwine.hpp"

namespace susyritus::verify {

struct InvariantResult {
  std::string name;
  double measured = 0.0;
  double threshold = 0.0;
  bool passed = false;
  std::string note;
};

struct VerifyOptions {
  /// Highest state index checked in each tower.
  int n_max = 5;
  int n_points = 1024;
  /// Residual grid; the system's default window when unset.
  std::optional<numerics::Window> window;
  int jobs = 1;
  /// Test hook: added to every transformed eigenvalue before the spectrum-rule check.
  double corrupt_spectrum = 0.0;
  /// Mass used by the density checks.
  double m = 1.0;
  unsigned seed = 20240517u;
};

struct VerifyReport {
  std::vector<InvariantResult> results;

  bool passed() const;
  const InvariantResult* find(const std::string& name) const;
  std::vector<std::string> failures() const;
};

/// Runs the full suite for one configuration.
VerifyReport run_all(const FieldConfig& cfg, const VerifyOptions& opt = {});

/// Individual groups, appended to `out`.
void check_seed(const SeedSystem& seed, const numerics::Window& window, const VerifyOptions& opt,
                std::vector<InvariantResult>& out);
void check_transform(const IntertwinedSystem& sys, const numerics::Window& window, const VerifyOptions& opt,
                     std::vector<InvariantResult>& out);
void check_densities(const IntertwinedSystem& sys, const numerics::Window& window, const VerifyOptions& opt,
                     std::vector<InvariantResult>& out);
void check_dirac(const VerifyOptions& opt, std::vector<InvariantResult>& out);

}  // namespace susyritus::verify
