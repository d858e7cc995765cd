#pragma once

#include <string>
#include <vector>

namespace rmtw {

struct SuiteResult {
  std::string name;
  bool passed = false;
  double worst = 0.0;       // largest observed deviation
  double tolerance = 0.0;
  std::string detail;
};

struct VerifyOptions {
  std::vector<std::string> suites;  // empty = all
  bool quick = false;               // trimmed grids for CI
  // Test hook: added to every computed deviation before comparison, so a
  // deliberate perturbation is visible as a named suite failure.
  double inject_perturbation = 0.0;
};

/// Known suites: contour-residue, q-invariance, n1-oracle, refinement,
/// mc-agreement.
std::vector<std::string> verify_suite_names();

/// Runs the requested invariant suites and returns per-suite results.
std::vector<SuiteResult> run_verification(const VerifyOptions& options);

}  // namespace rmtw
