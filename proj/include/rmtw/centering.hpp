#pragma once

#include <string>
#include <vector>

#include "rmtw/spectrum.hpp"

namespace rmtw {

/// Centering and scaling constants (c, mu, sigma) mapping the largest
/// Wishart eigenvalue into Tracy-Widom coordinates.
struct CenteringParams {
  double c = 0.0;      // in (0, pi_1)
  double mu = 0.0;     // > 0
  double sigma = 0.0;  // > 0
  double margin = 0.0; // c / pi_1
  double ratio = 0.0;  // n / p
};

struct AssumptionReport {
  double ratio = 0.0;       // n / p
  double ell_max = 0.0;     // 1 / pi_1
  double ell_min = 0.0;     // 1 / pi_p
  double margin = 0.0;      // c / pi_1
  std::vector<std::string> warnings;
};

/// (1/p) sum_j (ell_j c / (1 - ell_j c))^2 - n/p, strictly increasing in c
/// on [0, pi_1), from -n/p at 0 to +inf at pi_1.
double centering_objective(double c, const SpectrumModel& spectrum, int n);

/// The unique root of centering_objective in [0, pi_1).
double solve_c(const SpectrumModel& spectrum, int n);

CenteringParams centering_params(const SpectrumModel& spectrum, int n);

/// Per-instance surrogates for the asymptotic standing assumptions; warns,
/// never fails.
AssumptionReport check_assumptions(const SpectrumModel& spectrum, int n,
                                   const CenteringParams& params);

}  // namespace rmtw
