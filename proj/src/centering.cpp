#include "rmtw/centering.hpp"

#include <cmath>

#include "rmtw/numerics.hpp"

namespace rmtw {

double centering_objective(double c, const SpectrumModel& spectrum, int n) {
  if (n < 1) throw invalid_input_error("centering_objective: n >= 1 required");
  const double pi1 = spectrum.pi1();
  if (!(c >= 0.0) || c >= pi1)
    throw invalid_input_error("centering_objective: c must lie in [0, pi_1)");
  const double target = static_cast<double>(n) / spectrum.p();
  return spectrum.integrate([c](double l) {
    const double r = l * c / (1.0 - l * c);
    return r * r;
  }) - target;
}

double solve_c(const SpectrumModel& spectrum, int n) {
  if (n < 1) throw invalid_input_error("solve_c: n >= 1 required");
  const double pi1 = spectrum.pi1();
  // Expand the upper end toward pi_1 until the objective turns positive;
  // it diverges there, so the guard shrinks geometrically from 1e-6.
  double guard = 1e-6;
  double hi = pi1 * (1.0 - guard);
  while (centering_objective(hi, spectrum, n) <= 0.0) {
    guard *= 0.1;
    if (guard < 1e-300)
      throw numerical_error("solve_c: could not bracket the root");
    hi = pi1 * (1.0 - guard);
  }
  return solve_root_bracketed(
      [&](double c) { return centering_objective(c, spectrum, n); }, 0.0, hi,
      1e-14);
}

CenteringParams centering_params(const SpectrumModel& spectrum, int n) {
  const double c = solve_c(spectrum, n);
  const double p_over_n = spectrum.p() / static_cast<double>(n);
  const double i1 =
      spectrum.integrate([c](double l) { return l * c / (1.0 - l * c); });
  const double i3 = spectrum.integrate([c](double l) {
    const double r = l * c / (1.0 - l * c);
    return r * r * r;
  });
  CenteringParams params;
  params.c = c;
  params.mu = (1.0 + p_over_n * i1) / c;
  params.sigma = std::cbrt(1.0 + p_over_n * i3) /
                 (std::pow(static_cast<double>(n), 2.0 / 3.0) * c);
  params.margin = c / spectrum.pi1();
  params.ratio = static_cast<double>(n) / spectrum.p();
  return params;
}

AssumptionReport check_assumptions(const SpectrumModel& spectrum, int n,
                                   const CenteringParams& params) {
  AssumptionReport rep;
  rep.ratio = static_cast<double>(n) / spectrum.p();
  rep.ell_max = spectrum.ell().front();
  rep.ell_min = spectrum.ell().back();
  rep.margin = params.margin;
  if (rep.margin > 0.98)
    rep.warnings.push_back(
        "margin c/pi_1 = " + std::to_string(rep.margin) +
        " is close to 1; edge constants may be unreliable");
  if (rep.ratio < 0.05 || rep.ratio > 20.0)
    rep.warnings.push_back("n/p = " + std::to_string(rep.ratio) +
                           " lies outside [0.05, 20]");
  return rep;
}

}  // namespace rmtw
