#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rmtw/centering.hpp"
#include "rmtw/numerics.hpp"
#include "rmtw/spectrum.hpp"

namespace rmtw {

/// Inputs to the double-contour Wishart kernel K_{n,p}: the inverse
/// population eigenvalues pi_1 <= ... <= pi_p, the sample count n, and the
/// separating abscissa q in (0, pi_1).
struct KernelConfig {
  std::vector<double> pi;  // ascending
  int n = 0;
  double q = 0.0;

  static KernelConfig from_spectrum(const SpectrumModel& spectrum, int n);
  static KernelConfig from_spectrum(const SpectrumModel& spectrum, int n,
                                    double q);
  void validate() const;
  double pi1() const { return pi.front(); }
  double pip() const { return pi.back(); }
  bool all_pi_distinct(double rel_gap = 1e-8) const;
};

/// Two circles: Gamma (center gamma_center, radius gamma_radius) enclosing
/// every pi_k inside Re z > q, and Sigma (|w| = sigma_radius) enclosing 0
/// inside Re w < q.
struct ContourSpec {
  double gamma_center = 0.0;
  double gamma_radius = 0.0;
  double sigma_radius = 0.0;
  int nodes = 128;  // per contour, even

  void validate(const KernelConfig& cfg) const;
};

/// Circles with all constraint margins at comparable scale:
/// Gamma centered on the pi range with slack min(pi_1 - q, pi_1)/2,
/// Sigma radius q/2.
ContourSpec default_contour(const KernelConfig& cfg, int nodes = 128);

/// Circles hugging the separating abscissa q from both sides.  With q at
/// the edge saddle point (q = c_{n,p}) the integrand magnitude stays
/// O(1) along both contours, which keeps the trapezoid sums
/// cancellation-free at n, p in the hundreds.  The integrand phase winds
/// proportionally to n, so nodes = 0 (the default) picks
/// max(256, 4n) rounded up to even.
ContourSpec edge_contour(const KernelConfig& cfg, int nodes = 0);

/// Nystrom discretization of operators on (s, infinity): truncate to
/// (s, s + L) and use an M-point Gauss-Legendre rule.
struct NystromConfig {
  double truncation = 12.0;  // L
  int order = 48;            // M
};

/// L = max(10 sigma n^(2/3), 5 mu): covers the support plus an edge tail.
NystromConfig default_nystrom(const CenteringParams& params, int n);

/// K_{n,p}(eta, zeta) by the periodic trapezoid rule on both circles.
/// The residual imaginary part is checked against 1e-8 and discarded.
double kernel_value(double eta, double zeta, const KernelConfig& cfg,
                    const ContourSpec& contour);

/// Same kernel with the z-integral replaced by its residue sum over the
/// poles pi_j; requires all pi distinct.
double kernel_value_residue(double eta, double zeta, const KernelConfig& cfg,
                            const ContourSpec& contour);

/// Dense kernel matrix [K(x_i, x_j)] over a point grid, factorized over the
/// contour nodes so grids cost little more than a single evaluation.
Eigen::MatrixXd kernel_matrix(const std::vector<double>& points,
                              const KernelConfig& cfg,
                              const ContourSpec& contour);

/// Pr(lambda_1 <= s) = det(1 - K_{n,p} on (s, s+L)) via Nystrom; performs
/// a (2M, 2L) refinement check and throws accuracy_error when the two
/// levels disagree by more than 1e-6.
double largest_eig_cdf(double s, const KernelConfig& cfg,
                       const NystromConfig& nys, const ContourSpec& contour);

/// Exact n = 1 law: the single nonzero eigenvalue is hypoexponential with
/// rates pi_j.  Verification oracle for the Fredholm path.
double cdf_n1_closed(double s, const std::vector<double>& pi);

/// Unnormalized joint density of the nonzero eigenvalues for n <= 3,
/// p <= 6: |V(lambda) sum_alpha (-1)^|alpha| V(pi_alphabar)
/// det(exp(-n pi_alpha(j) lambda_k))|.
double density_small_n(const std::vector<double>& lambdas,
                       const KernelConfig& cfg);

/// S_{n,p}(u, v) = sigma K(mu + sigma u, mu + sigma v).
double rescaled_kernel(double u, double v, const KernelConfig& cfg,
                       const CenteringParams& params,
                       const ContourSpec& contour);

/// det(1 - S_{n,p} on (x, x + L)) in rescaled coordinates; equals
/// largest_eig_cdf(mu + sigma x) by change of variables.
double rescaled_largest_eig_cdf(double x, const KernelConfig& cfg,
                                const CenteringParams& params,
                                const NystromConfig& nys,
                                const ContourSpec& contour);

/// Tracy-Widom F_2(x) = det(1 - Airy operator on (x, x + L)) via Nystrom,
/// with the same (2M, 2L) refinement contract.
double tw2_cdf(double x, const NystromConfig& nys);

/// Recomputes largest_eig_cdf at each q (with contours rebuilt per q) and
/// returns the maximum pairwise deviation; the determinant is invariant
/// although the kernel itself is not.
double q_invariance_check(const KernelConfig& cfg, double s,
                          const NystromConfig& nys,
                          const std::vector<double>& qs);

}  // namespace rmtw
