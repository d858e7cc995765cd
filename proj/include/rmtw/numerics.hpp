#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

#include "rmtw/errors.hpp"

namespace rmtw {

using ComplexMatrix = Eigen::MatrixXcd;

/// True when max|H(i,j) - conj(H(j,i))| <= tol * max|H|.
bool is_hermitian(const ComplexMatrix& h, double rel_tol = 1e-12);

/// All eigenvalues of a Hermitian matrix, sorted descending.
/// Throws invalid_input_error for non-Hermitian input.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h);

/// Gauss-Legendre rule on (a, b): exact for polynomials of degree <= 2m-1.
struct QuadratureRule {
  std::vector<double> nodes;    // strictly increasing, inside (a, b)
  std::vector<double> weights;  // positive, sum to b - a
  double a = 0.0;
  double b = 0.0;
};

QuadratureRule gauss_legendre(int m, double a, double b);

/// Root of a continuous monotone f on [lo, hi] with f(lo)f(hi) < 0.
/// Secant steps accelerated by a bisection fallback; terminates when
/// |f(x)| <= tol or the bracket width falls below tol * (hi - lo).
double solve_root_bracketed(const std::function<double(double)>& f, double lo,
                            double hi, double tol = 1e-12);

std::complex<double> complex_determinant(const ComplexMatrix& m);

/// Type-7 quantile: linear interpolation at h = (len - 1) * prob + 1
/// between ascending order statistics.
double empirical_quantile(std::vector<double> samples, double prob);

}  // namespace rmtw
