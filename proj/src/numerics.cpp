#include "rmtw/numerics.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rmtw {

bool is_hermitian(const ComplexMatrix& h, double rel_tol) {
  if (h.rows() != h.cols() || h.rows() < 1) return false;
  const double scale = h.cwiseAbs().maxCoeff();
  if (scale == 0.0) return true;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < h.rows(); ++i)
    for (Eigen::Index j = 0; j <= i; ++j)
      worst = std::max(worst, std::abs(h(i, j) - std::conj(h(j, i))));
  return worst <= rel_tol * scale;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h) {
  if (h.rows() != h.cols() || h.rows() < 1)
    throw invalid_input_error("hermitian_eigenvalues: matrix must be square");
  if (!is_hermitian(h))
    throw invalid_input_error("hermitian_eigenvalues: matrix is not Hermitian");
  const lapack_int n = static_cast<lapack_int>(h.rows());
  ComplexMatrix work = h;  // zheevd overwrites its input
  std::vector<double> w(static_cast<size_t>(n));
  const lapack_int info = LAPACKE_zheevd(
      LAPACK_COL_MAJOR, 'N', 'L', n,
      reinterpret_cast<lapack_complex_double*>(work.data()), n, w.data());
  if (info != 0)
    throw numerical_error("hermitian_eigenvalues: zheevd failed, info = " +
                          std::to_string(info));
  std::reverse(w.begin(), w.end());  // LAPACK returns ascending
  return w;
}

QuadratureRule gauss_legendre(int m, double a, double b) {
  if (m < 1) throw invalid_input_error("gauss_legendre: m must be >= 1");
  if (!(a < b)) throw invalid_input_error("gauss_legendre: need a < b");

  QuadratureRule rule;
  rule.a = a;
  rule.b = b;
  rule.nodes.resize(static_cast<size_t>(m));
  rule.weights.resize(static_cast<size_t>(m));

  // Newton iteration on P_m from the Chebyshev initial guess; the rule is
  // symmetric so only half the nodes are computed.
  const int half = (m + 1) / 2;
  const double xm = 0.5 * (b + a);
  const double xl = 0.5 * (b - a);
  for (int i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < m; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = m * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    rule.nodes[static_cast<size_t>(i)] = xm - xl * z;
    rule.nodes[static_cast<size_t>(m - 1 - i)] = xm + xl * z;
    const double wgt = 2.0 * xl / ((1.0 - z * z) * pp * pp);
    rule.weights[static_cast<size_t>(i)] = wgt;
    rule.weights[static_cast<size_t>(m - 1 - i)] = wgt;
  }
  return rule;
}

double solve_root_bracketed(const std::function<double(double)>& f, double lo,
                            double hi, double tol) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw bracketing_error("solve_root_bracketed: no sign change on bracket");
  const double width0 = hi - lo;
  double x = lo;
  for (int iter = 0; iter < 200; ++iter) {
    // Secant candidate; fall back to the midpoint when it leaves the bracket.
    double xs = (lo * fhi - hi * flo) / (fhi - flo);
    if (!(xs > lo && xs < hi)) xs = 0.5 * (lo + hi);
    const double fx = f(xs);
    x = xs;
    if (std::abs(fx) <= tol || (hi - lo) <= tol * width0) return x;
    if ((fx > 0.0) == (fhi > 0.0)) {
      hi = xs;
      fhi = fx;
    } else {
      lo = xs;
      flo = fx;
    }
    // Midpoint every other iteration keeps the bracket shrinking.
    if (iter % 2 == 1) {
      const double xm = 0.5 * (lo + hi);
      const double fm = f(xm);
      if (fm == 0.0) return xm;
      if ((fm > 0.0) == (fhi > 0.0)) {
        hi = xm;
        fhi = fm;
      } else {
        lo = xm;
        flo = fm;
      }
    }
  }
  return x;
}

std::complex<double> complex_determinant(const ComplexMatrix& m) {
  if (m.rows() != m.cols())
    throw invalid_input_error("complex_determinant: matrix must be square");
  return Eigen::PartialPivLU<ComplexMatrix>(m).determinant();
}

double empirical_quantile(std::vector<double> samples, double prob) {
  if (samples.empty())
    throw invalid_input_error("empirical_quantile: empty sample");
  if (!(prob >= 0.0 && prob <= 1.0))
    throw invalid_input_error("empirical_quantile: prob must be in [0, 1]");
  std::sort(samples.begin(), samples.end());
  const double h = (static_cast<double>(samples.size()) - 1.0) * prob;
  const size_t k = static_cast<size_t>(std::floor(h));
  if (k + 1 >= samples.size()) return samples.back();
  const double frac = h - static_cast<double>(k);
  return samples[k] + frac * (samples[k + 1] - samples[k]);
}

}  // namespace rmtw
