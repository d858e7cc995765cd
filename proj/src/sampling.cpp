#include "rmtw/sampling.hpp"

#include <algorithm>
#include <cmath>

namespace rmtw {

SpectrumModel::SpectrumModel(std::vector<double> eigenvalues) : ell_(std::move(eigenvalues)) {
  if (ell_.empty())
    throw invalid_input_error("SpectrumModel: need at least one eigenvalue");
  for (double l : ell_)
    if (!(l > 0.0))
      throw invalid_input_error("SpectrumModel: eigenvalues must be positive");
  std::sort(ell_.begin(), ell_.end(), std::greater<>());
  pi_.resize(ell_.size());
  for (size_t j = 0; j < ell_.size(); ++j) pi_[j] = 1.0 / ell_[j];
  // ell descending makes pi ascending automatically
}

SpectrumModel SpectrumModel::identity(int p) {
  if (p < 1) throw invalid_input_error("SpectrumModel::identity: p >= 1");
  return SpectrumModel(std::vector<double>(static_cast<size_t>(p), 1.0));
}

ComplexMatrix sample_gue(int N, SeedSpec seed) {
  if (N < 1) throw invalid_input_error("sample_gue: N >= 1 required");
  Rng rng(seed);
  ComplexMatrix h(N, N);
  const double diag_sd = 1.0 / std::sqrt(static_cast<double>(N));
  const double off_sd = 1.0 / std::sqrt(2.0 * static_cast<double>(N));
  for (int i = 0; i < N; ++i) {
    h(i, i) = diag_sd * rng.normal();
    for (int j = 0; j < i; ++j) {
      const std::complex<double> z(off_sd * rng.normal(), off_sd * rng.normal());
      h(i, j) = z;
      h(j, i) = std::conj(z);
    }
  }
  return h;
}

std::vector<double> gue_top_scaled(int N, int m, SeedSpec seed) {
  if (m < 1 || m > N)
    throw invalid_input_error("gue_top_scaled: need 1 <= m <= N");
  const std::vector<double> d = hermitian_eigenvalues(sample_gue(N, seed));
  const double scale = std::pow(static_cast<double>(N), 2.0 / 3.0);
  std::vector<double> out(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) out[static_cast<size_t>(i)] = scale * (d[static_cast<size_t>(i)] - 2.0);
  return out;
}

WishartDraw sample_wishart_eigs(const SpectrumModel& spectrum, int n,
                                SeedSpec seed) {
  if (n < 1) throw invalid_input_error("sample_wishart_eigs: n >= 1 required");
  const int p = spectrum.p();
  Rng rng(seed);
  // X is p x n with row i scaled by sqrt(ell_i); eigenvalues come from the
  // smaller Gram matrix (X*X/n when n < p) to keep the solve cheap.
  ComplexMatrix x(p, n);
  for (int i = 0; i < p; ++i) {
    const double sd = std::sqrt(spectrum.ell()[static_cast<size_t>(i)]);
    for (int t = 0; t < n; ++t) x(i, t) = sd * rng.complex_normal();
  }
  ComplexMatrix gram;
  if (n < p)
    gram = (x.adjoint() * x) / static_cast<double>(n);
  else
    gram = (x * x.adjoint()) / static_cast<double>(n);
  std::vector<double> eigs = hermitian_eigenvalues(gram);
  eigs.resize(static_cast<size_t>(p), 0.0);  // structural zeros when n < p
  WishartDraw draw;
  draw.eigenvalues = std::move(eigs);
  draw.n = n;
  draw.p = p;
  return draw;
}

Eigen::MatrixXd synth_factor_panel(const FactorPanelSpec& spec, SeedSpec seed) {
  if (spec.p < 1 || spec.n_half < 1 || spec.k < 0 || spec.p <= spec.k)
    throw invalid_input_error("synth_factor_panel: invalid spec");
  // A single-eigenvalue spectrum is shorthand for ell * I_p.
  const SpectrumModel idio =
      spec.idio_spectrum.p() == 1 && spec.p > 1
          ? SpectrumModel(
                std::vector<double>(spec.p, spec.idio_spectrum.ell().front()))
          : spec.idio_spectrum;
  if (idio.p() != spec.p)
    throw invalid_input_error("synth_factor_panel: idio_spectrum dimension != p");
  if (!(spec.loading_scale > 0.0) || !(spec.factor_variance > 0.0))
    throw invalid_input_error("synth_factor_panel: scales must be positive");

  Rng rng(seed);
  const int T = 2 * spec.n_half;

  Eigen::MatrixXd loadings(spec.p, spec.k);
  for (int i = 0; i < spec.p; ++i)
    for (int j = 0; j < spec.k; ++j)
      loadings(i, j) = spec.loading_scale * rng.normal();

  const double factor_sd = std::sqrt(spec.factor_variance);
  Eigen::MatrixXd panel(spec.p, T);
  Eigen::VectorXd f(spec.k);
  for (int t = 0; t < T; ++t) {
    for (int j = 0; j < spec.k; ++j) f(j) = factor_sd * rng.normal();
    for (int i = 0; i < spec.p; ++i) {
      const double idio_sd =
          std::sqrt(idio.ell()[static_cast<size_t>(i)] / 2.0);
      double v = idio_sd * rng.normal();
      if (spec.k > 0) v += loadings.row(i).dot(f);
      panel(i, t) = v;
    }
  }
  return panel;
}

}  // namespace rmtw
