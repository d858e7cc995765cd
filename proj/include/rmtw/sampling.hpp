#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rmtw/numerics.hpp"
#include "rmtw/rng.hpp"
#include "rmtw/spectrum.hpp"

namespace rmtw {

/// N x N draw from the Gaussian Unitary Ensemble: strictly-lower entries
/// i.i.d. complex Gaussian with E|z|^2 = 1/N, diagonal real Gaussian with
/// variance 1/N, upper triangle by conjugate symmetry.
ComplexMatrix sample_gue(int N, SeedSpec seed);

/// The m largest GUE eigenvalues d_i mapped to N^(2/3) * (d_i - 2).
std::vector<double> gue_top_scaled(int N, int m, SeedSpec seed);

struct WishartDraw {
  std::vector<double> eigenvalues;  // descending, min(n,p) strictly positive
  int n = 0;
  int p = 0;
};

/// Eigenvalues of X X*/n where X is p x n with i.i.d. N_C(0, Sigma_p)
/// columns, i.e. a W_C(Sigma_p/n, n) draw.  Handles the singular n < p
/// case; the p - n structural zeros are returned explicitly.
WishartDraw sample_wishart_eigs(const SpectrumModel& spectrum, int n,
                                SeedSpec seed);

struct FactorPanelSpec {
  int p = 0;
  int n_half = 0;  // total T = 2 * n_half
  int k = 0;       // true factor count
  double loading_scale = 1.0;
  double factor_variance = 1.0;
  SpectrumModel idio_spectrum{std::vector<double>{1.0}};
};

/// p x T panel xi_it = Lambda_i' F_t + eta_it.  Loadings are drawn once per
/// panel and held fixed across t; idiosyncratic vectors are real
/// N(0, Sigma_p/2) independent of the factors.
Eigen::MatrixXd synth_factor_panel(const FactorPanelSpec& spec, SeedSpec seed);

}  // namespace rmtw
