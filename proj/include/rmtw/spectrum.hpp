#pragma once

#include <vector>

#include "rmtw/errors.hpp"

namespace rmtw {

/// Population spectrum of Sigma_p.  Holds the eigenvalues ell_1 >= ... >=
/// ell_p > 0, their inverses pi_j ascending, and the empirical spectral
/// distribution H_p (integration against H_p is the uniform average over
/// the ell_j).
class SpectrumModel {
 public:
  /// Eigenvalues in any order; they are sorted descending internally.
  explicit SpectrumModel(std::vector<double> eigenvalues);

  /// Identity covariance in dimension p (H_p = point mass at 1).
  static SpectrumModel identity(int p);

  int p() const { return static_cast<int>(ell_.size()); }
  const std::vector<double>& ell() const { return ell_; }  // descending
  const std::vector<double>& pi() const { return pi_; }    // ascending
  double pi1() const { return pi_.front(); }

  /// (1/p) sum_j g(ell_j)
  template <typename F>
  double integrate(F&& g) const {
    double acc = 0.0;
    for (double l : ell_) acc += g(l);
    return acc / static_cast<double>(p());
  }

 private:
  std::vector<double> ell_;
  std::vector<double> pi_;
};

}  // namespace rmtw
