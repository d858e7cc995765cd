#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "rmtw/table.hpp"

namespace rmtw {

/// Real data panel, p series by T observations, T even.
struct Panel {
  std::vector<std::string> series_ids;
  Eigen::MatrixXd values;  // p x T
};

/// Read a delimiter-separated panel: first column series id, remaining
/// columns numeric observations in time order, optional header row.
/// Missing cells are rejected outright.
Panel read_panel_csv(const std::string& path);

/// xi_it + i * xi_{i,t+n} with n = T/2; exact elementwise combination.
Eigen::MatrixXcd complexify(const Panel& panel);

/// Descending eigenvalues of X X*/n for a complex p x n panel; at most
/// min(p, n) nonzero.
std::vector<double> cov_eigs(const Eigen::MatrixXcd& cp);

struct TestReport {
  int k0 = 0;
  int kmax = 0;
  double statistic = 0.0;
  double critical_value = 0.0;
  double level = 0.0;
  bool reject = false;  // strict inequality: statistic > critical_value
  double percentile_of_statistic = 0.0;
};

/// Test of k0 factors against k0 < k <= kmax using the max-ratio statistic
/// over i = k0+1..kmax and the critical value at (level, m = kmax - k0).
TestReport run_test(const std::vector<double>& eigs, int k0, int kmax,
                    const CriticalTable& table, double level);

struct ConfidenceSet {
  double level = 0.0;
  std::vector<int> members;  // ascending
  std::vector<TestReport> reports;
  bool includes_kmax_by_convention = false;
};

/// Test inversion over k0 = 0..kmax-1.  kmax itself is never testable; by
/// default it joins the set by convention (disable to mirror a strict
/// a-priori bound k < kmax).
ConfidenceSet confidence_set(const std::vector<double>& eigs, int kmax,
                             const CriticalTable& table, double level,
                             bool include_kmax = true);

/// (rank, eigenvalue) pairs for external scree plotting.
std::vector<std::pair<int, double>> scree_data(const std::vector<double>& eigs);

}  // namespace rmtw
