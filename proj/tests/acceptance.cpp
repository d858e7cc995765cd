// Acceptance gate: one self-contained check per shipped guarantee, each
// printing a single pass/fail line.  Run with no arguments for the full
// gate or with --criterion N (repeatable) for a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "rmtw/centering.hpp"
#include "rmtw/factor.hpp"
#include "rmtw/kernel.hpp"
#include "rmtw/sampling.hpp"
#include "rmtw/table.hpp"
#include "rmtw/verify.hpp"

namespace {

using namespace rmtw;

std::string g_table_path = "data/reference_table.json";

struct Outcome {
  bool passed = false;
  std::string detail;
};

// Published 95% critical values for m = 1..8 that the Monte Carlo table
// must reproduce.
const std::vector<double> kCritical95 = {4.52, 5.73, 6.46, 7.01,
                                         7.50, 7.95, 8.29, 8.59};

CriticalTable published_table() {
  CriticalTable t;
  t.m_values = {1, 2, 3, 4, 5, 6, 7, 8};
  t.percentiles = {0.95};
  t.values = {kCritical95};
  return t;
}

// Piecewise-linear Tracy-Widom CDF cache for cheap KS statistics.
class Tw2Grid {
 public:
  Tw2Grid() : lo_(-6.5), step_(0.05) {
    const NystromConfig nys{25.0, 48};
    values_.reserve(201);
    for (int i = 0; i <= 200; ++i) values_.push_back(tw2_cdf(lo_ + step_ * i, nys));
  }
  double operator()(double x) const {
    if (x <= lo_) return 0.0;
    const double t = (x - lo_) / step_;
    const auto i = static_cast<size_t>(t);
    if (i + 1 >= values_.size()) return 1.0;
    const double frac = t - static_cast<double>(i);
    return values_[i] * (1.0 - frac) + values_[i + 1] * frac;
  }

 private:
  double lo_, step_;
  std::vector<double> values_;
};

double ks_distance(std::vector<double> samples, const Tw2Grid& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double ks = 0.0;
  for (size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    ks = std::max(ks, std::abs((static_cast<double>(i) + 1.0) / n - f));
    ks = std::max(ks, std::abs(static_cast<double>(i) / n - f));
  }
  return ks;
}

int hw_threads() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

Outcome check_row(const CriticalTable& table, double rel_tol,
                  std::ostringstream& detail) {
  double worst = 0.0;
  for (size_t m = 1; m <= kCritical95.size(); ++m) {
    const double got = table.critical_value(0.95, static_cast<int>(m));
    worst = std::max(worst, std::abs(got / kCritical95[m - 1] - 1.0));
  }
  detail << "worst rel dev " << worst << " (tol " << rel_tol << ")";
  return {worst <= rel_tol, detail.str()};
}

Outcome criterion1() {
  std::ostringstream detail;
  CriticalTable ref;
  try {
    ref = load_table(g_table_path);
  } catch (const std::exception& e) {
    return {false, std::string("reference table unavailable: ") + e.what()};
  }
  if (ref.meta.gue_n != 1000 || ref.meta.reps != 30000)
    return {false, "reference table was not generated at full scale"};
  detail << "full-scale table: ";
  auto full = check_row(ref, 0.05, detail);
  if (!full.passed) return full;

  detail << "; desk-scale rerun: ";
  const auto t0 = std::chrono::steady_clock::now();
  const auto desk =
      tabulate(8, 400, 8000, default_percentiles(), {2026, 0}, hw_threads());
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  auto deskres = check_row(desk, 0.12, detail);
  detail << ", " << static_cast<int>(secs) << "s";
  return {deskres.passed && secs <= 900.0, detail.str()};
}

Outcome criterion2() {
  double worst = 0.0;
  for (const auto& [n, p] : std::vector<std::pair<int, int>>{
           {2, 2}, {10, 10}, {100, 100}, {1, 4}, {5, 20}, {50, 200}, {12, 48}}) {
    const auto params = centering_params(SpectrumModel::identity(p), n);
    const double sn = std::sqrt(static_cast<double>(n));
    const double sp = std::sqrt(static_cast<double>(p));
    const double c = sn / (sn + sp);
    const double mu = (1.0 + sp / sn) * (1.0 + sp / sn);
    const double sigma = std::pow(n, -2.0 / 3.0) / c * std::cbrt(1.0 + sn / sp);
    worst = std::max({worst, std::abs(params.c - c), std::abs(params.mu - mu),
                      std::abs(params.sigma - sigma)});
  }
  std::ostringstream detail;
  detail << "worst abs dev " << worst << " (tol 1e-12)";
  return {worst <= 1e-12, detail.str()};
}

Outcome criterion3() {
  double worst = 0.0;
  for (const auto& ell : std::vector<std::vector<double>>{
           {1.0}, {1.0, 0.5}, {1.0, 0.7, 0.4}}) {
    const SpectrumModel spectrum{std::vector<double>(ell)};
    const auto cfg = KernelConfig::from_spectrum(spectrum, 1);
    const auto contour = default_contour(cfg);
    const double smax = 4.0 * static_cast<double>(ell.size());
    const NystromConfig nys{5.0 * smax, 48};
    for (int i = 1; i <= 10; ++i) {
      const double s = smax * i / 10.0;
      worst = std::max(worst, std::abs(largest_eig_cdf(s, cfg, nys, contour) -
                                       cdf_n1_closed(s, spectrum.pi())));
    }
  }
  std::ostringstream detail;
  detail << "worst abs dev " << worst << " (tol 1e-6)";
  return {worst <= 1e-6, detail.str()};
}

Outcome criterion4() {
  VerifyOptions opt;
  opt.suites = {"contour-residue", "q-invariance", "refinement"};
  const auto results = run_verification(opt);
  bool ok = true;
  std::ostringstream detail;
  for (const auto& r : results) {
    ok = ok && r.passed;
    detail << r.name << " worst " << r.worst << " (tol " << r.tolerance << "); ";
  }
  return {ok, detail.str()};
}

Outcome criterion5() {
  const SpectrumModel spectrum({1.0, 0.7, 0.4});
  const int n = 2, reps = 200000;
  const auto cfg = KernelConfig::from_spectrum(spectrum, n);
  const auto contour = default_contour(cfg);
  const NystromConfig nys = default_nystrom(centering_params(spectrum, n), n);
  std::vector<double> tops(reps);
  for (int i = 0; i < reps; ++i)
    tops[static_cast<size_t>(i)] =
        sample_wishart_eigs(spectrum, n, {515, static_cast<std::uint64_t>(i)})
            .eigenvalues.front();
  std::sort(tops.begin(), tops.end());
  bool ok = true;
  std::ostringstream detail;
  for (double s : {1.0, 2.0, 3.0, 4.0, 6.0}) {
    const double det_cdf = largest_eig_cdf(s, cfg, nys, contour);
    const double emp =
        static_cast<double>(std::lower_bound(tops.begin(), tops.end(), s) -
                            tops.begin()) /
        reps;
    const double se =
        std::sqrt(std::max(det_cdf * (1.0 - det_cdf), 1e-12) / reps);
    const double dev = std::abs(det_cdf - emp);
    if (dev > 3.0 * se) {
      ok = false;
      detail << "s=" << s << " dev " << dev << " > 3se " << 3.0 * se << "; ";
    }
  }
  if (ok) detail << "all 5 grid points within 3 binomial SE of " << reps << " draws";
  return {ok, detail.str()};
}

Outcome criterion6() {
  // Marginal CDF of the largest eigenvalue from the numerically normalized
  // two-eigenvalue joint density, against the Fredholm determinant.
  const SpectrumModel spectrum({1.0, 0.7, 0.4});
  const int n = 2;
  const auto cfg = KernelConfig::from_spectrum(spectrum, n);
  const auto contour = default_contour(cfg);
  const NystromConfig nys = default_nystrom(centering_params(spectrum, n), n);

  const auto mass_below = [&](double s) {
    const auto outer = gauss_legendre(160, 0.0, s);
    double total = 0.0;
    for (size_t i = 0; i < outer.nodes.size(); ++i) {
      const double l1 = outer.nodes[i];
      const auto inner = gauss_legendre(160, 0.0, l1);
      double acc = 0.0;
      for (size_t j = 0; j < inner.nodes.size(); ++j)
        acc += inner.weights[j] * density_small_n({l1, inner.nodes[j]}, cfg);
      total += outer.weights[i] * acc;
    }
    return total;
  };
  const double z = mass_below(40.0);
  double worst = 0.0;
  for (double s : {1.0, 2.0, 3.5}) {
    const double from_density = mass_below(s) / z;
    const double from_det = largest_eig_cdf(s, cfg, nys, contour);
    worst = std::max(worst, std::abs(from_density - from_det));
  }
  std::ostringstream detail;
  detail << "worst abs dev " << worst << " (tol 1e-4)";
  return {worst <= 1e-4, detail.str()};
}

Outcome criterion7() {
  const Tw2Grid tw2;
  std::ostringstream detail;

  const int n = 100, p = 200, reps = 5000;
  const auto spectrum = SpectrumModel::identity(p);
  const auto params = centering_params(spectrum, n);
  std::vector<double> scaled(reps);
  for (int i = 0; i < reps; ++i)
    scaled[static_cast<size_t>(i)] =
        (sample_wishart_eigs(spectrum, n, {77, static_cast<std::uint64_t>(i)})
             .eigenvalues.front() -
         params.mu) /
        params.sigma;
  const double ks = ks_distance(std::move(scaled), tw2);
  detail << "MC n=100,p=200 KS " << ks << " (tol 0.05)";
  bool ok = ks <= 0.05;

  const int m = 200;
  const auto sq = SpectrumModel::identity(m);
  const auto pq = centering_params(sq, m);
  const auto cfg = KernelConfig::from_spectrum(sq, m, pq.c);
  const auto contour = edge_contour(cfg);
  const NystromConfig nys = default_nystrom(pq, m);
  double worst = 0.0;
  for (double x : {-2.0, -1.0, 0.0, 1.0, 2.0})
    worst = std::max(worst, std::abs(rescaled_largest_eig_cdf(x, cfg, pq, nys,
                                                              contour) -
                                     tw2(x)));
  detail << "; determinant n=p=200 worst dev " << worst << " (tol 0.02)";
  return {ok && worst <= 0.02, detail.str()};
}

Outcome criterion8() {
  const Tw2Grid tw2;
  const int N = 1000, reps = 10000;
  std::vector<double> samples(reps);
  for (int i = 0; i < reps; ++i)
    samples[static_cast<size_t>(i)] =
        gue_top_scaled(N, 1, {808, static_cast<std::uint64_t>(i)})[0];
  const double ks = ks_distance(std::move(samples), tw2);
  std::ostringstream detail;
  detail << "GUE N=1000, 1e4 reps: KS " << ks << " (tol 0.03)";
  return {ks <= 0.03, detail.str()};
}

Outcome criterion9() {
  // The published eigenvalues are printed with two digits, which is too
  // coarse to reproduce the decision row; rebuild them from the printed
  // consecutive-difference ratios instead (the statistic is invariant to
  // the affine normalization chosen here).
  const std::vector<double> ratios = {7.14, 3.77, 0.65, 12.73, 0.15, 2.98, 1.18};
  std::vector<double> delta(8);
  delta[7] = 1.0;
  for (int i = 6; i >= 0; --i) delta[static_cast<size_t>(i)] =
      ratios[static_cast<size_t>(i)] * delta[static_cast<size_t>(i) + 1];
  std::vector<double> eigs(9, 0.0);
  for (int i = 7; i >= 0; --i)
    eigs[static_cast<size_t>(i)] =
        eigs[static_cast<size_t>(i) + 1] + delta[static_cast<size_t>(i)];

  // (No attempt to map these back to the two-digit published eigenvalues:
  // compounding the printed ratios amplifies their rounding far beyond the
  // printed precision.  The decision row is the published artifact being
  // reproduced, and the statistic depends on the ratios alone.)
  const auto table = published_table();
  const std::vector<double> expected_stats = {12.73, 12.73, 12.73, 12.73,
                                              2.98, 2.98, 1.18};
  std::vector<int> rejected;
  for (int k0 = 0; k0 < 7; ++k0) {
    const auto r = run_test(eigs, k0, 7, table, 0.95);
    if (std::abs(r.statistic - expected_stats[static_cast<size_t>(k0)]) > 1e-9)
      return {false, "statistic row mismatch at k0 = " + std::to_string(k0)};
    if (r.reject) rejected.push_back(k0);
  }
  if (rejected != std::vector<int>{0, 1, 2, 3})
    return {false, "rejection pattern differs from the published decisions"};
  const auto strict = confidence_set(eigs, 7, table, 0.95, false);
  const auto conv = confidence_set(eigs, 7, table, 0.95, true);
  const bool sets_ok = strict.members == std::vector<int>{4, 5, 6} &&
                       conv.members == std::vector<int>{4, 5, 6, 7};
  return {sets_ok,
          "rejects k0 in {0,1,2,3}; 95% set {4,5,6} (+{7} by convention)"};
}

Outcome criterion10() {
  CriticalTable table;
  try {
    table = load_table(g_table_path);
  } catch (const std::exception& e) {
    return {false, std::string("reference table unavailable: ") + e.what()};
  }
  const int kmax = 7;

  FactorPanelSpec noise;
  noise.p = 300;
  noise.n_half = 132;  // T = 264
  noise.k = 0;
  int size_rejects = 0;
  const int size_reps = 400;
  for (int r = 0; r < size_reps; ++r) {
    Panel panel;
    panel.values = synth_factor_panel(noise, {1010, static_cast<std::uint64_t>(r)});
    const auto eigs = cov_eigs(complexify(panel));
    if (run_test(eigs, 0, kmax, table, 0.95).reject) ++size_rejects;
  }
  const double size_freq = static_cast<double>(size_rejects) / size_reps;

  FactorPanelSpec strong = noise;
  strong.k = 4;
  const int power_reps = 100;
  std::vector<int> power_rejects(4, 0);
  for (int r = 0; r < power_reps; ++r) {
    Panel panel;
    panel.values =
        synth_factor_panel(strong, {2020, static_cast<std::uint64_t>(r)});
    const auto eigs = cov_eigs(complexify(panel));
    for (int k0 = 0; k0 < 4; ++k0)
      if (run_test(eigs, k0, kmax, table, 0.95).reject)
        ++power_rejects[static_cast<size_t>(k0)];
  }
  double min_power = 1.0;
  for (int k0 = 0; k0 < 4; ++k0)
    min_power = std::min(
        min_power, static_cast<double>(power_rejects[static_cast<size_t>(k0)]) /
                       power_reps);

  std::ostringstream detail;
  detail << "null rejection rate " << size_freq << " (want 0.05 +/- 0.025, "
         << size_reps << " reps); min power over k0<=3 " << min_power
         << " (want >= 0.90)";
  return {std::abs(size_freq - 0.05) <= 0.025 && min_power >= 0.90,
          detail.str()};
}

using CriterionFn = Outcome (*)();
const CriterionFn kCriteria[] = {criterion1, criterion2, criterion3,
                                 criterion4, criterion5, criterion6,
                                 criterion7, criterion8, criterion9,
                                 criterion10};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      wanted.push_back(std::atoi(argv[++i]));
    } else if (arg == "--table" && i + 1 < argc) {
      g_table_path = argv[++i];
    } else {
      std::fprintf(stderr,
                   "usage: acceptance [--criterion N]... [--table path]\n");
      return 2;
    }
  }
  if (wanted.empty())
    for (int i = 1; i <= 10; ++i) wanted.push_back(i);

  bool all_ok = true;
  for (int c : wanted) {
    if (c < 1 || c > 10) {
      std::fprintf(stderr, "no criterion %d\n", c);
      return 2;
    }
    Outcome outcome;
    try {
      outcome = kCriteria[c - 1]();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %d: %s  (%s)\n", c, outcome.passed ? "PASS" : "FAIL",
                outcome.detail.c_str());
    std::fflush(stdout);
    all_ok = all_ok && outcome.passed;
  }
  return all_ok ? 0 : 1;
}
