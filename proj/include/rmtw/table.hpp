#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rmtw/rng.hpp"

namespace rmtw {

/// Percentile grid of the max-ratio statistic under the joint Tracy-Widom
/// law, with the metadata needed to regenerate it exactly.
struct CriticalTable {
  std::vector<int> m_values;            // columns
  std::vector<double> percentiles;      // rows, ascending
  std::vector<std::vector<double>> values;  // [percentile][m]
  struct Meta {
    int gue_n = 0;
    int reps = 0;
    std::uint64_t base_seed = 0;
    std::string created;
    std::string version;
    int degenerate_replacements = 0;
  } meta;

  /// Critical value at (level, m); throws config_error when the table does
  /// not carry that level or column.
  double critical_value(double level, int m) const;

  /// Piecewise-linear inverse lookup of a statistic in column m, clamped to
  /// the tabulated percentile range.
  double percentile_of(double statistic, int m) const;
};

/// max over i = 1..m of (e_i - e_{i+1}) / (e_{i+1} - e_{i+2}) for strictly
/// descending e.  Ties raise degeneracy_error.
double ratio_statistic(const std::vector<double>& eigs, int m);

/// The Table 1 percentile grid: 50, 60, 70, 80, 85, 90..99.
std::vector<double> default_percentiles();

/// Monte Carlo tabulation: one GUE(gue_n) draw per replicate (stream r),
/// ratio statistics for every m <= m_max from the same draw, empirical
/// type-7 quantiles per column.  Replicates are distributed over `threads`
/// workers; the result is bit-identical for any worker count.
CriticalTable tabulate(int m_max, int gue_n, int reps,
                       const std::vector<double>& percentiles, SeedSpec seed,
                       int threads = 1);

void save_table(const CriticalTable& table, const std::string& path);
CriticalTable load_table(const std::string& path);

}  // namespace rmtw
