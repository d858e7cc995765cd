#include "rmtw/table.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "rmtw/numerics.hpp"
#include "rmtw/sampling.hpp"

namespace rmtw {

namespace {
constexpr const char* kSchemaVersion = "1";
constexpr const char* kSoftwareVersion = "rmtw 0.1.0";
constexpr std::uint64_t kReplacementStreamBase = 1ULL << 63;
}  // namespace

double ratio_statistic(const std::vector<double>& eigs, int m) {
  if (m < 1) throw invalid_input_error("ratio_statistic: m >= 1 required");
  if (static_cast<int>(eigs.size()) < m + 2)
    throw invalid_input_error("ratio_statistic: need at least m + 2 eigenvalues");
  for (size_t i = 0; i + 1 < static_cast<size_t>(m) + 2; ++i)
    if (!(eigs[i] > eigs[i + 1]))
      throw degeneracy_error("ratio_statistic: eigenvalues not strictly descending");
  double best = 0.0;
  for (int i = 0; i < m; ++i) {
    const double num = eigs[static_cast<size_t>(i)] - eigs[static_cast<size_t>(i) + 1];
    const double den = eigs[static_cast<size_t>(i) + 1] - eigs[static_cast<size_t>(i) + 2];
    best = std::max(best, num / den);
  }
  return best;
}

std::vector<double> default_percentiles() {
  return {0.50, 0.60, 0.70, 0.80, 0.85, 0.90, 0.91, 0.92,
          0.93, 0.94, 0.95, 0.96, 0.97, 0.98, 0.99};
}

CriticalTable tabulate(int m_max, int gue_n, int reps,
                       const std::vector<double>& percentiles, SeedSpec seed,
                       int threads) {
  if (m_max < 1) throw invalid_input_error("tabulate: m_max >= 1 required");
  if (gue_n < m_max + 2)
    throw invalid_input_error("tabulate: gue_n >= m_max + 2 required");
  if (reps < 100) throw invalid_input_error("tabulate: reps >= 100 required");
  if (percentiles.empty())
    throw invalid_input_error("tabulate: empty percentile grid");
  threads = std::max(1, threads);

  // stats[r * m_max + (m-1)] holds the replicate-r statistic for column m.
  // Raw d_i feed the statistic: the N^(2/3) scaling and the -2 shift cancel
  // by affine invariance.
  std::vector<double> stats(static_cast<size_t>(reps) * m_max);
  std::atomic<int> next{0};
  std::atomic<int> replaced{0};

  auto worker = [&] {
    for (;;) {
      const int r = next.fetch_add(1);
      if (r >= reps) return;
      SeedSpec rep_seed{seed.base_seed, static_cast<std::uint64_t>(r)};
      for (int attempt = 0;; ++attempt) {
        try {
          const std::vector<double> top =
              gue_top_scaled(gue_n, m_max + 2, rep_seed);
          for (int m = 1; m <= m_max; ++m)
            stats[static_cast<size_t>(r) * m_max + m - 1] =
                ratio_statistic(top, m);
          break;
        } catch (const degeneracy_error&) {
          // Floating-point tie: redraw from a reserved stream, derived from
          // the replicate index so the outcome is thread-count independent.
          if (attempt >= 8)
            throw numerical_error("tabulate: persistent degenerate spectra");
          replaced.fetch_add(1);
          rep_seed.stream = kReplacementStreamBase |
                            (static_cast<std::uint64_t>(r) +
                             static_cast<std::uint64_t>(attempt) *
                                 static_cast<std::uint64_t>(reps));
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  CriticalTable table;
  table.percentiles = percentiles;
  std::sort(table.percentiles.begin(), table.percentiles.end());
  for (int m = 1; m <= m_max; ++m) table.m_values.push_back(m);
  table.values.assign(table.percentiles.size(),
                      std::vector<double>(static_cast<size_t>(m_max)));
  std::vector<double> column(static_cast<size_t>(reps));
  for (int m = 1; m <= m_max; ++m) {
    for (int r = 0; r < reps; ++r)
      column[static_cast<size_t>(r)] =
          stats[static_cast<size_t>(r) * m_max + m - 1];
    for (size_t pi = 0; pi < table.percentiles.size(); ++pi)
      table.values[pi][static_cast<size_t>(m - 1)] =
          empirical_quantile(column, table.percentiles[pi]);
  }

  table.meta.gue_n = gue_n;
  table.meta.reps = reps;
  table.meta.base_seed = seed.base_seed;
  table.meta.version = kSoftwareVersion;
  table.meta.degenerate_replacements = replaced.load();
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  table.meta.created = buf;
  return table;
}

double CriticalTable::critical_value(double level, int m) const {
  const auto mit = std::find(m_values.begin(), m_values.end(), m);
  if (mit == m_values.end())
    throw config_error("CriticalTable: no column for m = " + std::to_string(m));
  const size_t mj = static_cast<size_t>(mit - m_values.begin());
  for (size_t pi = 0; pi < percentiles.size(); ++pi)
    if (std::abs(percentiles[pi] - level) < 1e-12) return values[pi][mj];
  throw config_error("CriticalTable: level " + std::to_string(level) +
                     " not tabulated");
}

double CriticalTable::percentile_of(double statistic, int m) const {
  const auto mit = std::find(m_values.begin(), m_values.end(), m);
  if (mit == m_values.end())
    throw config_error("CriticalTable: no column for m = " + std::to_string(m));
  const size_t mj = static_cast<size_t>(mit - m_values.begin());
  if (statistic <= values.front()[mj]) return percentiles.front();
  if (statistic >= values.back()[mj]) return percentiles.back();
  for (size_t pi = 1; pi < percentiles.size(); ++pi) {
    const double lo = values[pi - 1][mj];
    const double hi = values[pi][mj];
    if (statistic <= hi) {
      const double t = (hi > lo) ? (statistic - lo) / (hi - lo) : 0.0;
      return percentiles[pi - 1] + t * (percentiles[pi] - percentiles[pi - 1]);
    }
  }
  return percentiles.back();
}

void save_table(const CriticalTable& table, const std::string& path) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["meta"] = {{"gue_n", table.meta.gue_n},
               {"reps", table.meta.reps},
               {"base_seed", table.meta.base_seed},
               {"created", table.meta.created},
               {"version", table.meta.version},
               {"degenerate_replacements", table.meta.degenerate_replacements}};
  j["percentiles"] = table.percentiles;
  j["m_values"] = table.m_values;
  std::vector<double> flat;  // row-major over [percentile][m]
  for (const auto& row : table.values)
    flat.insert(flat.end(), row.begin(), row.end());
  j["values"] = flat;

  // Atomic write: temp file in the target directory, then rename.
  const std::filesystem::path target(path);
  const std::filesystem::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw format_error("save_table: cannot open " + tmp.string());
    out << j.dump(2) << '\n';
  }
  std::filesystem::rename(tmp, target);
}

CriticalTable load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw format_error("load_table: cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw format_error(std::string("load_table: malformed JSON: ") + e.what());
  }
  if (!j.contains("schema_version") || j["schema_version"] != kSchemaVersion)
    throw format_error("load_table: unknown schema version");
  for (const char* key : {"meta", "percentiles", "m_values", "values"})
    if (!j.contains(key))
      throw format_error(std::string("load_table: missing field ") + key);
  CriticalTable table;
  try {
    table.percentiles = j["percentiles"].get<std::vector<double>>();
    table.m_values = j["m_values"].get<std::vector<int>>();
    const auto flat = j["values"].get<std::vector<double>>();
    const size_t cols = table.m_values.size();
    if (flat.size() != table.percentiles.size() * cols)
      throw format_error("load_table: values size mismatch");
    table.values.resize(table.percentiles.size());
    for (size_t r = 0; r < table.percentiles.size(); ++r)
      table.values[r].assign(flat.begin() + static_cast<long>(r * cols),
                             flat.begin() + static_cast<long>((r + 1) * cols));
    const auto& meta = j["meta"];
    table.meta.gue_n = meta.value("gue_n", 0);
    table.meta.reps = meta.value("reps", 0);
    table.meta.base_seed = meta.value("base_seed", std::uint64_t{0});
    table.meta.created = meta.value("created", "");
    table.meta.version = meta.value("version", "");
    table.meta.degenerate_replacements = meta.value("degenerate_replacements", 0);
  } catch (const nlohmann::json::exception& e) {
    throw format_error(std::string("load_table: bad field type: ") + e.what());
  }
  return table;
}

}  // namespace rmtw
