#include "rmtw/factor.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "rmtw/numerics.hpp"

namespace rmtw {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  if (line.find(',') != std::string::npos ||
      line.find(';') != std::string::npos) {
    const char delim = line.find(',') != std::string::npos ? ',' : ';';
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, delim)) fields.push_back(field);
    if (!line.empty() && line.back() == delim) fields.push_back("");
  } else {
    std::istringstream ss(line);
    std::string field;
    while (ss >> field) fields.push_back(field);
  }
  for (auto& f : fields) {
    const auto b = f.find_first_not_of(" \t\r");
    const auto e = f.find_last_not_of(" \t\r");
    f = (b == std::string::npos) ? "" : f.substr(b, e - b + 1);
  }
  return fields;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

}  // namespace

Panel read_panel_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw format_error("read_panel_csv: cannot open " + path);
  Panel panel;
  std::vector<std::vector<double>> rows;
  std::string line;
  size_t line_no = 0;
  bool first_data_line = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split_fields(line);
    if (fields.size() < 2)
      throw format_error("read_panel_csv: line " + std::to_string(line_no) +
                         " has fewer than 2 columns");
    std::vector<double> row(fields.size() - 1);
    bool numeric = true;
    for (size_t j = 1; j < fields.size(); ++j)
      if (!parse_double(fields[j], row[j - 1])) {
        numeric = false;
        break;
      }
    if (!numeric) {
      // A single non-numeric leading row is an optional header.
      if (first_data_line) {
        first_data_line = false;
        continue;
      }
      throw format_error("read_panel_csv: non-numeric or missing cell at line " +
                         std::to_string(line_no));
    }
    first_data_line = false;
    if (!rows.empty() && row.size() != rows.front().size())
      throw format_error("read_panel_csv: ragged row at line " +
                         std::to_string(line_no));
    panel.series_ids.push_back(fields[0]);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw format_error("read_panel_csv: no data rows in " + path);
  const int p = static_cast<int>(rows.size());
  const int t_len = static_cast<int>(rows.front().size());
  if (t_len % 2 != 0)
    throw invalid_input_error("read_panel_csv: T must be even");
  if (t_len < 6)
    throw invalid_input_error("read_panel_csv: need T >= 6 observations");
  panel.values.resize(p, t_len);
  for (int i = 0; i < p; ++i)
    for (int t = 0; t < t_len; ++t)
      panel.values(i, t) = rows[static_cast<size_t>(i)][static_cast<size_t>(t)];
  return panel;
}

Eigen::MatrixXcd complexify(const Panel& panel) {
  const Eigen::Index t_len = panel.values.cols();
  if (t_len % 2 != 0)
    throw invalid_input_error("complexify: T must be even");
  const Eigen::Index n = t_len / 2;
  Eigen::MatrixXcd out(panel.values.rows(), n);
  for (Eigen::Index i = 0; i < panel.values.rows(); ++i)
    for (Eigen::Index t = 0; t < n; ++t)
      out(i, t) = std::complex<double>(panel.values(i, t),
                                       panel.values(i, t + n));
  return out;
}

std::vector<double> cov_eigs(const Eigen::MatrixXcd& cp) {
  const Eigen::Index p = cp.rows();
  const Eigen::Index n = cp.cols();
  if (p < 1 || n < 1) throw invalid_input_error("cov_eigs: empty panel");
  Eigen::MatrixXcd gram;
  if (n < p)
    gram = (cp.adjoint() * cp) / static_cast<double>(n);
  else
    gram = (cp * cp.adjoint()) / static_cast<double>(n);
  std::vector<double> eigs = hermitian_eigenvalues(gram);
  eigs.resize(static_cast<size_t>(p), 0.0);
  return eigs;
}

TestReport run_test(const std::vector<double>& eigs, int k0, int kmax,
                    const CriticalTable& table, double level) {
  if (k0 < 0 || k0 >= kmax)
    throw config_error("run_test: need 0 <= k0 < kmax");
  if (static_cast<int>(eigs.size()) < kmax + 2)
    throw config_error("run_test: need at least kmax + 2 eigenvalues");
  const int m = kmax - k0;
  // The statistic over i = k0+1..kmax is the m-ratio statistic applied to
  // the eigenvalues from position k0 on.
  const std::vector<double> tail(eigs.begin() + k0, eigs.end());
  TestReport report;
  report.k0 = k0;
  report.kmax = kmax;
  report.level = level;
  report.statistic = ratio_statistic(tail, m);
  report.critical_value = table.critical_value(level, m);
  report.reject = report.statistic > report.critical_value;
  report.percentile_of_statistic = table.percentile_of(report.statistic, m);
  return report;
}

ConfidenceSet confidence_set(const std::vector<double>& eigs, int kmax,
                             const CriticalTable& table, double level,
                             bool include_kmax) {
  ConfidenceSet set;
  set.level = level;
  set.includes_kmax_by_convention = include_kmax;
  for (int k0 = 0; k0 < kmax; ++k0) {
    set.reports.push_back(run_test(eigs, k0, kmax, table, level));
    if (!set.reports.back().reject) set.members.push_back(k0);
  }
  if (include_kmax) set.members.push_back(kmax);
  return set;
}

std::vector<std::pair<int, double>> scree_data(const std::vector<double>& eigs) {
  std::vector<std::pair<int, double>> out;
  out.reserve(eigs.size());
  for (size_t i = 0; i < eigs.size(); ++i)
    out.emplace_back(static_cast<int>(i) + 1, eigs[i]);
  return out;
}

}  // namespace rmtw
