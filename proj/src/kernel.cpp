#include "rmtw/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "rmtw/airy.hpp"

namespace rmtw {

using cplx = std::complex<double>;

namespace {

constexpr double kImagTol = 1e-8;
constexpr double kRefineTol = 1e-6;
constexpr double kMaxExponent = 690.0;  // stay clear of double overflow

// Trapezoid nodes and log-integrand pieces that do not depend on (eta, zeta).
// The theta grid is offset by half a step so no node lands exactly on the
// real axis where the two contours approach each other.
struct ContourData {
  std::vector<cplx> zs, ws;
  std::vector<cplx> log_pz;  // n Log z - sum_k Log(pi_k - z) + Log(dz-weight)
  std::vector<cplx> log_qw;  // -n Log w + sum_k Log(pi_k - w) + Log(dw-weight)
};

ContourData build_contours(const KernelConfig& cfg, const ContourSpec& contour) {
  const int N = contour.nodes;
  ContourData data;
  data.zs.resize(static_cast<size_t>(N));
  data.ws.resize(static_cast<size_t>(N));
  data.log_pz.resize(static_cast<size_t>(N));
  data.log_qw.resize(static_cast<size_t>(N));
  const double dn = static_cast<double>(cfg.n);
  for (int j = 0; j < N; ++j) {
    const double theta = 2.0 * std::numbers::pi * (j + 0.5) / N;
    const cplx ez = std::polar(1.0, theta);
    const cplx z = contour.gamma_center + contour.gamma_radius * ez;
    const cplx w = contour.sigma_radius * ez;
    data.zs[static_cast<size_t>(j)] = z;
    data.ws[static_cast<size_t>(j)] = w;
    cplx pz = dn * std::log(z) + std::log(contour.gamma_radius * ez / static_cast<double>(N));
    cplx qw = -dn * std::log(w) + std::log(contour.sigma_radius * ez / static_cast<double>(N));
    for (double pk : cfg.pi) {
      pz -= std::log(pk - z);
      qw += std::log(pk - w);
    }
    data.log_pz[static_cast<size_t>(j)] = pz;
    data.log_qw[static_cast<size_t>(j)] = qw;
  }
  return data;
}

double take_real_checked(cplx value, double scale, const char* what) {
  if (std::abs(value.imag()) > kImagTol * std::max(scale, 1e-6))
    throw accuracy_error(std::string(what) +
                         ": residual imaginary part above tolerance");
  return value.real();
}

double fredholm_det(const Eigen::MatrixXd& kernel, const QuadratureRule& rule) {
  const Eigen::Index m = kernel.rows();
  Eigen::MatrixXd a(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      a(i, j) = std::sqrt(rule.weights[static_cast<size_t>(i)] *
                          rule.weights[static_cast<size_t>(j)]) *
                kernel(i, j);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(m, m);
  return Eigen::PartialPivLU<Eigen::MatrixXd>(id - a).determinant();
}

double clip_to_unit(double d) {
  if (d < 0.0 && d > -kImagTol) return 0.0;
  if (d > 1.0 && d < 1.0 + kImagTol) return 1.0;
  return d;
}

double wishart_det_once(double s, const KernelConfig& cfg,
                        const ContourSpec& contour, int order, double length) {
  const QuadratureRule rule = gauss_legendre(order, s, s + length);
  const Eigen::MatrixXd k = kernel_matrix(rule.nodes, cfg, contour);
  return fredholm_det(k, rule);
}

double airy_det_once(double x, int order, double length) {
  const QuadratureRule rule = gauss_legendre(order, x, x + length);
  Eigen::MatrixXd k(order, order);
  for (int i = 0; i < order; ++i)
    for (int j = 0; j <= i; ++j) {
      const double v = airy_kernel(rule.nodes[static_cast<size_t>(i)],
                                   rule.nodes[static_cast<size_t>(j)]);
      k(i, j) = v;
      k(j, i) = v;
    }
  return fredholm_det(k, rule);
}

}  // namespace

KernelConfig KernelConfig::from_spectrum(const SpectrumModel& spectrum, int n) {
  return from_spectrum(spectrum, n, spectrum.pi1() / 2.0);
}

KernelConfig KernelConfig::from_spectrum(const SpectrumModel& spectrum, int n,
                                         double q) {
  KernelConfig cfg;
  cfg.pi = spectrum.pi();
  cfg.n = n;
  cfg.q = q;
  cfg.validate();
  return cfg;
}

void KernelConfig::validate() const {
  if (pi.empty() || n < 1)
    throw config_error("KernelConfig: need pi values and n >= 1");
  for (double v : pi)
    if (!(v > 0.0)) throw config_error("KernelConfig: pi must be positive");
  if (!std::is_sorted(pi.begin(), pi.end()))
    throw config_error("KernelConfig: pi must be ascending");
  if (!(q > 0.0 && q < pi.front()))
    throw config_error("KernelConfig: q must satisfy 0 < q < pi_1");
}

bool KernelConfig::all_pi_distinct(double rel_gap) const {
  for (size_t j = 1; j < pi.size(); ++j)
    if (pi[j] - pi[j - 1] < rel_gap * pi[j]) return false;
  return true;
}

void ContourSpec::validate(const KernelConfig& cfg) const {
  if (nodes < 16 || nodes % 2 != 0)
    throw config_error("ContourSpec: nodes must be even and >= 16");
  const double left = gamma_center - gamma_radius;
  const double right = gamma_center + gamma_radius;
  if (!(left > cfg.q))
    throw config_error("ContourSpec: Gamma must lie in Re z > q");
  if (!(left < cfg.pi1() && right > cfg.pip()))
    throw config_error("ContourSpec: Gamma must enclose every pi_k");
  if (!(sigma_radius > 0.0 && sigma_radius < cfg.q))
    throw config_error("ContourSpec: Sigma radius must lie in (0, q)");
}

ContourSpec default_contour(const KernelConfig& cfg, int nodes) {
  ContourSpec spec;
  const double pi1 = cfg.pi1();
  const double pip = cfg.pip();
  spec.gamma_center = 0.5 * (pi1 + pip);
  spec.gamma_radius = 0.5 * (pip - pi1) + 0.5 * std::min(pi1 - cfg.q, pi1);
  spec.sigma_radius = cfg.q / 2.0;
  spec.nodes = nodes;
  spec.validate(cfg);
  return spec;
}

ContourSpec edge_contour(const KernelConfig& cfg, int nodes) {
  // Empirically the trapezoid error spikes in a resonance band of node
  // counts a few times n wide (the integrand spectrum concentrates there);
  // 8n sits comfortably above it.
  if (nodes == 0) nodes = std::max(256, 8 * cfg.n);  // 8n is even
  const double pi1 = cfg.pi1();
  const double pip = cfg.pip();
  const double room = std::min(cfg.q, pi1 - cfg.q);
  const double saddle_scale =
      0.5 * cfg.q * std::pow(static_cast<double>(cfg.n), -1.0 / 3.0);
  const double delta = std::min(0.25 * room, saddle_scale);
  ContourSpec spec;
  const double left = cfg.q + delta;
  const double right = pip + std::max(0.2 * (pip - cfg.q), 0.1 * cfg.q);
  spec.gamma_center = 0.5 * (left + right);
  spec.gamma_radius = 0.5 * (right - left);
  spec.sigma_radius = cfg.q - delta;
  spec.nodes = nodes;
  spec.validate(cfg);
  return spec;
}

NystromConfig default_nystrom(const CenteringParams& params, int n) {
  NystromConfig nys;
  nys.truncation = std::max(
      10.0 * params.sigma * std::pow(static_cast<double>(n), 2.0 / 3.0),
      5.0 * params.mu);
  nys.order = 48;
  return nys;
}

double kernel_value(double eta, double zeta, const KernelConfig& cfg,
                    const ContourSpec& contour) {
  if (!(eta > 0.0 && zeta > 0.0))
    throw invalid_input_error("kernel_value: eta, zeta must be positive");
  cfg.validate();
  contour.validate(cfg);
  const ContourData data = build_contours(cfg, contour);
  const double dn = static_cast<double>(cfg.n);
  const int N = contour.nodes;
  cplx acc = 0.0;
  double mag = 0.0;  // total magnitude summed, for the cancellation noise floor
  for (int j = 0; j < N; ++j) {
    const cplx z = data.zs[static_cast<size_t>(j)];
    const cplx base_z = data.log_pz[static_cast<size_t>(j)] - eta * dn * (z - cfg.q);
    for (int l = 0; l < N; ++l) {
      const cplx w = data.ws[static_cast<size_t>(l)];
      const cplx expo = base_z + data.log_qw[static_cast<size_t>(l)] +
                        zeta * dn * (w - cfg.q) - std::log(w - z);
      if (expo.real() > kMaxExponent)
        throw accuracy_error("kernel_value: integrand overflow; contours too far from the saddle");
      const cplx term = std::exp(expo);
      acc += term;
      mag += std::abs(term);
    }
  }
  acc *= dn;
  mag *= dn;
  const double tol = std::max(kImagTol * std::max(std::abs(acc), 1e-6),
                              64.0 * 2.2e-16 * mag);
  if (std::abs(acc.imag()) > tol)
    throw accuracy_error("kernel_value: residual imaginary part above tolerance");
  return acc.real();
}

double kernel_value_residue(double eta, double zeta, const KernelConfig& cfg,
                            const ContourSpec& contour) {
  if (!(eta > 0.0 && zeta > 0.0))
    throw invalid_input_error("kernel_value_residue: eta, zeta must be positive");
  cfg.validate();
  contour.validate(cfg);
  if (!cfg.all_pi_distinct())
    throw degeneracy_error("kernel_value_residue: near-coincident pi values");
  const int p = static_cast<int>(cfg.pi.size());
  const double dn = static_cast<double>(cfg.n);
  // Per-pole constants: n log pi_j - sum_{k != j} Log(pi_j - pi_k).
  std::vector<cplx> pole(static_cast<size_t>(p));
  for (int j = 0; j < p; ++j) {
    cplx a = dn * std::log(cplx(cfg.pi[static_cast<size_t>(j)]));
    for (int k = 0; k < p; ++k)
      if (k != j)
        a -= std::log(cplx(cfg.pi[static_cast<size_t>(j)] -
                           cfg.pi[static_cast<size_t>(k)]));
    pole[static_cast<size_t>(j)] = a;
  }
  const int N = contour.nodes;
  cplx acc = 0.0;
  for (int l = 0; l < N; ++l) {
    const double theta = 2.0 * std::numbers::pi * (l + 0.5) / N;
    const cplx ew = std::polar(1.0, theta);
    const cplx w = contour.sigma_radius * ew;
    cplx sum_logs = 0.0;  // sum_k Log(w - pi_k)
    for (double pk : cfg.pi) sum_logs += std::log(w - pk);
    const cplx base = eta * dn * cfg.q + zeta * dn * (w - cfg.q) -
                      dn * std::log(w) +
                      std::log(contour.sigma_radius * ew / static_cast<double>(N));
    for (int j = 0; j < p; ++j) {
      const cplx expo = base + pole[static_cast<size_t>(j)] -
                        eta * dn * cfg.pi[static_cast<size_t>(j)] + sum_logs -
                        std::log(w - cfg.pi[static_cast<size_t>(j)]);
      if (expo.real() > kMaxExponent)
        throw accuracy_error("kernel_value_residue: integrand overflow");
      acc += std::exp(expo);
    }
  }
  acc *= dn;
  return take_real_checked(acc, std::abs(acc), "kernel_value_residue");
}

Eigen::MatrixXd kernel_matrix(const std::vector<double>& points,
                              const KernelConfig& cfg,
                              const ContourSpec& contour) {
  cfg.validate();
  contour.validate(cfg);
  for (double x : points)
    if (!(x > 0.0))
      throw invalid_input_error("kernel_matrix: points must be positive");
  const ContourData data = build_contours(cfg, contour);
  const int N = contour.nodes;
  const int M = static_cast<int>(points.size());
  const double dn = static_cast<double>(cfg.n);

  // Keep P with the decaying z-factor and Q with the decaying w-factor:
  // along edge-hugging contours each combined exponent stays bounded for
  // every grid point x >= s, whereas P or Q alone grow like n and overflow
  // once n reaches the hundreds.
  Eigen::MatrixXcd ez(M, N);  // exp(-x_i n (z_j - q) + P_j)
  Eigen::MatrixXcd we(N, M);  // exp(+x_i n (w_l - q) + Q_l)
  for (int i = 0; i < M; ++i) {
    const double x = points[static_cast<size_t>(i)];
    for (int j = 0; j < N; ++j) {
      const cplx expo = data.log_pz[static_cast<size_t>(j)] -
                        x * dn * (data.zs[static_cast<size_t>(j)] - cfg.q);
      if (expo.real() > kMaxExponent)
        throw accuracy_error(
            "kernel_matrix: integrand overflow; contours too far from the saddle");
      ez(i, j) = std::exp(expo);
    }
    for (int l = 0; l < N; ++l) {
      const cplx expo = data.log_qw[static_cast<size_t>(l)] +
                        x * dn * (data.ws[static_cast<size_t>(l)] - cfg.q);
      if (expo.real() > kMaxExponent)
        throw accuracy_error(
            "kernel_matrix: integrand overflow; contours too far from the saddle");
      we(l, i) = std::exp(expo);
    }
  }
  // Middle factor 1/(w_l - z_j), built row-by-row so no N x N matrix is
  // stored.  The parallel absolute-value product tracks how much magnitude
  // cancels in each entry, giving a floating-point noise floor for the
  // imaginary-part sanity check below (with a sharply peaked integrand the
  // residual imaginary part can exceed any fixed relative tolerance while
  // the sum is still correct to the achievable precision).
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(N, M);
  Eigen::MatrixXd g_abs = Eigen::MatrixXd::Zero(N, M);
  const Eigen::MatrixXd we_abs = we.cwiseAbs();
  for (int j = 0; j < N; ++j) {
    Eigen::RowVectorXcd row(N);
    for (int l = 0; l < N; ++l)
      row(l) = 1.0 / (data.ws[static_cast<size_t>(l)] -
                      data.zs[static_cast<size_t>(j)]);
    g.row(j) = row * we;
    g_abs.row(j) = row.cwiseAbs() * we_abs;
  }
  const Eigen::MatrixXcd k = dn * (ez * g);
  const Eigen::MatrixXd k_mag = dn * (ez.cwiseAbs() * g_abs);
  const double scale = k.cwiseAbs().maxCoeff();
  constexpr double kNoiseFactor = 64.0 * 2.2e-16;
  Eigen::MatrixXd out(M, M);
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j) {
      const double tol = std::max(kImagTol * std::max(scale, 1e-6),
                                  kNoiseFactor * k_mag(i, j));
      if (std::abs(k(i, j).imag()) > tol)
        throw accuracy_error(
            "kernel_matrix: residual imaginary part above tolerance");
      out(i, j) = k(i, j).real();
    }
  return out;
}

double largest_eig_cdf(double s, const KernelConfig& cfg,
                       const NystromConfig& nys, const ContourSpec& contour) {
  if (!(s > 0.0)) throw invalid_input_error("largest_eig_cdf: s must be positive");
  if (nys.order < 8 || !(nys.truncation > 0.0))
    throw config_error("largest_eig_cdf: invalid Nystrom configuration");
  const double coarse = wishart_det_once(s, cfg, contour, nys.order, nys.truncation);
  const double fine =
      wishart_det_once(s, cfg, contour, 2 * nys.order, 2.0 * nys.truncation);
  if (std::abs(coarse - fine) > kRefineTol)
    throw accuracy_error("largest_eig_cdf: Nystrom refinement did not converge");
  return clip_to_unit(fine);
}

double cdf_n1_closed(double s, const std::vector<double>& pi) {
  if (pi.empty()) throw invalid_input_error("cdf_n1_closed: empty rate list");
  if (!(s >= 0.0)) throw invalid_input_error("cdf_n1_closed: s must be >= 0");
  for (size_t j = 0; j < pi.size(); ++j) {
    if (!(pi[j] > 0.0))
      throw invalid_input_error("cdf_n1_closed: rates must be positive");
    for (size_t k = j + 1; k < pi.size(); ++k)
      if (std::abs(pi[j] - pi[k]) < 1e-8 * std::max(pi[j], pi[k]))
        throw degeneracy_error("cdf_n1_closed: coincident rates");
  }
  double tail = 0.0;
  for (size_t j = 0; j < pi.size(); ++j) {
    double coeff = 1.0;
    for (size_t k = 0; k < pi.size(); ++k)
      if (k != j) coeff *= pi[k] / (pi[k] - pi[j]);
    tail += coeff * std::exp(-pi[j] * s);
  }
  return 1.0 - tail;
}

double density_small_n(const std::vector<double>& lambdas,
                       const KernelConfig& cfg) {
  const int n = static_cast<int>(lambdas.size());
  const int p = static_cast<int>(cfg.pi.size());
  if (n < 1 || n > 3 || p > 6 || n > p)
    throw invalid_input_error("density_small_n: supports n <= 3, p <= 6, n <= p");
  if (n != cfg.n)
    throw invalid_input_error("density_small_n: lambda count must equal cfg.n");
  if (!cfg.all_pi_distinct())
    throw degeneracy_error("density_small_n: pi must be distinct");
  for (double l : lambdas)
    if (!(l > 0.0))
      throw invalid_input_error("density_small_n: lambdas must be positive");

  // V(x) = prod_{i<j} (x_j - x_i)
  const auto vandermonde = [](const std::vector<double>& x) {
    double v = 1.0;
    for (size_t i = 0; i < x.size(); ++i)
      for (size_t j = i + 1; j < x.size(); ++j) v *= x[j] - x[i];
    return v;
  };

  const double dn = static_cast<double>(n);
  double total = 0.0;
  // Increasing multi-indices alpha of size n out of {1..p}.
  std::vector<int> alpha(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) alpha[static_cast<size_t>(i)] = i;
  for (;;) {
    int index_sum = 0;
    std::vector<double> pi_bar;
    {
      size_t a = 0;
      for (int k = 0; k < p; ++k) {
        if (a < alpha.size() && alpha[a] == k) {
          index_sum += k + 1;  // |alpha| uses 1-based indices
          ++a;
        } else {
          pi_bar.push_back(cfg.pi[static_cast<size_t>(k)]);
        }
      }
    }
    Eigen::MatrixXd e(n, n);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        e(j, k) = std::exp(-dn * cfg.pi[static_cast<size_t>(alpha[static_cast<size_t>(j)])] *
                           lambdas[static_cast<size_t>(k)]);
    const double sign = (index_sum % 2 == 0) ? 1.0 : -1.0;
    total += sign * vandermonde(pi_bar) * e.determinant();

    // next combination
    int i = n - 1;
    while (i >= 0 && alpha[static_cast<size_t>(i)] == p - n + i) --i;
    if (i < 0) break;
    ++alpha[static_cast<size_t>(i)];
    for (int j = i + 1; j < n; ++j)
      alpha[static_cast<size_t>(j)] = alpha[static_cast<size_t>(j - 1)] + 1;
  }
  return std::abs(vandermonde(lambdas) * total);
}

double rescaled_kernel(double u, double v, const KernelConfig& cfg,
                       const CenteringParams& params,
                       const ContourSpec& contour) {
  const double eta = params.mu + params.sigma * u;
  const double zeta = params.mu + params.sigma * v;
  if (!(eta > 0.0 && zeta > 0.0))
    throw invalid_input_error("rescaled_kernel: mu + sigma*min(u,v) must be positive");
  return params.sigma * kernel_value(eta, zeta, cfg, contour);
}

double rescaled_largest_eig_cdf(double x, const KernelConfig& cfg,
                                const CenteringParams& params,
                                const NystromConfig& nys,
                                const ContourSpec& contour) {
  const auto det_once = [&](int order, double length) {
    const QuadratureRule rule = gauss_legendre(order, x, x + length);
    std::vector<double> raw(rule.nodes.size());
    for (size_t i = 0; i < rule.nodes.size(); ++i)
      raw[i] = params.mu + params.sigma * rule.nodes[i];
    Eigen::MatrixXd k = kernel_matrix(raw, cfg, contour);
    k *= params.sigma;  // S(u,v) = sigma K(mu+sigma u, mu+sigma v)
    return fredholm_det(k, rule);
  };
  const double coarse = det_once(nys.order, nys.truncation);
  const double fine = det_once(2 * nys.order, 2.0 * nys.truncation);
  if (std::abs(coarse - fine) > kRefineTol)
    throw accuracy_error("rescaled_largest_eig_cdf: refinement did not converge");
  return clip_to_unit(fine);
}

double tw2_cdf(double x, const NystromConfig& nys) {
  if (nys.order < 8 || !(nys.truncation > 0.0))
    throw config_error("tw2_cdf: invalid Nystrom configuration");
  const double coarse = airy_det_once(x, nys.order, nys.truncation);
  const double fine = airy_det_once(x, 2 * nys.order, 2.0 * nys.truncation);
  if (std::abs(coarse - fine) > kRefineTol)
    throw accuracy_error("tw2_cdf: Nystrom refinement did not converge");
  return clip_to_unit(fine);
}

double q_invariance_check(const KernelConfig& cfg, double s,
                          const NystromConfig& nys,
                          const std::vector<double>& qs) {
  if (qs.empty()) throw invalid_input_error("q_invariance_check: no q values");
  std::vector<double> dets;
  for (double q : qs) {
    KernelConfig local = cfg;
    local.q = q;
    local.validate();  // rejects q outside (0, pi_1)
    const ContourSpec contour = default_contour(local);
    dets.push_back(largest_eig_cdf(s, local, nys, contour));
  }
  double worst = 0.0;
  for (size_t i = 0; i < dets.size(); ++i)
    for (size_t j = i + 1; j < dets.size(); ++j)
      worst = std::max(worst, std::abs(dets[i] - dets[j]));
  return worst;
}

}  // namespace rmtw
