// support.hpp: independent reference computations shared by the tests and
// the acceptance runner. Nothing here calls the engine code it checks.
#pragma once

#include "tcm/photon_dist.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

namespace support {

// Scaled block matrix built from dense a, a^dag and collective-spin
// matrices: -detuning * n on the diagonal, a^dag J- + a J+ off it, restricted
// to the states with n + m = c, rows in ascending photon number.
inline Eigen::MatrixXd dense_block(int n_tlm, long two_c, double detuning) {
  const int spins = n_tlm + 1;
  const long n_hi = std::max(0L, (two_c + n_tlm) / 2) + 1;
  const auto photons = static_cast<int>(n_hi + 1);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(photons, photons);
  for (int n = 1; n < photons; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  // spin index s = m + r, J+ |s> = sqrt((r - m)(r + m + 1)) |s + 1>
  const double r = 0.5 * n_tlm;
  Eigen::MatrixXd jp = Eigen::MatrixXd::Zero(spins, spins);
  for (int s = 0; s + 1 < spins; ++s) {
    const double m = s - r;
    jp(s + 1, s) = std::sqrt((r - m) * (r + m + 1.0));
  }
  const Eigen::MatrixXd jm = jp.transpose();
  const int dim = photons * spins;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (int n = 0; n < photons; ++n)
    for (int np = 0; np < photons; ++np)
      for (int s = 0; s < spins; ++s)
        for (int sp = 0; sp < spins; ++sp)
          h(n * spins + s, np * spins + sp) =
              a(np, n) * jm(s, sp) + a(n, np) * jp(s, sp) - (n == np && s == sp ? detuning * n : 0.0);
  std::vector<int> rows;
  for (int n = 0; n < photons; ++n)
    for (int s = 0; s < spins; ++s)
      if (2 * n + 2 * s - n_tlm == two_c) rows.push_back(n * spins + s);
  Eigen::MatrixXd out(rows.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t k = 0; k < rows.size(); ++k) out(i, k) = h(rows[i], rows[k]);
  return out;
}

// Gauss-Hermite nodes and weights for the weight e^{-x^2} (Golub-Welsch).
inline std::pair<std::vector<double>, std::vector<double>> gauss_hermite(int order) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(order, order);
  for (int k = 1; k < order; ++k) j(k, k - 1) = j(k - 1, k) = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  std::vector<double> x(order), w(order);
  for (int k = 0; k < order; ++k) {
    x[k] = es.eigenvalues()(k);
    const double v = es.eigenvectors()(0, k);
    w[k] = std::sqrt(std::numbers::pi) * v * v;
  }
  return {x, w};
}

// Squeezed coherent light with isotropic thermal noise as an average of pure
// squeezed coherent distributions over the thermal P-function. A displacement
// a = |a| e^{i theta} is rotated onto the real axis, moving the squeeze phase
// by -2 theta.
inline std::vector<double> thermal_average(const tcm::DistSpec& spec, int order, std::size_t size) {
  const auto [x, w] = gauss_hermite(order);
  const double s = std::sqrt(spec.n_thermal);
  std::vector<double> out(size, 0.0);
  for (int i = 0; i < order; ++i)
    for (int k = 0; k < order; ++k) {
      const std::complex<double> a(spec.beta + s * x[i], s * x[k]);
      tcm::DistSpec pure;
      pure.kind = tcm::DistKind::squeezed_coherent;
      pure.beta = std::abs(a);
      pure.r = spec.r;
      pure.psi = pure.beta == 0.0 ? 0.0 : spec.psi - 2.0 * std::arg(a);
      if (pure.r == 0.0) pure.psi = 0.0;
      const tcm::PhotonDistribution d = tcm::make_distribution(pure, {1e-13, std::nullopt});
      const double weight = w[i] * w[k] / std::numbers::pi;
      for (std::size_t n = 0; n < size && n < d.probs.size(); ++n) out[n] += weight * d.probs[n];
    }
  return out;
}

// sum_n p_n sin^2(sqrt(n + 1) t)
inline std::vector<double> single_tlm_direct(std::span<const double> probs, std::span<const double> times) {
  std::vector<double> out;
  for (double t : times) {
    long double acc = 0.0L;
    for (std::size_t n = 0; n < probs.size(); ++n) {
      const long double s = std::sin(std::sqrt(static_cast<long double>(n) + 1.0L) * t);
      acc += probs[n] * s * s;
    }
    out.push_back(static_cast<double>(acc));
  }
  return out;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  const std::size_t n = std::max(a.size(), b.size());
  for (std::size_t k = 0; k < n; ++k) {
    const double x = k < a.size() ? a[k] : 0.0;
    const double y = k < b.size() ? b[k] : 0.0;
    d = std::max(d, std::abs(x - y));
  }
  return d;
}

inline tcm::DistSpec spec_with(tcm::DistKind kind, double beta, double n_thermal, double r, double psi,
                               int fock_l) {
  tcm::DistSpec s;
  s.kind = kind;
  const tcm::DistFields f = tcm::relevant_fields(kind);
  if (f.beta) s.beta = beta;
  if (f.n_thermal) s.n_thermal = n_thermal;
  if (f.r) s.r = r;
  if (f.psi) s.psi = psi;
  if (f.fock_l) s.fock_l = fock_l;
  return s;
}

}  // namespace support
