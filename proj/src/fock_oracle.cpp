#include "fock_basis.hpp"
#include "tcm/error.hpp"
#include "tcm/photon_dist.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

namespace tcm {
namespace detail {

Eigen::MatrixXcd annihilation(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(d, d);
  for (Eigen::Index n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

Eigen::MatrixXcd squeeze_operator(double r, double psi, std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  if (r == 0.0) return Eigen::MatrixXcd::Identity(d, d);
  const std::complex<double> xi = std::polar(r, psi + std::numbers::pi);
  const Eigen::MatrixXcd a = annihilation(dim);
  const Eigen::MatrixXcd a2 = a * a;
  const Eigen::MatrixXcd gen = 0.5 * (std::conj(xi) * a2 - xi * a2.adjoint());
  return gen.exp();
}

Eigen::MatrixXcd displacement_operator(double alpha, std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  if (alpha == 0.0) return Eigen::MatrixXcd::Identity(d, d);
  const Eigen::MatrixXcd a = annihilation(dim);
  const Eigen::MatrixXcd gen = alpha * (a.adjoint() - a);
  return gen.exp();
}

}  // namespace detail

EffectiveThermal oracle_effective_thermal(double n_thermal, double r) {
  // Quadrature variances (vacuum = 1/2) add under thermal P-convolution.
  const double major = 0.5 * std::exp(2.0 * r) + n_thermal;
  const double minor = 0.5 * std::exp(-2.0 * r) + n_thermal;
  return {std::sqrt(major * minor) - 0.5, 0.25 * std::log(major / minor)};
}

std::size_t oracle_dim(const DistSpec& spec, std::size_t n_max) {
  const double mean = closed_form_moments(spec).mean;
  const double band = std::ceil(6.0 * std::sqrt(mean + 1.0)) +
                      std::ceil(4.0 * spec.r * std::sqrt(static_cast<double>(n_max)));
  return n_max + 1 + static_cast<std::size_t>(std::max(20.0, band));
}

namespace {

bool thermal_base(DistKind kind) {
  switch (kind) {
    case DistKind::thermal:
    case DistKind::mixed_coherent_thermal:
    case DistKind::squeezed_thermal:
    case DistKind::mixed_squeezed_coherent_thermal:
    case DistKind::displaced_squeezed_thermal:
      return true;
    default:
      return false;
  }
}

}  // namespace

std::vector<double> gaussian_fock_oracle(const DistSpec& spec, std::size_t dim) {
  validate(spec);
  if (dim < 1) throw ParameterError("oracle basis dimension must be >= 1");
  const auto d = static_cast<Eigen::Index>(dim);

  double n_thermal = spec.n_thermal;
  double r = spec.r;
  if (spec.kind == DistKind::mixed_squeezed_coherent_thermal) {
    const auto eff = oracle_effective_thermal(spec.n_thermal, spec.r);
    n_thermal = eff.n_thermal;
    r = eff.r;
  }

  std::vector<double> probs(dim, 0.0);
  if (thermal_base(spec.kind)) {
    const double ratio = n_thermal / (n_thermal + 1.0);
    const double lost = n_thermal == 0.0 ? 0.0 : std::pow(ratio, static_cast<double>(dim));
    if (lost > 1e-13) {
      std::ostringstream os;
      os << "oracle basis of " << dim << " states drops thermal weight " << lost;
      throw TruncationError(os.str(), lost);
    }
    Eigen::MatrixXcd m = detail::squeeze_operator(r, spec.psi, dim);
    if (spec.beta != 0.0) m = detail::displacement_operator(spec.beta, dim) * m;
    Eigen::VectorXd w(d);
    for (Eigen::Index k = 0; k < d; ++k)
      w(k) = (n_thermal == 0.0) ? (k == 0 ? 1.0 : 0.0)
                                : std::pow(ratio, static_cast<double>(k)) / (n_thermal + 1.0);
    const Eigen::VectorXd p = m.cwiseAbs2() * w;
    for (Eigen::Index n = 0; n < d; ++n) probs[n] = p(n);
  } else {
    const auto l = static_cast<Eigen::Index>(spec.fock_l);
    if (l >= d) throw ParameterError("oracle basis too small for the requested number state");
    Eigen::VectorXcd v = detail::squeeze_operator(r, spec.psi, dim).col(l);
    if (spec.beta != 0.0) v = detail::displacement_operator(spec.beta, dim) * v;
    for (Eigen::Index n = 0; n < d; ++n) probs[n] = std::norm(v(n));
  }

  if (probs.back() > 1e-13) {
    std::ostringstream os;
    os << "oracle basis of " << dim << " states leaves " << probs.back() << " in its last row";
    throw TruncationError(os.str(), probs.back());
  }
  for (double& p : probs)
    if (p < 1e-300) p = 0.0;
  return probs;
}

}  // namespace tcm
