#include "generating_function.hpp"

#include "tcm/error.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace tcm::detail {

namespace {

using cd = std::complex<double>;

std::vector<double> coefficients(std::vector<cd> samples, double scale) {
  Eigen::FFT<double> fft;
  std::vector<cd> spectrum;
  fft.fwd(spectrum, samples);
  std::vector<double> probs(spectrum.size());
  const double norm = scale / static_cast<double>(spectrum.size());
  for (std::size_t n = 0; n < spectrum.size(); ++n) probs[n] = spectrum[n].real() * norm;
  return probs;
}

cd unit_root(std::size_t k, std::size_t size) {
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(size));
}

}  // namespace

ColumnGeneratingFunction::ColumnGeneratingFunction(double beta, double r, double psi)
    : beta2_(beta * beta),
      e_{std::exp(2.0 * r), std::exp(-2.0 * r)},
      w22_(std::cosh(2.0 * r) - std::cos(psi) * std::sinh(2.0 * r)) {}

// F = 2 exp(-2 beta^2 (1-z)(1-y) N22 / det N) / sqrt(det N) with
// N = (1+z)(1-y) I + (1-z)(1+y) W and W the squeezed vacuum covariance (x2).
// det N = f+ f-, each factor affine in z with its zero outside the disk.
cd ColumnGeneratingFunction::operator()(cd y, cd z) const {
  const cd p = (1.0 + z) * (1.0 - y);
  const cd q = (1.0 - z) * (1.0 + y);
  cd root = 1.0;
  cd det = 1.0;
  for (double e : e_) {
    const cd c0 = (1.0 - y) + (1.0 + y) * e;
    const cd c1 = (1.0 - y) - (1.0 + y) * e;
    const cd sqrt_c0 = std::sqrt(1.0 + e) * std::sqrt(1.0 + y * ((e - 1.0) / (1.0 + e)));
    root *= sqrt_c0 * std::sqrt(1.0 + (c1 / c0) * z);
    det *= p + q * e;
  }
  const cd n22 = p + q * w22_;
  return 2.0 * std::exp(-2.0 * beta2_ * (1.0 - z) * (1.0 - y) * n22 / det) / root;
}

double ColumnGeneratingFunction::log_real(double x, double z) const {
  const double p = (1.0 + z) * (1.0 - x);
  const double q = (1.0 - z) * (1.0 + x);
  const double det = (p + q * e_[0]) * (p + q * e_[1]);
  return std::log(2.0) - 2.0 * beta2_ * (1.0 - z) * (1.0 - x) * (p + q * w22_) / det - 0.5 * std::log(det);
}

double ColumnGeneratingFunction::radius(double x) const {
  double rho = std::numeric_limits<double>::infinity();
  for (double e : e_) {
    const double c0 = (1.0 - x) + (1.0 + x) * e;
    const double c1 = (1.0 - x) - (1.0 + x) * e;
    if (c1 < 0.0) rho = std::min(rho, -c0 / c1);
  }
  return rho;
}

std::vector<double> thermal_base_probs(const ColumnGeneratingFunction& f, double x, std::size_t size) {
  std::vector<cd> samples(size);
  const auto m = static_cast<long>(size);
#pragma omp parallel for schedule(static)
  for (long k = 0; k < m; ++k) samples[k] = f(x, unit_root(static_cast<std::size_t>(k), size));
  return coefficients(std::move(samples), 1.0 - x);
}

std::vector<double> number_base_probs(const ColumnGeneratingFunction& f, int l, std::size_t size) {
  if (l == 0) return thermal_base_probs(f, 0.0, size);
  // Circle |y| = rho: rounding grows like rho^-l, aliasing like rho^ly.
  const double rho = std::max(0.5, std::pow(1e3, -1.0 / l));
  const auto ly = static_cast<std::size_t>(std::ceil(std::log(1e-20) / std::log(rho)));
  std::vector<cd> weights(ly), ys(ly);
  for (std::size_t j = 0; j < ly; ++j) {
    ys[j] = rho * unit_root(j, ly);
    weights[j] = std::conj(unit_root((j * static_cast<std::size_t>(l)) % ly, ly));
  }
  std::vector<cd> samples(size);
  const auto m = static_cast<long>(size);
#pragma omp parallel for schedule(static)
  for (long k = 0; k < m; ++k) {
    const cd z = unit_root(static_cast<std::size_t>(k), size);
    cd acc = 0.0;
    for (std::size_t j = 0; j < ly; ++j) acc += weights[j] * f(ys[j], z);
    samples[k] = acc;
  }
  return coefficients(std::move(samples), std::pow(rho, -l) / static_cast<double>(ly));
}

std::size_t tail_index(const ColumnGeneratingFunction& f, double x, int l, double bound) {
  if (l > 0) x = static_cast<double>(l) / (l + 1.0);
  // p_l(n) <= (mixture with ratio x)(n) / ((1 - x) x^l)
  const double shift = l > 0 ? static_cast<double>(l) * std::log(x) : 0.0;
  const double limit = f.radius(x);
  double best = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 40; ++k) {
    const double rho = std::isfinite(limit) ? 1.0 + (limit - 1.0) * k / 41.0 : 1.0 + 0.25 * k * k;
    const double log_g = f.log_real(x, rho);
    if (!std::isfinite(log_g)) continue;
    best = std::min(best, (log_g - shift - std::log(bound)) / std::log(rho));
  }
  if (!(best < 1e15)) throw NumericalError("generating function tail bound failed");
  return static_cast<std::size_t>(std::max(0.0, std::ceil(best)));
}

}  // namespace tcm::detail
