// generating_function.hpp: photon-number distributions of D(beta) S(xi) rho0
// S^dag D^dag from the generating function Tr[rho z^n] sampled on |z| = 1.
//
// The thermal parameter y generates the number-state columns,
//   F(y, z) = sum_{l,n} y^l z^n |<n|D S|l>|^2,
// so a thermal base with ratio x is (1 - x) F(x, z) and a number state l is
// the y^l coefficient of F.
#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace tcm::detail {

class ColumnGeneratingFunction {
 public:
  // xi = r e^{i(psi + pi)}, beta real.
  ColumnGeneratingFunction(double beta, double r, double psi);

  std::complex<double> operator()(std::complex<double> y, std::complex<double> z) const;

  // log F(x, z) for real 0 <= x < 1 and 0 < z below the first singularity.
  double log_real(double x, double z) const;

  // First singularity of F(x, .) on the positive real axis (inf if none).
  double radius(double x) const;

 private:
  double beta2_;
  double e_[2];
  double w22_;
};

// p_n for n < size from the thermal base with ratio x: (1 - x) F(x, z).
std::vector<double> thermal_base_probs(const ColumnGeneratingFunction& f, double x, std::size_t size);

// p_n for n < size from number state l: the y^l coefficient of F.
std::vector<double> number_base_probs(const ColumnGeneratingFunction& f, int l, std::size_t size);

// Smallest K with sum_{n >= K} p_n <= bound, from a Chernoff bound on the
// generating function (x = 0 for a pure base, l = 0 for a thermal base).
std::size_t tail_index(const ColumnGeneratingFunction& f, double x, int l, double bound);

}  // namespace tcm::detail
