// fock_basis.hpp: truncated number-basis operators shared by the Gaussian
// oracle and the squeezed-thermal mixture.
#pragma once

#include <Eigen/Dense>

#include <cstddef>

namespace tcm::detail {

// Annihilation operator, a(n-1, n) = sqrt(n).
Eigen::MatrixXcd annihilation(std::size_t dim);

// exp((xi^* a^2 - xi a^dag^2) / 2) with xi = r e^{i(psi + pi)}.
Eigen::MatrixXcd squeeze_operator(double r, double psi, std::size_t dim);

// exp(alpha a^dag - alpha^* a) for real alpha.
Eigen::MatrixXcd displacement_operator(double alpha, std::size_t dim);

}  // namespace tcm::detail
