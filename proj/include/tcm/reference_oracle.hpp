// reference_oracle.hpp: brute-force check of the spectral engine: the full
// field (x) symmetric-Dicke Hamiltonian as one dense matrix, evolved exactly
// through its eigen-decomposition.
//
// Uses the same rescaling as the block matrices: diagonal -n * detuning,
// coupling sqrt(n+1) sqrt((r+m)(r-m+1)) between |n, m> and |n+1, m-1>.
#pragma once

#include "tcm/dynamics.hpp"
#include "tcm/photon_dist.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace tcm {

enum class TlmState { up, down };

struct JointSystem {
  int n_tlm = 1;
  long n_max = 0;
  double detuning = 0.0;
  Eigen::MatrixXd H;

  // Row of |n> (x) |N/2, m>, with m given doubled.
  Eigen::Index index(long n, int two_m) const { return n * (n_tlm + 1) + (two_m + n_tlm) / 2; }
  long photons(Eigen::Index row) const { return static_cast<long>(row) / (n_tlm + 1); }
  int two_m(Eigen::Index row) const { return 2 * static_cast<int>(row % (n_tlm + 1)) - n_tlm; }
};

inline constexpr long kJointDimLimit = 40000;

JointSystem build_joint(int n_tlm, long n_max, double detuning);

// Tridiagonal restriction of H to the sector with the given doubled c, in
// ascending photon order.
struct SectorMatrix {
  std::vector<double> diag;
  std::vector<double> offdiag;
};
SectorMatrix extract_sector(const JointSystem& sys, long two_c);

struct OracleRun {
  TimeSeries mean_photons;      // <a^dag a>(t)
  double max_norm_error = 0.0;  // max | ||psi(t)||^2 - 1 |
  double max_sector_leak = 0.0; // max population outside the initial sector
};

// Evolves every |n, +-N/2> with rho_nn > 0 and returns the rho-weighted
// photon number. Throws ParameterError when the truncation could leak and
// NumericalError when the norm drifts by more than 1e-10.
OracleRun evolve_photon_number(const JointSystem& sys, const PhotonDistribution& dist, TlmState tlm,
                               std::span<const double> times);

// S1 (up) or S4 (down) derived from an oracle run: <n>(t) - <n>(0) or
// <n>(0) - <n>(t).
TimeSeries oracle_exchange(const JointSystem& sys, const PhotonDistribution& dist, TlmState tlm,
                           std::span<const double> times);

}  // namespace tcm
