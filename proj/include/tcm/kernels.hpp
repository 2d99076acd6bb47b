// kernels.hpp: hot loops of the engine, each in an OpenMP-parallel form and
// a plain serial reference form kept for tests and benchmarks.
//
// Both forms are deterministic: work is split into fixed chunks that do not
// depend on the thread count, and every reduction runs in a fixed order.
#pragma once

#include "tcm/spectral.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace tcm {

struct SpectralTerm {
  double omega = 0.0;      // |q_j - q_j'| / 2
  double amplitude = 0.0;  // folded -4 rho_nn A A sum_p p A A
  long n = 0;              // initial photon number
  int j = 0;
  int jp = 0;
};

// value(t) = sum_terms amplitude * sin^2(omega * t), Neumaier-summed in term
// order. The parallel form splits the time axis into fixed chunks and, on a
// uniform grid, advances e^{i omega t} by rotation inside a chunk.
std::vector<double> sin2_series_serial(std::span<const SpectralTerm> terms,
                                       std::span<const double> times);
std::vector<double> sin2_series_parallel(std::span<const SpectralTerm> terms,
                                         std::span<const double> times);

struct BlockJob {
  long n;
  double rho;
};

struct TermBuild {
  std::vector<SpectralTerm> terms;  // ordered by (n, j, j')
  double dropped_amplitude = 0.0;   // sum of |amplitude| below the floor
  std::size_t dropped_count = 0;
};

// Pairs with |q_j - q_j'| below this merge into one zero-frequency term.
inline constexpr double kDegenerateGap = 1e-13;

// Terms contributed by the block reached from photon number n with weight
// rho. Pairs with |amplitude| < amp_floor are dropped.
TermBuild block_terms(Mode mode, long n, double rho, const EigenSystem& eig, double amp_floor);

// Diagonalize every block and assemble its terms; the parallel form runs
// one block per task and concatenates results in job order.
TermBuild build_terms_serial(Mode mode, int n_tlm, double detuning, std::span<const BlockJob> jobs,
                             double amp_floor, SpectralCache* cache = nullptr);
TermBuild build_terms_parallel(Mode mode, int n_tlm, double detuning, std::span<const BlockJob> jobs,
                               double amp_floor, SpectralCache* cache = nullptr);

// Number of OpenMP workers a parallel kernel will use.
int worker_count();

}  // namespace tcm
