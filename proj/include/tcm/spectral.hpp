// spectral.hpp: invariant (r, c) blocks of the Tavis-Cummings Hamiltonian
// and their eigen-decompositions.
//
// Every block is written in the basis |n>|r, c-n> with r = N/2. The stored
// matrix is the rescaled operator (c - H) / |kappa|, so its eigenvalues are
// the effective eigenvalues q and time enters only through gamma*t.
// Half-integers (r, c, m) are carried as doubled integers.
#pragma once

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <tuple>
#include <vector>

namespace tcm {

using Rational = boost::multiprecision::cpp_rational;

enum class Mode { emission, absorption };

const char* to_string(Mode mode) noexcept;

struct TCBlock {
  int n_tlm = 1;
  int two_r = 1;   // 2r, always N here
  long two_c = 1;  // 2c, c = n + m
  long n_min = 0;  // photon number of row 0
  double detuning = 0.0;
  std::vector<double> diag;
  std::vector<double> offdiag;

  std::size_t dim() const noexcept { return diag.size(); }
  std::string describe() const;
};

struct EigenSystem {
  std::vector<double> q;  // ascending
  Eigen::MatrixXd A;      // column j is the eigenvector of q[j]
  std::size_t dim() const noexcept { return q.size(); }
};

// P(r) = N!(2r+1) / ((N/2 + r + 1)! (N/2 - r)!), exact.
Rational multiplicity(int n_tlm, int two_r);

struct MultiplicityTable {
  int n_tlm = 0;
  std::map<int, Rational> values;  // keyed by 2r
};

MultiplicityTable multiplicity_table(int n_tlm);

// General fully-symmetric block (r = N/2) for doubled c. Throws
// ParameterError when c + r < 0.
TCBlock make_block(int n_tlm, long two_c, double detuning);

// Block reached from |n> with all TLMs up: c = n + N/2, photons n..n+N.
TCBlock emission_block(int n_tlm, long n, double detuning);

// Block reached from |n> with all TLMs down: c = n - N/2, photons
// max(0, n-N)..n.
TCBlock absorption_block(int n_tlm, long n, double detuning);

TCBlock block_for(Mode mode, int n_tlm, long n, double detuning);

// Full eigen-decomposition: ascending q, first nonzero component of every
// eigenvector positive, orthonormality residual below 1e-12 * dim.
EigenSystem diagonalize(const TCBlock& block);

// max |A^T A - I|
double orthonormality_residual(const Eigen::MatrixXd& A);

// Read-through cache of diagonalized blocks keyed by (N, n, detuning, mode).
// Safe for concurrent lookup and insert; a racing insert of the same key
// overwrites the earlier entry.
class SpectralCache {
 public:
  std::shared_ptr<const EigenSystem> get_or_compute(Mode mode, int n_tlm, long n,
                                                    double detuning);
  std::shared_ptr<const EigenSystem> find(Mode mode, int n_tlm, long n,
                                          double detuning) const;
  void insert(Mode mode, int n_tlm, long n, double detuning,
              std::shared_ptr<const EigenSystem> eig);
  std::size_t size() const;
  void clear();

 private:
  using Key = std::tuple<int, int, long, double>;
  mutable std::shared_mutex mutex_;
  std::map<Key, std::shared_ptr<const EigenSystem>> entries_;
};

}  // namespace tcm
