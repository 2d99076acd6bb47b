#include "tcm/spectral.hpp"

#include "tcm/error.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>

namespace tcm {

const char* to_string(Mode mode) noexcept {
  return mode == Mode::emission ? "emission" : "absorption";
}

std::string TCBlock::describe() const {
  std::ostringstream os;
  os << "block(N=" << n_tlm << ", 2r=" << two_r << ", 2c=" << two_c
     << ", n_min=" << n_min << ", dim=" << dim() << ", detuning=" << detuning << ")";
  return os.str();
}

namespace {

boost::multiprecision::cpp_int factorial(int k) {
  boost::multiprecision::cpp_int f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

void check_tlm_count(int n_tlm) {
  if (n_tlm < 1) throw ParameterError("number of TLMs must be >= 1, got " + std::to_string(n_tlm));
}

}  // namespace

Rational multiplicity(int n_tlm, int two_r) {
  check_tlm_count(n_tlm);
  if (two_r < 0 || two_r > n_tlm || (n_tlm - two_r) % 2 != 0) {
    throw ParameterError("multiplicity: invalid cooperation number 2r=" + std::to_string(two_r) +
                         " for N=" + std::to_string(n_tlm));
  }
  const int upper = (n_tlm + two_r) / 2 + 1;  // N/2 + r + 1
  const int lower = (n_tlm - two_r) / 2;      // N/2 - r
  Rational num{factorial(n_tlm) * (two_r + 1)};
  Rational den{factorial(upper) * factorial(lower)};
  return num / den;
}

MultiplicityTable multiplicity_table(int n_tlm) {
  check_tlm_count(n_tlm);
  MultiplicityTable table;
  table.n_tlm = n_tlm;
  for (int two_r = n_tlm; two_r >= 0; two_r -= 2) table.values.emplace(two_r, multiplicity(n_tlm, two_r));
  return table;
}

TCBlock make_block(int n_tlm, long two_c, double detuning) {
  check_tlm_count(n_tlm);
  if (!std::isfinite(detuning)) throw ParameterError("detuning must be finite");
  const long two_r = n_tlm;
  if ((two_c - two_r) % 2 != 0) throw ParameterError("2c and 2r must have equal parity");
  if (two_c + two_r < 0) throw ParameterError("block with c + r < 0 is empty");

  TCBlock block;
  block.n_tlm = n_tlm;
  block.two_r = n_tlm;
  block.two_c = two_c;
  block.detuning = detuning;
  block.n_min = std::max(0L, (two_c - two_r) / 2);
  const long dim = std::min(two_r, (two_c + two_r) / 2) + 1;

  block.diag.resize(static_cast<std::size_t>(dim));
  block.offdiag.resize(static_cast<std::size_t>(dim - 1));
  for (long k = 0; k < dim; ++k) {
    const double photons = static_cast<double>(block.n_min + k);
    const double v = -photons * detuning;
    block.diag[k] = v == 0.0 ? 0.0 : v;  // no -0.0
  }
  for (long k = 0; k + 1 < dim; ++k) {
    // m of the state holding one more photon than row k
    const long two_m = two_c - 2 * (block.n_min + k) - 2;
    const double spin = static_cast<double>((two_r - two_m) * (two_r + two_m + 2)) / 4.0;
    block.offdiag[k] = std::sqrt(static_cast<double>(block.n_min + k + 1)) * std::sqrt(spin);
  }
  return block;
}

TCBlock emission_block(int n_tlm, long n, double detuning) {
  if (n < 0) throw ParameterError("photon number must be >= 0");
  return make_block(n_tlm, 2 * n + n_tlm, detuning);
}

TCBlock absorption_block(int n_tlm, long n, double detuning) {
  if (n < 0) throw ParameterError("photon number must be >= 0");
  return make_block(n_tlm, 2 * n - n_tlm, detuning);
}

TCBlock block_for(Mode mode, int n_tlm, long n, double detuning) {
  return mode == Mode::emission ? emission_block(n_tlm, n, detuning)
                                : absorption_block(n_tlm, n, detuning);
}

double orthonormality_residual(const Eigen::MatrixXd& A) {
  const Eigen::MatrixXd G = A.transpose() * A - Eigen::MatrixXd::Identity(A.cols(), A.cols());
  return G.cwiseAbs().maxCoeff();
}

EigenSystem diagonalize(const TCBlock& block) {
  const auto dim = static_cast<Eigen::Index>(block.dim());
  if (dim < 1 || block.offdiag.size() + 1 != block.dim())
    throw ParameterError("malformed " + block.describe());

  EigenSystem out;
  if (dim == 1) {
    out.q = {block.diag[0]};
    out.A = Eigen::MatrixXd::Ones(1, 1);
    return out;
  }

  const Eigen::Map<const Eigen::VectorXd> d(block.diag.data(), dim);
  const Eigen::Map<const Eigen::VectorXd> e(block.offdiag.data(), dim - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success)
    throw NumericalError("tridiagonal eigensolver did not converge for " + block.describe());

  out.q.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + dim);
  out.A = solver.eigenvectors();
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index k = 0; k < dim; ++k) {
      const double v = out.A(k, j);
      if (v != 0.0) {
        if (v < 0.0) out.A.col(j) *= -1.0;
        break;
      }
    }
  }

  const double residual = orthonormality_residual(out.A);
  if (!(residual < 1e-12 * static_cast<double>(dim))) {
    std::ostringstream os;
    os << "eigenvectors lost orthonormality (residual " << residual << ") for " << block.describe();
    throw NumericalError(os.str());
  }
  return out;
}

std::shared_ptr<const EigenSystem> SpectralCache::find(Mode mode, int n_tlm, long n,
                                                       double detuning) const {
  std::shared_lock lock(mutex_);
  const auto it = entries_.find(Key{static_cast<int>(mode), n_tlm, n, detuning});
  return it == entries_.end() ? nullptr : it->second;
}

void SpectralCache::insert(Mode mode, int n_tlm, long n, double detuning,
                           std::shared_ptr<const EigenSystem> eig) {
  std::unique_lock lock(mutex_);
  entries_.insert_or_assign(Key{static_cast<int>(mode), n_tlm, n, detuning}, std::move(eig));
}

std::shared_ptr<const EigenSystem> SpectralCache::get_or_compute(Mode mode, int n_tlm, long n,
                                                                 double detuning) {
  if (auto hit = find(mode, n_tlm, n, detuning)) return hit;
  auto eig = std::make_shared<const EigenSystem>(diagonalize(block_for(mode, n_tlm, n, detuning)));
  insert(mode, n_tlm, n, detuning, eig);
  return eig;
}

std::size_t SpectralCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

void SpectralCache::clear() {
  std::unique_lock lock(mutex_);
  entries_.clear();
}

}  // namespace tcm
