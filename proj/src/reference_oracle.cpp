#include "tcm/reference_oracle.hpp"

#include "tcm/error.hpp"

#include <cmath>
#include <complex>
#include <sstream>

namespace tcm {

JointSystem build_joint(int n_tlm, long n_max, double detuning) {
  if (n_tlm < 1) throw ParameterError("number of TLMs must be >= 1");
  if (n_max < 0) throw ParameterError("n_max must be >= 0");
  if (!std::isfinite(detuning)) throw ParameterError("detuning must be finite");
  const long dim = (n_max + 1) * (n_tlm + 1);
  if (dim > kJointDimLimit) {
    std::ostringstream os;
    os << "joint space of dimension " << dim << " exceeds the limit " << kJointDimLimit;
    throw ParameterError(os.str());
  }

  JointSystem sys;
  sys.n_tlm = n_tlm;
  sys.n_max = n_max;
  sys.detuning = detuning;
  sys.H = Eigen::MatrixXd::Zero(dim, dim);
  const int two_r = n_tlm;
  for (long n = 0; n <= n_max; ++n) {
    for (int two_m = -two_r; two_m <= two_r; two_m += 2) {
      const Eigen::Index row = sys.index(n, two_m);
      const double d = -static_cast<double>(n) * detuning;
      sys.H(row, row) = d == 0.0 ? 0.0 : d;
      // a^dag R_- : |n, m> -> |n+1, m-1>
      if (n < n_max && two_m > -two_r) {
        const double spin = static_cast<double>((two_r + two_m) * (two_r - two_m + 2)) / 4.0;
        const double g = std::sqrt(static_cast<double>(n + 1)) * std::sqrt(spin);
        const Eigen::Index col = sys.index(n + 1, two_m - 2);
        sys.H(col, row) = g;
        sys.H(row, col) = g;
      }
    }
  }
  return sys;
}

SectorMatrix extract_sector(const JointSystem& sys, long two_c) {
  std::vector<Eigen::Index> rows;
  for (long n = 0; n <= sys.n_max; ++n) {
    const long two_m = two_c - 2 * n;
    if (two_m < -sys.n_tlm || two_m > sys.n_tlm) continue;
    rows.push_back(sys.index(n, static_cast<int>(two_m)));
  }
  SectorMatrix s;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    s.diag.push_back(sys.H(rows[k], rows[k]));
    if (k + 1 < rows.size()) s.offdiag.push_back(sys.H(rows[k], rows[k + 1]));
  }
  return s;
}

OracleRun evolve_photon_number(const JointSystem& sys, const PhotonDistribution& dist, TlmState tlm,
                               std::span<const double> times) {
  check_times(times);
  long support = -1;
  for (std::size_t n = 0; n < dist.probs.size(); ++n)
    if (dist.probs[n] != 0.0) support = static_cast<long>(n);
  const long reach = tlm == TlmState::up ? support + sys.n_tlm : support;
  if (reach > sys.n_max) {
    std::ostringstream os;
    os << "field truncation n_max=" << sys.n_max << " cannot hold photon number " << reach;
    throw ParameterError(os.str());
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sys.H);
  if (solver.info() != Eigen::Success) throw NumericalError("dense eigensolver failed in reference oracle");
  const Eigen::VectorXd& energy = solver.eigenvalues();
  const Eigen::MatrixXd& vecs = solver.eigenvectors();
  const Eigen::Index dim = sys.H.rows();
  const auto steps = static_cast<Eigen::Index>(times.size());

  Eigen::VectorXd photons(dim);
  Eigen::VectorXi two_c(dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    photons(k) = static_cast<double>(sys.photons(k));
    two_c(k) = static_cast<int>(2 * sys.photons(k) + sys.two_m(k));
  }

  OracleRun run;
  run.mean_photons.times.assign(times.begin(), times.end());
  run.mean_photons.label = SeriesLabel::intensity;
  std::vector<double> mean(times.size(), 0.0);

  const int two_m0 = tlm == TlmState::up ? sys.n_tlm : -sys.n_tlm;
  for (long n = 0; n <= support; ++n) {
    const double rho = dist.probs[n];
    if (rho == 0.0) continue;
    const Eigen::Index start = sys.index(n, two_m0);
    const int sector = static_cast<int>(2 * n + two_m0);
    const Eigen::VectorXd overlap = vecs.row(start).transpose();

    Eigen::MatrixXcd phases(dim, steps);
    for (Eigen::Index t = 0; t < steps; ++t)
      for (Eigen::Index j = 0; j < dim; ++j)
        phases(j, t) = overlap(j) * std::polar(1.0, -energy(j) * times[t]);
    const Eigen::MatrixXcd psi = vecs.cast<std::complex<double>>() * phases;

    for (Eigen::Index t = 0; t < steps; ++t) {
      double norm = 0.0, n_avg = 0.0, leak = 0.0;
      for (Eigen::Index k = 0; k < dim; ++k) {
        const double pk = std::norm(psi(k, t));
        norm += pk;
        n_avg += photons(k) * pk;
        if (two_c(k) != sector) leak += pk;
      }
      run.max_norm_error = std::max(run.max_norm_error, std::abs(norm - 1.0));
      run.max_sector_leak = std::max(run.max_sector_leak, leak);
      mean[t] += rho * n_avg;
    }
  }
  if (run.max_norm_error > 1e-10) {
    std::ostringstream os;
    os << "reference oracle lost norm " << run.max_norm_error;
    throw NumericalError(os.str());
  }
  run.mean_photons.values = std::move(mean);
  return run;
}

TimeSeries oracle_exchange(const JointSystem& sys, const PhotonDistribution& dist, TlmState tlm,
                           std::span<const double> times) {
  const OracleRun run = evolve_photon_number(sys, dist, tlm, times);
  double n0 = 0.0;
  for (std::size_t n = 0; n < dist.probs.size(); ++n) n0 += static_cast<double>(n) * dist.probs[n];
  TimeSeries out;
  out.times = run.mean_photons.times;
  out.label = tlm == TlmState::up ? SeriesLabel::s1 : SeriesLabel::s4;
  out.values.resize(out.times.size());
  for (std::size_t k = 0; k < out.values.size(); ++k) {
    const double v = run.mean_photons.values[k];
    out.values[k] = tlm == TlmState::up ? v - n0 : n0 - v;
  }
  return out;
}

}  // namespace tcm
