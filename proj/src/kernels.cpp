#include "tcm/kernels.hpp"

#include "tcm/summation.hpp"

#include <omp.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>

namespace tcm {

namespace {

constexpr std::size_t kTimeChunk = 64;

bool is_uniform(std::span<const double> times) {
  if (times.size() < 3) return false;
  const double dt = times[1] - times[0];
  const double tol = 1e-12 * std::max(1.0, std::abs(times.back()));
  for (std::size_t k = 1; k + 1 < times.size(); ++k)
    if (std::abs((times[k + 1] - times[k]) - dt) > tol) return false;
  return true;
}

inline void neumaier(double& sum, double& comp, double x) {
  const double t = sum + x;
  comp += (std::abs(sum) >= std::abs(x)) ? (sum - t) + x : (x - t) + sum;
  sum = t;
}

// One chunk of time points [begin, end).
void sin2_chunk(std::span<const SpectralTerm> terms, std::span<const double> times, std::size_t begin,
                std::size_t end, bool uniform, double* out) {
  std::array<double, kTimeChunk> sum{};
  std::array<double, kTimeChunk> comp{};
  const std::size_t len = end - begin;
  if (uniform) {
    const double t0 = times[begin];
    const double dt = times[1] - times[0];
    for (const SpectralTerm& term : terms) {
      double s = std::sin(term.omega * t0);
      double c = std::cos(term.omega * t0);
      const double sw = std::sin(term.omega * dt);
      const double cw = std::cos(term.omega * dt);
      for (std::size_t k = 0; k < len; ++k) {
        neumaier(sum[k], comp[k], term.amplitude * (s * s));
        const double s_next = s * cw + c * sw;
        c = c * cw - s * sw;
        s = s_next;
      }
    }
  } else {
    for (const SpectralTerm& term : terms) {
      for (std::size_t k = 0; k < len; ++k) {
        const double s = std::sin(term.omega * times[begin + k]);
        neumaier(sum[k], comp[k], term.amplitude * (s * s));
      }
    }
  }
  for (std::size_t k = 0; k < len; ++k) out[begin + k] = sum[k] + comp[k];
}

}  // namespace

int worker_count() { return omp_get_max_threads(); }

std::vector<double> sin2_series_serial(std::span<const SpectralTerm> terms, std::span<const double> times) {
  std::vector<double> out(times.size(), 0.0);
  for (std::size_t k = 0; k < times.size(); ++k) {
    CompensatedSum acc;
    for (const SpectralTerm& term : terms) {
      const double s = std::sin(term.omega * times[k]);
      acc += term.amplitude * (s * s);
    }
    out[k] = acc.value();
  }
  return out;
}

std::vector<double> sin2_series_parallel(std::span<const SpectralTerm> terms, std::span<const double> times) {
  std::vector<double> out(times.size(), 0.0);
  const bool uniform = is_uniform(times);
  const auto chunks = static_cast<long>((times.size() + kTimeChunk - 1) / kTimeChunk);
#pragma omp parallel for schedule(dynamic, 1)
  for (long c = 0; c < chunks; ++c) {
    const std::size_t begin = static_cast<std::size_t>(c) * kTimeChunk;
    const std::size_t end = std::min(times.size(), begin + kTimeChunk);
    sin2_chunk(terms, times, begin, end, uniform, out.data());
  }
  return out;
}

TermBuild block_terms(Mode mode, long n, double rho, const EigenSystem& eig, double amp_floor) {
  TermBuild out;
  const auto dim = static_cast<Eigen::Index>(eig.dim());
  if (dim < 2 || rho == 0.0) return out;

  // Emission starts in row 0 and counts photons gained upward; absorption
  // starts in the last row and counts photons lost downward.
  const Eigen::Index init = mode == Mode::emission ? 0 : dim - 1;
  Eigen::MatrixXd weighted = eig.A;
  for (Eigen::Index row = 0; row < dim; ++row) {
    const double p = mode == Mode::emission ? static_cast<double>(row) : static_cast<double>(dim - 1 - row);
    weighted.row(row) *= p;
  }
  const Eigen::MatrixXd w = eig.A.transpose() * weighted;

  SpectralTerm degenerate{};
  bool have_degenerate = false;
  for (Eigen::Index j = 0; j + 1 < dim; ++j) {
    for (Eigen::Index jp = j + 1; jp < dim; ++jp) {
      const double amp = -4.0 * rho * eig.A(init, j) * eig.A(init, jp) * w(j, jp);
      const double gap = std::abs(eig.q[jp] - eig.q[j]);
      if (gap < kDegenerateGap) {
        if (!have_degenerate) {
          degenerate = {0.0, 0.0, n, static_cast<int>(j), static_cast<int>(jp)};
          have_degenerate = true;
        }
        degenerate.amplitude += amp;
        continue;
      }
      if (std::abs(amp) < amp_floor) {
        out.dropped_amplitude += std::abs(amp);
        ++out.dropped_count;
        continue;
      }
      out.terms.push_back({0.5 * gap, amp, n, static_cast<int>(j), static_cast<int>(jp)});
    }
  }
  if (have_degenerate) {
    if (std::abs(degenerate.amplitude) < amp_floor) {
      out.dropped_amplitude += std::abs(degenerate.amplitude);
      ++out.dropped_count;
    } else {
      out.terms.push_back(degenerate);
      std::sort(out.terms.begin(), out.terms.end(), [](const SpectralTerm& a, const SpectralTerm& b) {
        return a.j != b.j ? a.j < b.j : a.jp < b.jp;
      });
    }
  }
  return out;
}

namespace {

TermBuild one_block(Mode mode, int n_tlm, double detuning, const BlockJob& job, double amp_floor,
                    SpectralCache* cache) {
  if (job.rho == 0.0) return {};
  if (cache) {
    const auto eig = cache->get_or_compute(mode, n_tlm, job.n, detuning);
    return block_terms(mode, job.n, job.rho, *eig, amp_floor);
  }
  const EigenSystem eig = diagonalize(block_for(mode, n_tlm, job.n, detuning));
  return block_terms(mode, job.n, job.rho, eig, amp_floor);
}

TermBuild concatenate(std::vector<TermBuild>& parts) {
  TermBuild out;
  std::size_t total = 0;
  for (const auto& p : parts) total += p.terms.size();
  out.terms.reserve(total);
  CompensatedSum dropped;
  for (auto& p : parts) {
    out.terms.insert(out.terms.end(), p.terms.begin(), p.terms.end());
    dropped += p.dropped_amplitude;
    out.dropped_count += p.dropped_count;
  }
  out.dropped_amplitude = dropped.value();
  return out;
}

}  // namespace

TermBuild build_terms_serial(Mode mode, int n_tlm, double detuning, std::span<const BlockJob> jobs,
                             double amp_floor, SpectralCache* cache) {
  std::vector<TermBuild> parts;
  parts.reserve(jobs.size());
  for (const BlockJob& job : jobs) parts.push_back(one_block(mode, n_tlm, detuning, job, amp_floor, cache));
  return concatenate(parts);
}

TermBuild build_terms_parallel(Mode mode, int n_tlm, double detuning, std::span<const BlockJob> jobs,
                               double amp_floor, SpectralCache* cache) {
  std::vector<TermBuild> parts(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  const auto count = static_cast<long>(jobs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < count; ++i) {
    try {
      parts[i] = one_block(mode, n_tlm, detuning, jobs[i], amp_floor, cache);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return concatenate(parts);
}

}  // namespace tcm
