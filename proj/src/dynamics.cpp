#include "tcm/dynamics.hpp"

#include "tcm/error.hpp"
#include "tcm/summation.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>

namespace tcm {

const char* to_string(SeriesLabel label) noexcept {
  switch (label) {
    case SeriesLabel::s1: return "S1";
    case SeriesLabel::s4: return "S4";
    case SeriesLabel::intensity: return "intensity";
  }
  return "?";
}

namespace {

class Fnv1a {
 public:
  void bytes(const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h_ ^= p[i];
      h_ *= 0x100000001b3ULL;
    }
  }
  template <typename T>
  void value(const T& v) {
    bytes(&v, sizeof(T));
  }
  std::uint64_t digest() const { return h_; }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

}  // namespace

std::string distribution_digest(const PhotonDistribution& dist) {
  Fnv1a h;
  const auto kind = to_string(dist.spec.kind);
  h.bytes(kind.data(), kind.size());
  h.value(dist.spec.beta);
  h.value(dist.spec.n_thermal);
  h.value(dist.spec.r);
  h.value(dist.spec.psi);
  h.value(dist.spec.fock_l);
  if (!dist.probs.empty()) h.bytes(dist.probs.data(), dist.probs.size() * sizeof(double));
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h.digest()));
  return buf;
}

ModeSpectrum mode_spectrum(Mode mode, const PhotonDistribution& dist, int n_tlm, double detuning,
                           const SpectrumOptions& options) {
  if (n_tlm < 1) throw ParameterError("number of TLMs must be >= 1");
  if (!std::isfinite(detuning)) throw ParameterError("detuning must be finite");

  ModeSpectrum spec;
  spec.n_tlm = n_tlm;
  spec.mode = mode;
  spec.detuning = detuning;
  spec.dist_digest = distribution_digest(dist);
  spec.amp_floor = options.amp_floor >= 0.0 ? options.amp_floor : 1e-16 * n_tlm;

  std::vector<BlockJob> jobs;
  for (std::size_t n = 0; n < dist.probs.size(); ++n) {
    if (dist.probs[n] == 0.0) continue;
    if (mode == Mode::absorption && n == 0) continue;  // vacuum block has dim 1
    jobs.push_back({static_cast<long>(n), dist.probs[n]});
  }
  TermBuild build = options.parallel
                        ? build_terms_parallel(mode, n_tlm, detuning, jobs, spec.amp_floor, options.cache)
                        : build_terms_serial(mode, n_tlm, detuning, jobs, spec.amp_floor, options.cache);
  spec.terms = std::move(build.terms);
  spec.dropped_amplitude = build.dropped_amplitude;
  spec.dropped_count = build.dropped_count;
  return spec;
}

ModeSpectrum emission_spectrum(const PhotonDistribution& dist, int n_tlm, double detuning,
                               const SpectrumOptions& options) {
  return mode_spectrum(Mode::emission, dist, n_tlm, detuning, options);
}

ModeSpectrum absorption_spectrum(const PhotonDistribution& dist, int n_tlm, double detuning,
                                 const SpectrumOptions& options) {
  return mode_spectrum(Mode::absorption, dist, n_tlm, detuning, options);
}

void check_times(std::span<const double> times) {
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!std::isfinite(times[k])) throw ParameterError("time grid contains a non-finite value");
    if (k > 0 && !(times[k] > times[k - 1])) throw ParameterError("time grid must be strictly increasing");
  }
}

std::vector<double> uniform_times(double t_max, std::size_t n) {
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw ParameterError("t_max must be finite and > 0");
  if (n < 2) throw ParameterError("need at least 2 time points");
  std::vector<double> t(n);
  const double step = t_max / static_cast<double>(n - 1);
  for (std::size_t k = 0; k < n; ++k) t[k] = step * static_cast<double>(k);
  t.back() = t_max;
  return t;
}

TimeSeries evaluate(const ModeSpectrum& spectrum, std::span<const double> times, bool parallel) {
  check_times(times);
  TimeSeries out;
  out.times.assign(times.begin(), times.end());
  out.label = spectrum.mode == Mode::emission ? SeriesLabel::s1 : SeriesLabel::s4;
  out.values = parallel ? sin2_series_parallel(spectrum.terms, times) : sin2_series_serial(spectrum.terms, times);
  return out;
}

TimeSeries intensity(const TimeSeries& series, double nbar) {
  if (series.label == SeriesLabel::intensity) throw ParameterError("series is already an intensity");
  TimeSeries out;
  out.times = series.times;
  out.label = SeriesLabel::intensity;
  out.values.resize(series.values.size());
  const double sign = series.label == SeriesLabel::s1 ? 1.0 : -1.0;
  for (std::size_t k = 0; k < series.values.size(); ++k) {
    const double v = nbar + sign * series.values[k];
    if (v < -1e-9) {
      throw InvariantViolation("negative field intensity " + std::to_string(v) + " at gamma t = " +
                               std::to_string(series.times[k]));
    }
    out.values[k] = v;
  }
  return out;
}

namespace {

TimeSeries single_tlm_sum(const PhotonDistribution& dist, std::span<const double> times, std::size_t lo,
                          std::size_t hi) {
  check_times(times);
  TimeSeries out;
  out.times.assign(times.begin(), times.end());
  out.label = SeriesLabel::s1;
  out.values.resize(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    CompensatedSum acc;
    for (std::size_t n = lo; n <= hi && n < dist.probs.size(); ++n) {
      const double s = std::sin(std::sqrt(static_cast<double>(n) + 1.0) * times[k]);
      acc += dist.probs[n] * (s * s);
    }
    out.values[k] = acc.value();
  }
  return out;
}

}  // namespace

TimeSeries s1_single_tlm_closed(const PhotonDistribution& dist, std::span<const double> times) {
  return single_tlm_sum(dist, times, 0, dist.probs.empty() ? 0 : dist.probs.size() - 1);
}

TimeSeries s1_windowed(const PhotonDistribution& dist, std::span<const double> times, double width_sigmas) {
  if (!(width_sigmas >= 0.0) || !std::isfinite(width_sigmas))
    throw ParameterError("window width must be finite and >= 0");
  const double sd = std::sqrt(std::max(0.0, dist.var_closed));
  const double lo = std::max(0.0, std::ceil(dist.mean_closed - width_sigmas * sd));
  const double hi = std::floor(dist.mean_closed + width_sigmas * sd);
  if (dist.probs.empty() || hi < lo || lo > static_cast<double>(dist.probs.size() - 1))
    throw ParameterError("photon-number window is empty");
  return single_tlm_sum(dist, times, static_cast<std::size_t>(lo), static_cast<std::size_t>(hi));
}

CapacityScan capacity_scan(int n_tlm, std::span<const double> nbars, double t_max, std::size_t t_steps,
                           const TailPolicy& policy, const SpectrumOptions& options) {
  if (nbars.size() < 3) throw ParameterError("capacity scan needs at least 3 mean photon numbers");
  const std::vector<double> times = uniform_times(t_max, t_steps);

  CapacityScan scan;
  for (double nbar : nbars) {
    if (!(nbar >= 0.0) || !std::isfinite(nbar)) throw ParameterError("mean photon numbers must be >= 0");
    DistSpec spec;
    spec.kind = DistKind::coherent;
    spec.beta = std::sqrt(nbar);
    const PhotonDistribution dist = make_distribution(spec, policy);
    const ModeSpectrum spectrum = absorption_spectrum(dist, n_tlm, 0.0, options);
    const TimeSeries s4 = evaluate(spectrum, times, options.parallel);
    const double peak = *std::max_element(s4.values.begin(), s4.values.end());
    scan.points.push_back({nbar, std::max(0.0, peak), dist.n_max(), dist.tail_mass, spectrum.dropped_amplitude});
  }

  const auto m = static_cast<Eigen::Index>(scan.points.size());
  Eigen::MatrixXd design(m, 3);
  Eigen::VectorXd rhs(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double x = scan.points[i].nbar;
    design(i, 0) = 1.0;
    design(i, 1) = x;
    design(i, 2) = x * x;
    rhs(i) = scan.points[i].max_s4;
  }
  const Eigen::VectorXd coef = design.colPivHouseholderQr().solve(rhs);
  scan.c0 = coef(0);
  scan.c1 = coef(1);
  scan.c2 = coef(2);
  const Eigen::VectorXd res = design * coef - rhs;
  scan.residual_rms = std::sqrt(res.squaredNorm() / static_cast<double>(m));
  return scan;
}

}  // namespace tcm
