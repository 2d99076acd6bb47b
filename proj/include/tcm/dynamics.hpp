// dynamics.hpp: exact spectral representations of the emitted (all TLMs
// up, S1) and absorbed (all TLMs down, S4) photon numbers, their time
// series, and derived quantities.
//
// Time is the dimensionless gamma*t throughout. The |gamma/mu|^2 prefactor
// of the field intensity is never multiplied in; series are in photon units.
#pragma once

#include "tcm/kernels.hpp"
#include "tcm/photon_dist.hpp"
#include "tcm/spectral.hpp"

#include <span>
#include <string>
#include <vector>

namespace tcm {

struct ModeSpectrum {
  std::vector<SpectralTerm> terms;  // ordered by (n, j, j')
  int n_tlm = 1;
  Mode mode = Mode::emission;
  double detuning = 0.0;
  std::string dist_digest;
  double amp_floor = 0.0;
  double dropped_amplitude = 0.0;
  std::size_t dropped_count = 0;
};

enum class SeriesLabel { s1, s4, intensity };
const char* to_string(SeriesLabel label) noexcept;

struct TimeSeries {
  std::vector<double> times;
  std::vector<double> values;
  SeriesLabel label = SeriesLabel::s1;
};

struct SpectrumOptions {
  double amp_floor = -1.0;  // negative: 1e-16 * N
  bool parallel = true;
  SpectralCache* cache = nullptr;
};

// Stable identifier of a distribution's spec and probabilities (FNV-1a).
std::string distribution_digest(const PhotonDistribution& dist);

ModeSpectrum emission_spectrum(const PhotonDistribution& dist, int n_tlm, double detuning,
                               const SpectrumOptions& options = {});
ModeSpectrum absorption_spectrum(const PhotonDistribution& dist, int n_tlm, double detuning,
                                 const SpectrumOptions& options = {});
ModeSpectrum mode_spectrum(Mode mode, const PhotonDistribution& dist, int n_tlm, double detuning,
                           const SpectrumOptions& options = {});

// Throws ParameterError unless times are finite and strictly increasing.
void check_times(std::span<const double> times);

// n points from 0 to t_max inclusive.
std::vector<double> uniform_times(double t_max, std::size_t n);

TimeSeries evaluate(const ModeSpectrum& spectrum, std::span<const double> times, bool parallel = true);

// n + S1 or n - S4. Absorption intensity below -1e-9 raises
// InvariantViolation.
TimeSeries intensity(const TimeSeries& series, double nbar);

// Single-TLM resonant emission sum_n rho_n sin^2(sqrt(n+1) t).
TimeSeries s1_single_tlm_closed(const PhotonDistribution& dist, std::span<const double> times);

// The same sum restricted to n in [mean - w*sd, mean + w*sd], using the
// distribution's closed-form mean and standard deviation.
TimeSeries s1_windowed(const PhotonDistribution& dist, std::span<const double> times, double width_sigmas);

struct CapacityPoint {
  double nbar = 0.0;
  double max_s4 = 0.0;
  std::size_t n_max = 0;
  double tail_mass = 0.0;
  double dropped_amplitude = 0.0;
};

struct CapacityScan {
  std::vector<CapacityPoint> points;
  double c0 = 0.0, c1 = 0.0, c2 = 0.0;  // max_s4 ~ c0 + c1 nbar + c2 nbar^2
  double residual_rms = 0.0;
};

// Peak absorbed photon number over a uniform grid on [0, t_max] for coherent
// light of each mean photon number, with a least-squares quadratic fit.
CapacityScan capacity_scan(int n_tlm, std::span<const double> nbars, double t_max, std::size_t t_steps,
                           const TailPolicy& policy = {}, const SpectrumOptions& options = {});

}  // namespace tcm
