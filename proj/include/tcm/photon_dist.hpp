// photon_dist.hpp: truncated diagonal photon-number distributions for the
// twelve single-mode field states (coherent, thermal, Fock and their
// squeezed / displaced / thermally mixed variants).
//
// Parameter conventions:
//   beta       displacement magnitude |beta| (mean coherent photons beta^2)
//   n_thermal  mean thermal photon number
//   r, psi     squeeze magnitude and phase; psi = 0 means the photon-number
//              variance of a displaced squeezed state is maximal along the
//              displacement, |beta|^2 (cosh 2r + cos(psi) sinh 2r)
//   fock_l     number state the squeeze / displacement acts on
#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tcm {

enum class DistKind {
  coherent,
  thermal,
  fock,
  mixed_coherent_thermal,
  squeezed_vacuum,
  squeezed_fock,
  squeezed_thermal,
  squeezed_coherent,
  mixed_squeezed_coherent_thermal,
  displaced_squeezed_thermal,
  displaced_fock,
  squeezed_displaced_fock,
};

inline constexpr std::array<DistKind, 12> kAllDistKinds = {
    DistKind::coherent,
    DistKind::thermal,
    DistKind::fock,
    DistKind::mixed_coherent_thermal,
    DistKind::squeezed_vacuum,
    DistKind::squeezed_fock,
    DistKind::squeezed_thermal,
    DistKind::squeezed_coherent,
    DistKind::mixed_squeezed_coherent_thermal,
    DistKind::displaced_squeezed_thermal,
    DistKind::displaced_fock,
    DistKind::squeezed_displaced_fock,
};

std::string_view to_string(DistKind kind) noexcept;
// Accepts the hyphenated names, e.g. "squeezed-thermal". Throws ParameterError.
DistKind parse_dist_kind(std::string_view name);

struct DistSpec {
  DistKind kind = DistKind::coherent;
  double beta = 0.0;
  double n_thermal = 0.0;
  double r = 0.0;
  double psi = 0.0;
  int fock_l = 0;

  bool operator==(const DistSpec&) const = default;
};

struct DistFields {
  bool beta = false;
  bool n_thermal = false;
  bool r = false;
  bool psi = false;
  bool fock_l = false;
};

// Which DistSpec fields a kind reads.
DistFields relevant_fields(DistKind kind) noexcept;

// Throws ParameterError for negative/non-finite parameters or a nonzero field
// the kind does not read.
void validate(const DistSpec& spec);

// Representative parameters for each kind.
DistSpec default_spec(DistKind kind);

struct TailPolicy {
  double tail_tol = 1e-12;
  std::optional<std::size_t> n_cap;
};

struct Moments {
  double mean = 0.0;
  double var = 0.0;
};

struct PhotonDistribution {
  std::vector<double> probs;  // index = photon number
  double tail_mass = 0.0;     // 1 - sum(probs)
  double mean_closed = 0.0;
  double var_closed = 0.0;
  DistSpec spec;

  std::size_t n_max() const noexcept { return probs.empty() ? 0 : probs.size() - 1; }
};

// Builds the distribution from its closed form where one is self-contained,
// otherwise from the generating function Tr[rho z^n]. n_max is the smallest n whose
// cumulative tail falls below policy.tail_tol.
PhotonDistribution make_distribution(const DistSpec& spec, const TailPolicy& policy = {});

// Wraps an explicit probability list (used for vacuum/test inputs).
PhotonDistribution distribution_from_probs(std::vector<double> probs, const DistSpec& spec);

Moments closed_form_moments(const DistSpec& spec);

// Moments of the renormalized truncated list. Requires tail_mass < 1e-9.
Moments empirical_moments(const PhotonDistribution& dist);

// Diagonal of D S rho0 S^dag D^dag built in a dim-dimensional truncated
// number basis from matrix exponentials of the squeeze and displacement
// generators. Thermal mixtures use a thermal rho0; the squeezed-coherent
// plus thermal-noise state uses the equivalent displaced squeezed thermal
// state (see oracle_effective_thermal). Throws TruncationError when the
// last basis row holds more than 1e-13 probability.
std::vector<double> gaussian_fock_oracle(const DistSpec& spec, std::size_t dim);

// Guard-banded basis size for a distribution needing support up to n_max.
std::size_t oracle_dim(const DistSpec& spec, std::size_t n_max);

// Squeezed-coherent state convolved with isotropic thermal noise n_thermal
// equals a displaced squeezed thermal state with these (n', r').
struct EffectiveThermal {
  double n_thermal;
  double r;
};
EffectiveThermal oracle_effective_thermal(double n_thermal, double r);

// |<n|D(beta)|l>|^2 for real beta >= 0, via the associated Laguerre form.
double displaced_fock_pn(long n, long l, double beta2);

}  // namespace tcm
