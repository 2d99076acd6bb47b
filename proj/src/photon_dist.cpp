#include "tcm/photon_dist.hpp"

#include "generating_function.hpp"
#include "tcm/error.hpp"
#include "tcm/summation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <sstream>

namespace tcm {

namespace {

struct KindName {
  DistKind kind;
  std::string_view name;
};

constexpr KindName kKindNames[] = {
    {DistKind::coherent, "coherent"},
    {DistKind::thermal, "thermal"},
    {DistKind::fock, "fock"},
    {DistKind::mixed_coherent_thermal, "mixed-coherent-thermal"},
    {DistKind::squeezed_vacuum, "squeezed-vacuum"},
    {DistKind::squeezed_fock, "squeezed-fock"},
    {DistKind::squeezed_thermal, "squeezed-thermal"},
    {DistKind::squeezed_coherent, "squeezed-coherent"},
    {DistKind::mixed_squeezed_coherent_thermal, "mixed-squeezed-coherent-thermal"},
    {DistKind::displaced_squeezed_thermal, "displaced-squeezed-thermal"},
    {DistKind::displaced_fock, "displaced-fock"},
    {DistKind::squeezed_displaced_fock, "squeezed-displaced-fock"},
};

constexpr double kFlushBelow = 1e-300;
constexpr double kNegativeClamp = -1e-14;
constexpr std::size_t kDefaultSequentialCap = 1'000'000;
constexpr std::size_t kMaxTransform = std::size_t{1} << 24;
constexpr double kAliasBound = 1e-20;

double log_factorial(long n) { return std::lgamma(static_cast<double>(n) + 1.0); }

double clean_probability(double p, long n) {
  if (std::isnan(p)) throw NumericalError("NaN probability at n=" + std::to_string(n));
  if (p < 0.0) {
    if (p < kNegativeClamp) {
      std::ostringstream os;
      os << "negative probability " << p << " at n=" << n;
      throw NumericalError(os.str());
    }
    return 0.0;
  }
  return p < kFlushBelow ? 0.0 : p;
}

// --- closed forms ---------------------------------------------------------

double coherent_pn(long n, double beta) {
  if (beta == 0.0) return n == 0 ? 1.0 : 0.0;
  const double b2 = beta * beta;
  return std::exp(-b2 + 2.0 * static_cast<double>(n) * std::log(beta) - log_factorial(n));
}

double thermal_pn(long n, double nbar) {
  if (nbar == 0.0) return n == 0 ? 1.0 : 0.0;
  return std::exp(static_cast<double>(n) * std::log(nbar / (nbar + 1.0))) / (nbar + 1.0);
}

// e^{-b^2/(nT+1)}/(nT+1) (nT/(nT+1))^n L_n(-b^2/(nT(nT+1))), expanded into
// positive terms and summed in log space so nT -> 0 stays finite.
double mixed_coherent_thermal_pn(long n, double beta, double nbar) {
  if (nbar == 0.0) return coherent_pn(n, beta);
  if (beta == 0.0) return thermal_pn(n, nbar);
  const double b2 = beta * beta;
  const double log_b2 = std::log(b2);
  const double log_nbar = std::log(nbar);
  const double log_np1 = std::log1p(nbar);
  std::vector<double> logs(static_cast<std::size_t>(n) + 1);
  double top = -INFINITY;
  for (long k = 0; k <= n; ++k) {
    const double lt = log_factorial(n) - log_factorial(k) - log_factorial(n - k) - log_factorial(k) +
                      static_cast<double>(k) * log_b2 + static_cast<double>(n - k) * log_nbar -
                      static_cast<double>(n + k) * log_np1;
    logs[k] = lt;
    top = std::max(top, lt);
  }
  CompensatedSum s;
  for (double lt : logs) s += std::exp(lt - top);
  return std::exp(-b2 / (nbar + 1.0) - log_np1 + top + std::log(s.value()));
}

double squeezed_vacuum_pn(long n, double r) {
  if (r == 0.0) return n == 0 ? 1.0 : 0.0;
  if (n % 2 != 0) return 0.0;
  const long k = n / 2;
  return std::exp(static_cast<double>(n) * std::log(0.5 * std::tanh(r)) + log_factorial(n) -
                  2.0 * log_factorial(k) - std::log(std::cosh(r)));
}

// Squeezed coherent state through a rescaled Hermite recurrence:
// p_n = N1 |g_n|^2 with g_n = tanh(r)^{n/2} H_n(z) / sqrt(2^n n!).
class SqueezedCoherentSeries {
 public:
  SqueezedCoherentSeries(double beta, double r, double psi)
      : w2_(std::tanh(r)),
        log_norm_(-beta * beta * (1.0 - std::cos(psi) * std::tanh(r)) - std::log(std::cosh(r))) {
    const double theta = psi + std::numbers::pi;
    zw_ = (beta / std::numbers::sqrt2) *
          (std::polar(1.0, -0.5 * theta) + std::polar(w2_, 0.5 * theta));
  }

  double next() {
    std::complex<double> g;
    if (n_ == 0) {
      g = 1.0;
    } else {
      const double k = static_cast<double>(n_ - 1);
      g = zw_ * std::sqrt(2.0 / (k + 1.0)) * cur_ - w2_ * std::sqrt(k / (k + 1.0)) * prev_;
    }
    prev_ = cur_;
    cur_ = g;
    const double mag = std::abs(cur_);
    if (mag > 1e100) {
      cur_ /= mag;
      prev_ /= mag;
      log_scale_ += std::log(mag);
    }
    ++n_;
    if (cur_ == 0.0) return 0.0;
    return std::exp(log_norm_ + 2.0 * log_scale_ + 2.0 * std::log(std::abs(cur_)));
  }

 private:
  double w2_;
  double log_norm_;
  std::complex<double> zw_;
  std::complex<double> prev_ = 0.0;
  std::complex<double> cur_ = 0.0;
  double log_scale_ = 0.0;
  long n_ = 0;
};

// --- truncation drivers ---------------------------------------------------

std::size_t effective_cap(const TailPolicy& policy, std::size_t fallback) {
  return policy.n_cap ? *policy.n_cap : fallback;
}

std::string tail_message(const DistSpec& spec, double achieved, double tol) {
  std::ostringstream os;
  os << to_string(spec.kind) << ": tail mass " << achieved << " above tolerance " << tol
     << " at the truncation cap";
  return os.str();
}

std::vector<double> truncate_sequential(const DistSpec& spec, const TailPolicy& policy,
                                        const std::function<double(long)>& pn) {
  const std::size_t cap = effective_cap(policy, kDefaultSequentialCap);
  std::vector<double> probs;
  CompensatedSum cum;
  double tail = 1.0;
  for (std::size_t n = 0; n <= cap; ++n) {
    const double p = clean_probability(pn(static_cast<long>(n)), static_cast<long>(n));
    probs.push_back(p);
    cum += p;
    tail = 1.0 - cum.value();
    if (tail < policy.tail_tol) return probs;
  }
  throw TruncationError(tail_message(spec, tail, policy.tail_tol), tail);
}

// Gaussian kinds and their number-state variants through the generating
// function; the transform length keeps the aliased tail below kAliasBound.
std::vector<double> truncate_generating(const DistSpec& spec, const TailPolicy& policy) {
  double r = spec.r;
  double nbar = spec.n_thermal;
  if (spec.kind == DistKind::mixed_squeezed_coherent_thermal) {
    const EffectiveThermal eff = oracle_effective_thermal(spec.n_thermal, spec.r);
    r = eff.r;
    nbar = eff.n_thermal;
  }
  const bool number_base = spec.kind == DistKind::squeezed_fock || spec.kind == DistKind::squeezed_displaced_fock;
  const double x = number_base ? 0.0 : nbar / (nbar + 1.0);
  const int l = number_base ? spec.fock_l : 0;
  const detail::ColumnGeneratingFunction f(spec.beta, r, spec.psi);

  const std::size_t cap = effective_cap(policy, kDefaultSequentialCap);
  const std::size_t reach = detail::tail_index(f, x, l, kAliasBound);
  if (reach >= kMaxTransform) {
    const double tail = 1.0;
    throw TruncationError(tail_message(spec, tail, policy.tail_tol), tail);
  }
  const std::size_t size = std::max<std::size_t>(64, std::bit_ceil(reach + 1));
  std::vector<double> probs = number_base ? detail::number_base_probs(f, l, size)
                                          : detail::thermal_base_probs(f, x, size);
  const bool parity = number_base && spec.beta == 0.0;
  CompensatedSum cum;
  double tail = 1.0;
  for (std::size_t n = 0; n < probs.size() && n <= cap; ++n) {
    if (parity && (n + static_cast<std::size_t>(l)) % 2 != 0) probs[n] = 0.0;
    probs[n] = clean_probability(probs[n], static_cast<long>(n));
    cum += probs[n];
    tail = 1.0 - cum.value();
    if (tail < policy.tail_tol) {
      probs.resize(n + 1);
      return probs;
    }
  }
  throw TruncationError(tail_message(spec, tail, policy.tail_tol), tail);
}

void check_nonneg_finite(double v, const char* name) {
  if (!std::isfinite(v) || v < 0.0)
    throw ParameterError(std::string(name) + " must be finite and >= 0");
}

}  // namespace

std::string_view to_string(DistKind kind) noexcept {
  for (const auto& kn : kKindNames)
    if (kn.kind == kind) return kn.name;
  return "unknown";
}

DistKind parse_dist_kind(std::string_view name) {
  for (const auto& kn : kKindNames)
    if (kn.name == name) return kn.kind;
  throw ParameterError("unknown distribution kind '" + std::string(name) + "'");
}

DistFields relevant_fields(DistKind kind) noexcept {
  switch (kind) {
    case DistKind::coherent: return {.beta = true};
    case DistKind::thermal: return {.n_thermal = true};
    case DistKind::fock: return {.fock_l = true};
    case DistKind::mixed_coherent_thermal: return {.beta = true, .n_thermal = true};
    case DistKind::squeezed_vacuum: return {.r = true};
    case DistKind::squeezed_fock: return {.r = true, .fock_l = true};
    case DistKind::squeezed_thermal: return {.n_thermal = true, .r = true};
    case DistKind::squeezed_coherent: return {.beta = true, .r = true, .psi = true};
    case DistKind::mixed_squeezed_coherent_thermal:
    case DistKind::displaced_squeezed_thermal:
      return {.beta = true, .n_thermal = true, .r = true, .psi = true};
    case DistKind::displaced_fock: return {.beta = true, .fock_l = true};
    case DistKind::squeezed_displaced_fock: return {.beta = true, .r = true, .psi = true, .fock_l = true};
  }
  return {};
}

void validate(const DistSpec& spec) {
  const DistFields f = relevant_fields(spec.kind);
  check_nonneg_finite(spec.beta, "beta");
  check_nonneg_finite(spec.n_thermal, "n_thermal");
  check_nonneg_finite(spec.r, "r");
  if (!std::isfinite(spec.psi)) throw ParameterError("psi must be finite");
  if (spec.fock_l < 0) throw ParameterError("fock_l must be >= 0");
  const auto name = std::string(to_string(spec.kind));
  if (!f.beta && spec.beta != 0.0) throw ParameterError("beta is not a parameter of " + name);
  if (!f.n_thermal && spec.n_thermal != 0.0) throw ParameterError("n_thermal is not a parameter of " + name);
  if (!f.r && spec.r != 0.0) throw ParameterError("r is not a parameter of " + name);
  if (!f.psi && spec.psi != 0.0) throw ParameterError("psi is not a parameter of " + name);
  if (!f.fock_l && spec.fock_l != 0) throw ParameterError("fock_l is not a parameter of " + name);
}

DistSpec default_spec(DistKind kind) {
  DistSpec s;
  s.kind = kind;
  const DistFields f = relevant_fields(kind);
  if (f.beta) s.beta = 2.0;
  if (f.n_thermal) s.n_thermal = 1.0;
  if (f.r) s.r = 0.5;
  if (f.fock_l) s.fock_l = kind == DistKind::fock ? 3 : 2;
  return s;
}

Moments closed_form_moments(const DistSpec& spec) {
  validate(spec);
  const double b2 = spec.beta * spec.beta;
  const double nt = spec.n_thermal;
  const double l = spec.fock_l;
  const double sh2 = std::pow(std::sinh(spec.r), 2);
  const double sh2_2r = std::pow(std::sinh(2.0 * spec.r), 2);
  const double quad = std::cosh(2.0 * spec.r) + std::cos(spec.psi) * std::sinh(2.0 * spec.r);
  switch (spec.kind) {
    case DistKind::coherent: return {b2, b2};
    case DistKind::thermal: return {nt, nt * nt + nt};
    case DistKind::fock: return {l, 0.0};
    case DistKind::mixed_coherent_thermal: return {b2 + nt, b2 * (1.0 + 2.0 * nt) + nt * nt + nt};
    case DistKind::squeezed_vacuum: return {sh2, sh2_2r / 2.0};
    case DistKind::squeezed_fock: return {l + (2.0 * l + 1.0) * sh2, 0.5 * (l * l + l + 1.0) * sh2_2r};
    case DistKind::squeezed_thermal:
      return {nt + (2.0 * nt + 1.0) * sh2, -0.25 + (nt + 0.5) * (nt + 0.5) * std::cosh(4.0 * spec.r)};
    case DistKind::squeezed_coherent: return {sh2 + b2, b2 * quad + sh2_2r / 2.0};
    case DistKind::mixed_squeezed_coherent_thermal:
      return {sh2 + b2 + nt, b2 * quad + sh2_2r / 2.0 + 2.0 * nt * (sh2 + b2) + nt * nt + nt};
    case DistKind::displaced_squeezed_thermal:
      return {nt + (2.0 * nt + 1.0) * sh2 + b2,
              -0.25 + b2 * (1.0 + 2.0 * nt) * quad + (nt + 0.5) * (nt + 0.5) * std::cosh(4.0 * spec.r)};
    case DistKind::displaced_fock: return {l + b2, (2.0 * l + 1.0) * b2};
    case DistKind::squeezed_displaced_fock:
      return {b2 + (2.0 * l + 1.0) * sh2 + l, b2 * quad * (2.0 * l + 1.0) + 0.5 * (l * l + l + 1.0) * sh2_2r};
  }
  return {};
}

double displaced_fock_pn(long n, long l, double beta2) {
  if (n < 0 || l < 0) throw ParameterError("displaced_fock_pn: photon numbers must be >= 0");
  check_nonneg_finite(beta2, "beta2");
  if (beta2 == 0.0) return n == l ? 1.0 : 0.0;
  const long lo = std::min(n, l);
  const long hi = std::max(n, l);
  const double a = static_cast<double>(hi - lo);
  const double x = beta2;

  // L_lo^{(a)}(x) by the three-term recurrence in degree, rescaled.
  double prev = 0.0;
  double cur = 1.0;
  double log_scale = 0.0;
  for (long k = 0; k < lo; ++k) {
    const double kk = static_cast<double>(k);
    const double next = ((2.0 * kk + 1.0 + a - x) * cur - (kk + a) * prev) / (kk + 1.0);
    prev = cur;
    cur = next;
    const double mag = std::abs(cur);
    if (mag > 1e150) {
      cur /= mag;
      prev /= mag;
      log_scale += std::log(mag);
    }
  }
  if (cur == 0.0) return 0.0;
  const double log_p = log_factorial(lo) - log_factorial(hi) + a * std::log(x) - x +
                       2.0 * (log_scale + std::log(std::abs(cur)));
  if (!std::isfinite(log_p) || log_p > 1e-9) {
    std::ostringstream os;
    os << "displaced_fock_pn overflow at n=" << n << ", l=" << l << ", beta2=" << beta2;
    throw NumericalError(os.str());
  }
  return std::exp(log_p);
}

PhotonDistribution distribution_from_probs(std::vector<double> probs, const DistSpec& spec) {
  PhotonDistribution d;
  CompensatedSum s;
  for (std::size_t n = 0; n < probs.size(); ++n) {
    probs[n] = clean_probability(probs[n], static_cast<long>(n));
    s += probs[n];
  }
  if (s.value() > 1.0 + 1e-12) throw NumericalError("probabilities sum above 1");
  d.probs = std::move(probs);
  d.tail_mass = std::max(0.0, 1.0 - s.value());
  const Moments m = closed_form_moments(spec);
  d.mean_closed = m.mean;
  d.var_closed = m.var;
  d.spec = spec;
  return d;
}

PhotonDistribution make_distribution(const DistSpec& spec, const TailPolicy& policy) {
  validate(spec);
  if (!(policy.tail_tol > 0.0)) throw ParameterError("tail_tol must be > 0");

  std::vector<double> probs;
  switch (spec.kind) {
    case DistKind::coherent:
      probs = truncate_sequential(spec, policy, [&](long n) { return coherent_pn(n, spec.beta); });
      break;
    case DistKind::thermal:
      probs = truncate_sequential(spec, policy, [&](long n) { return thermal_pn(n, spec.n_thermal); });
      break;
    case DistKind::fock:
      probs = truncate_sequential(spec, policy, [&](long n) { return n == spec.fock_l ? 1.0 : 0.0; });
      break;
    case DistKind::mixed_coherent_thermal:
      probs = truncate_sequential(
          spec, policy, [&](long n) { return mixed_coherent_thermal_pn(n, spec.beta, spec.n_thermal); });
      break;
    case DistKind::squeezed_vacuum:
      probs = truncate_sequential(spec, policy, [&](long n) { return squeezed_vacuum_pn(n, spec.r); });
      break;
    case DistKind::squeezed_coherent: {
      SqueezedCoherentSeries series(spec.beta, spec.r, spec.psi);
      probs = truncate_sequential(spec, policy, [&](long) { return series.next(); });
      break;
    }
    case DistKind::displaced_fock:
      probs = truncate_sequential(spec, policy, [&](long n) {
        return displaced_fock_pn(n, spec.fock_l, spec.beta * spec.beta);
      });
      break;
    case DistKind::squeezed_thermal:
    case DistKind::squeezed_fock:
    case DistKind::mixed_squeezed_coherent_thermal:
    case DistKind::displaced_squeezed_thermal:
    case DistKind::squeezed_displaced_fock:
      probs = truncate_generating(spec, policy);
      break;
  }
  PhotonDistribution d = distribution_from_probs(std::move(probs), spec);
  if (!(d.tail_mass < policy.tail_tol))
    throw TruncationError(tail_message(spec, d.tail_mass, policy.tail_tol), d.tail_mass);
  return d;
}

Moments empirical_moments(const PhotonDistribution& dist) {
  if (!(dist.tail_mass < 1e-9)) throw ParameterError("empirical_moments needs tail_mass < 1e-9");
  CompensatedSum total, first, second;
  for (std::size_t n = 0; n < dist.probs.size(); ++n) {
    const double p = dist.probs[n];
    const double x = static_cast<double>(n);
    total += p;
    first += x * p;
    second += x * x * p;
  }
  const double z = total.value();
  const double mean = first.value() / z;
  return {mean, second.value() / z - mean * mean};
}

}  // namespace tcm
