#include "tcm/envelope.hpp"

#include "tcm/error.hpp"
#include "tcm/summation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace tcm {

std::vector<double> sliding_amplitude(std::span<const double> times, std::span<const double> values,
                                      double center, double width) {
  if (times.size() != values.size()) throw ParameterError("times and values differ in length");
  if (!(width > 0.0)) throw ParameterError("window width must be > 0");
  const std::size_t n = values.size();
  std::vector<double> dev(n), out(n);
  for (std::size_t i = 0; i < n; ++i) dev[i] = std::abs(values[i] - center);

  // Monotone deque over the window [lo, hi].
  std::deque<std::size_t> q;
  std::size_t lo = 0, hi = 0;
  const double half = 0.5 * width;
  for (std::size_t k = 0; k < n; ++k) {
    while (hi < n && times[hi] <= times[k] + half) {
      while (!q.empty() && dev[q.back()] <= dev[hi]) q.pop_back();
      q.push_back(hi++);
    }
    while (times[lo] < times[k] - half) ++lo;
    while (q.front() < lo) q.pop_front();
    out[k] = dev[q.front()];
  }
  return out;
}

double mean_of(std::span<const double> values) {
  if (values.empty()) return 0.0;
  CompensatedSum s;
  for (double v : values) s += v;
  return s.value() / static_cast<double>(values.size());
}

std::vector<std::size_t> local_maxima(std::span<const double> values, double min_height) {
  std::vector<std::size_t> peaks;
  for (std::size_t k = 1; k + 1 < values.size(); ++k)
    if (values[k] > values[k - 1] && values[k] >= values[k + 1] && values[k] > min_height) peaks.push_back(k);
  return peaks;
}

std::vector<double> prominences(std::span<const double> values, std::span<const std::size_t> peaks) {
  std::vector<double> out;
  out.reserve(peaks.size());
  for (std::size_t p : peaks) {
    const double h = values[p];
    double left = h;
    for (std::size_t i = p; i-- > 0;) {
      if (values[i] > h) break;
      left = std::min(left, values[i]);
    }
    double right = h;
    for (std::size_t i = p + 1; i < values.size(); ++i) {
      if (values[i] > h) break;
      right = std::min(right, values[i]);
    }
    out.push_back(h - std::max(left, right));
  }
  return out;
}

std::vector<std::size_t> envelope_peaks(std::span<const double> times, std::span<const double> values,
                                        double window, double min_prominence) {
  const std::vector<double> env = sliding_amplitude(times, values, mean_of(values), window);
  if (env.empty()) return {};
  const auto [lo, hi] = std::minmax_element(env.begin(), env.end());
  const double threshold = min_prominence * (*hi - *lo);
  const std::vector<std::size_t> raw = local_maxima(env);
  const std::vector<double> prom = prominences(env, raw);
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < raw.size(); ++i)
    if (prom[i] >= threshold) kept.push_back(raw[i]);
  return kept;
}

double spacing_cv(std::span<const double> times, std::span<const std::size_t> indices) {
  if (indices.size() < 3) return std::numeric_limits<double>::infinity();
  std::vector<double> gaps;
  for (std::size_t i = 1; i < indices.size(); ++i) gaps.push_back(times[indices[i]] - times[indices[i - 1]]);
  const double mean = mean_of(gaps);
  CompensatedSum ss;
  for (double g : gaps) ss += (g - mean) * (g - mean);
  return std::sqrt(ss.value() / static_cast<double>(gaps.size())) / mean;
}

}  // namespace tcm
