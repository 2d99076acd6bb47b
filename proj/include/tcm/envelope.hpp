// envelope.hpp: oscillation-envelope measures on sampled series, used to
// quantify collapse/revival and the regularity of rise-and-fall patterns.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tcm {

// e[k] = max |values[i] - center| over |times[i] - times[k]| <= width / 2.
std::vector<double> sliding_amplitude(std::span<const double> times, std::span<const double> values,
                                      double center, double width);

double mean_of(std::span<const double> values);

// Indices k with values[k] > values[k-1] and values[k] >= values[k+1] whose
// height exceeds min_height.
std::vector<std::size_t> local_maxima(std::span<const double> values, double min_height = 0.0);

// Topographic prominence of each peak: its height above the higher of the
// two lowest points separating it from a taller peak (or the series end).
std::vector<double> prominences(std::span<const double> values, std::span<const std::size_t> peaks);

// Peaks of the sliding amplitude of |values - mean| over `window`, keeping
// those whose prominence is at least `min_prominence` times the envelope's
// range.
std::vector<std::size_t> envelope_peaks(std::span<const double> times, std::span<const double> values,
                                        double window, double min_prominence);

// Standard deviation over mean of consecutive differences of times at the
// given indices. Needs at least 3 indices; returns +inf otherwise.
double spacing_cv(std::span<const double> times, std::span<const std::size_t> indices);

}  // namespace tcm
