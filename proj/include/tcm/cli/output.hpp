// output.hpp: CSV, JSON manifest and SVG writers for command-line runs.
//
// Numbers are written as the shortest decimal that round-trips, always with
// '.' as the decimal point; lines end in LF.
#pragma once

#include "tcm/cli/run_config.hpp"
#include "tcm/dynamics.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tcm::cli {

inline constexpr std::string_view kEngineVersion = "1.0.0";

std::string format_number(double v);

// gamma_t,s_value,intensity
std::string series_csv(const TimeSeries& series, const TimeSeries& intensity);
void write_csv(const TimeSeries& series, const TimeSeries& intensity, const std::string& path);

struct RunStats {
  std::size_t n_max = 0;
  double tail_mass = 0.0;
  double dropped_amplitude = 0.0;
  double amp_floor = 0.0;
  std::size_t term_count = 0;
  double wall_seconds = 0.0;
  int workers = 1;
  std::optional<double> max_deviation;  // oracle runs
  std::optional<CapacityScan> scan;     // scan runs
  std::vector<std::string> files;
};

nlohmann::json scan_json(const CapacityScan& scan);
nlohmann::json manifest_json(const RunConfig& config, const RunStats& stats);
void write_manifest(const RunConfig& config, const RunStats& stats, const std::string& path);

// Polyline chart of y against x with the given axis labels.
std::string svg_plot(const std::vector<double>& x, const std::vector<double>& y, std::string_view x_label,
                     std::string_view y_label);

// Writes text as-is; IoError on failure.
void write_text(const std::string& path, std::string_view text);

}  // namespace tcm::cli
