#include "tcm/cli/output.hpp"

#include "tcm/error.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <fstream>

namespace tcm::cli {

std::string format_number(double v) {
  if (v == 0.0) return "0";  // folds -0
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string series_csv(const TimeSeries& series, const TimeSeries& intensity) {
  if (series.times != intensity.times || series.values.size() != series.times.size() ||
      intensity.values.size() != intensity.times.size())
    throw ParameterError("series and intensity are not aligned");
  std::string out = "gamma_t,s_value,intensity\n";
  for (std::size_t k = 0; k < series.times.size(); ++k) {
    out += format_number(series.times[k]);
    out += ',';
    out += format_number(series.values[k]);
    out += ',';
    out += format_number(intensity.values[k]);
    out += '\n';
  }
  return out;
}

void write_text(const std::string& path, std::string_view text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  f.close();
  if (!f) throw IoError("failed writing " + path);
}

void write_csv(const TimeSeries& series, const TimeSeries& intensity, const std::string& path) {
  write_text(path, series_csv(series, intensity));
}

nlohmann::json scan_json(const CapacityScan& scan) {
  nlohmann::json points = nlohmann::json::array();
  for (const CapacityPoint& p : scan.points)
    points.push_back({{"nbar", p.nbar}, {"max_s4", p.max_s4}, {"n_max", p.n_max}, {"tail_mass", p.tail_mass}});
  return {{"points", points},
          {"fit", {{"c0", scan.c0}, {"c1", scan.c1}, {"c2", scan.c2}}},
          {"residual_rms", scan.residual_rms}};
}

nlohmann::json manifest_json(const RunConfig& config, const RunStats& stats) {
  nlohmann::json j;
  j["engine_version"] = kEngineVersion;
  j["config"] = to_json(config);
  j["n_max"] = stats.n_max;
  j["tail_mass"] = stats.tail_mass;
  j["dropped_amplitude"] = stats.dropped_amplitude;
  j["amp_floor"] = stats.amp_floor;
  j["term_count"] = stats.term_count;
  j["wall_seconds"] = stats.wall_seconds;
  j["workers"] = stats.workers;
  j["units"] = {{"time", "gamma_t"}, {"series", "photons"}, {"intensity_prefactor", "|gamma/mu|^2, not applied"}};
  j["max_deviation"] = stats.max_deviation ? nlohmann::json(*stats.max_deviation) : nlohmann::json(nullptr);
  j["capacity_scan"] = stats.scan ? scan_json(*stats.scan) : nlohmann::json(nullptr);
  j["files"] = stats.files;
  return j;
}

void write_manifest(const RunConfig& config, const RunStats& stats, const std::string& path) {
  write_text(path, manifest_json(config, stats).dump(2) + "\n");
}

namespace {

std::string xml_escape(std::string_view text) {
  std::string out;
  for (char ch : text) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

std::string svg_plot(const std::vector<double>& x, const std::vector<double>& y, std::string_view x_label,
                     std::string_view y_label) {
  constexpr double width = 800, height = 450, left = 70, right = 20, top = 20, bottom = 50;
  const std::size_t n = std::min(x.size(), y.size());
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (n > 0) {
    const auto [xl, xh] = std::minmax_element(x.begin(), x.begin() + static_cast<long>(n));
    const auto [yl, yh] = std::minmax_element(y.begin(), y.begin() + static_cast<long>(n));
    x0 = *xl, x1 = *xh, y0 = *yl, y1 = *yh;
  }
  if (!(x1 > x0)) x1 = x0 + 1;
  if (!(y1 > y0)) y1 = y0 + 1;
  const double pw = width - left - right, ph = height - top - bottom;
  auto px = [&](double v) { return left + (v - x0) / (x1 - x0) * pw; };
  auto py = [&](double v) { return top + (1.0 - (v - y0) / (y1 - y0)) * ph; };

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"450\" viewBox=\"0 0 800 450\">\n";
  s += "<rect width=\"800\" height=\"450\" fill=\"white\"/>\n";
  s += "<rect x=\"70\" y=\"20\" width=\"710\" height=\"380\" fill=\"none\" stroke=\"black\"/>\n";
  s += "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1\" points=\"";
  char buf[160];
  for (std::size_t k = 0; k < n; ++k) {
    std::snprintf(buf, sizeof buf, "%s%.2f,%.2f", k ? " " : "", px(x[k]), py(y[k]));
    s += buf;
  }
  s += "\"/>\n";
  auto text = [&](double tx, double ty, std::string_view body, const char* anchor) {
    std::snprintf(buf, sizeof buf, "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"%s\" font-size=\"12\">", tx, ty,
                  anchor);
    s += buf;
    s += xml_escape(body);
    s += "</text>\n";
  };
  text(left, height - bottom + 16, format_number(x0), "start");
  text(width - right, height - bottom + 16, format_number(x1), "end");
  text(left - 6, height - bottom, format_number(y0), "end");
  text(left - 6, top + 10, format_number(y1), "end");
  text(left + pw / 2, height - 12, x_label, "middle");
  std::snprintf(buf, sizeof buf, "<text x=\"18\" y=\"%.1f\" text-anchor=\"middle\" font-size=\"12\" "
                                 "transform=\"rotate(-90 18 %.1f)\">",
                top + ph / 2, top + ph / 2);
  s += buf;
  s += xml_escape(y_label);
  s += "</text>\n</svg>\n";
  return s;
}

}  // namespace tcm::cli
