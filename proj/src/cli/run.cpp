#include "tcm/cli/run.hpp"

#include "tcm/error.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <new>
#include <ostream>

namespace tcm::cli {

namespace {

using nlohmann::json;

struct Artifacts {
  const RunConfig& config;
  RunStats& stats;

  std::string data_path(std::string_view suffix = "") const {
    return config.out + std::string(suffix) + (config.format == OutputFormat::csv ? ".csv" : ".json");
  }
  void write(const std::string& path, std::string_view text) {
    write_text(path, text);
    stats.files.push_back(path);
  }
};

void apply_threads(int threads) {
  static const int automatic = omp_get_max_threads();
  omp_set_num_threads(threads > 0 ? threads : automatic);
}

SpectrumOptions spectrum_options(const RunConfig& c) {
  SpectrumOptions o;
  if (c.amp_floor) o.amp_floor = *c.amp_floor;
  return o;
}

void record_dist(RunStats& stats, const PhotonDistribution& dist) {
  stats.n_max = dist.n_max();
  stats.tail_mass = dist.tail_mass;
}

void record_spectrum(RunStats& stats, const ModeSpectrum& spectrum) {
  stats.dropped_amplitude = spectrum.dropped_amplitude;
  stats.amp_floor = spectrum.amp_floor;
  stats.term_count = spectrum.terms.size();
}

std::string series_text(const RunConfig& c, const TimeSeries& s, const TimeSeries& inten) {
  if (c.format == OutputFormat::csv) return series_csv(s, inten);
  json j = {{"label", to_string(s.label)}, {"gamma_t", s.times}, {"s_value", s.values}, {"intensity", inten.values}};
  return j.dump() + "\n";
}

Mode tlm_mode(TlmState s) { return s == TlmState::up ? Mode::emission : Mode::absorption; }

void run_series(const RunConfig& c, Artifacts& out, Mode mode) {
  const PhotonDistribution dist = make_distribution(c.dist, {c.tail_tol, std::nullopt});
  record_dist(out.stats, dist);
  const ModeSpectrum spectrum = mode_spectrum(mode, dist, c.n_tlm, c.detuning, spectrum_options(c));
  record_spectrum(out.stats, spectrum);
  const std::vector<double> times = uniform_times(c.t_max, static_cast<std::size_t>(c.t_steps));
  const TimeSeries s = evaluate(spectrum, times);
  const TimeSeries inten = intensity(s, dist.mean_closed);
  out.write(out.data_path(), series_text(c, s, inten));
  if (c.plot) out.write(c.out + ".svg", svg_plot(s.times, s.values, "γt", to_string(s.label)));
}

void run_dist(const RunConfig& c, Artifacts& out) {
  const PhotonDistribution dist = make_distribution(c.dist, {c.tail_tol, std::nullopt});
  record_dist(out.stats, dist);
  if (c.format == OutputFormat::csv) {
    std::string text = "n,probability\n";
    for (std::size_t n = 0; n < dist.probs.size(); ++n)
      text += std::to_string(n) + "," + format_number(dist.probs[n]) + "\n";
    out.write(out.data_path(), text);
  } else {
    json j = {{"kind", to_string(dist.spec.kind)},
              {"probs", dist.probs},
              {"tail_mass", dist.tail_mass},
              {"mean_closed", dist.mean_closed},
              {"var_closed", dist.var_closed}};
    if (dist.tail_mass < 1e-9) {
      const Moments m = empirical_moments(dist);
      j["mean"] = m.mean;
      j["var"] = m.var;
    }
    out.write(out.data_path(), j.dump() + "\n");
  }
  if (c.plot) {
    std::vector<double> n(dist.probs.size());
    for (std::size_t k = 0; k < n.size(); ++k) n[k] = static_cast<double>(k);
    out.write(c.out + ".svg", svg_plot(n, dist.probs, "n", "probability"));
  }
}

void run_spectrum(const RunConfig& c, Artifacts& out) {
  const PhotonDistribution dist = make_distribution(c.dist, {c.tail_tol, std::nullopt});
  record_dist(out.stats, dist);
  const ModeSpectrum spectrum = mode_spectrum(tlm_mode(c.tlm), dist, c.n_tlm, c.detuning, spectrum_options(c));
  record_spectrum(out.stats, spectrum);
  if (c.format == OutputFormat::csv) {
    std::string text = "n,j,jp,omega,amplitude\n";
    for (const SpectralTerm& t : spectrum.terms)
      text += std::to_string(t.n) + "," + std::to_string(t.j) + "," + std::to_string(t.jp) + "," +
              format_number(t.omega) + "," + format_number(t.amplitude) + "\n";
    out.write(out.data_path(), text);
  } else {
    json terms = json::array();
    for (const SpectralTerm& t : spectrum.terms)
      terms.push_back({{"n", t.n}, {"j", t.j}, {"jp", t.jp}, {"omega", t.omega}, {"amplitude", t.amplitude}});
    json j = {{"mode", to_string(spectrum.mode)}, {"dist_digest", spectrum.dist_digest}, {"terms", terms}};
    out.write(out.data_path(), j.dump() + "\n");
  }
}

void run_oracle(const RunConfig& c, Artifacts& out) {
  const PhotonDistribution dist = make_distribution(c.dist, {c.tail_tol, std::nullopt});
  record_dist(out.stats, dist);
  const Mode mode = tlm_mode(c.tlm);
  const ModeSpectrum spectrum = mode_spectrum(mode, dist, c.n_tlm, c.detuning, spectrum_options(c));
  record_spectrum(out.stats, spectrum);
  const std::vector<double> times = uniform_times(c.t_max, static_cast<std::size_t>(c.t_steps));
  const TimeSeries s = evaluate(spectrum, times);

  const long n_max = static_cast<long>(dist.n_max()) + (c.tlm == TlmState::up ? c.n_tlm : 0);
  const JointSystem sys = build_joint(c.n_tlm, n_max, c.detuning);
  const TimeSeries ref = oracle_exchange(sys, dist, c.tlm, times);
  double dev = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) dev = std::max(dev, std::abs(s.values[k] - ref.values[k]));
  out.stats.max_deviation = dev;

  out.write(out.data_path(), series_text(c, s, intensity(s, dist.mean_closed)));
  out.write(out.data_path(".oracle"), series_text(c, ref, intensity(ref, dist.mean_closed)));
  if (c.plot) out.write(c.out + ".svg", svg_plot(s.times, s.values, "γt", to_string(s.label)));
}

void run_scan(const RunConfig& c, Artifacts& out) {
  const CapacityScan scan = capacity_scan(c.n_tlm, c.nbars, c.t_max, static_cast<std::size_t>(c.t_steps),
                                          {c.tail_tol, std::nullopt}, spectrum_options(c));
  for (const CapacityPoint& p : scan.points) {
    out.stats.n_max = std::max(out.stats.n_max, p.n_max);
    out.stats.tail_mass = std::max(out.stats.tail_mass, p.tail_mass);
    out.stats.dropped_amplitude += p.dropped_amplitude;
  }
  out.stats.amp_floor = c.amp_floor ? *c.amp_floor : 1e-16 * c.n_tlm;
  out.stats.scan = scan;
  if (c.format == OutputFormat::csv) {
    std::string text = "nbar,max_s4\n";
    for (const CapacityPoint& p : scan.points) text += format_number(p.nbar) + "," + format_number(p.max_s4) + "\n";
    out.write(out.data_path(), text);
  } else {
    out.write(out.data_path(), scan_json(scan).dump() + "\n");
  }
  if (c.plot) {
    std::vector<double> x, y;
    for (const CapacityPoint& p : scan.points) {
      x.push_back(p.nbar);
      y.push_back(p.max_s4);
    }
    out.write(c.out + ".svg", svg_plot(x, y, "mean photon number", "max S4"));
  }
}

}  // namespace

RunStats run(const RunConfig& config) {
  validate(config);
  apply_threads(config.threads);
  const auto start = std::chrono::steady_clock::now();
  RunStats stats;
  stats.workers = worker_count();
  Artifacts out{config, stats};
  switch (config.command) {
    case Command::emit: run_series(config, out, Mode::emission); break;
    case Command::absorb: run_series(config, out, Mode::absorption); break;
    case Command::dist: run_dist(config, out); break;
    case Command::spectrum: run_spectrum(config, out); break;
    case Command::oracle: run_oracle(config, out); break;
    case Command::scan: run_scan(config, out); break;
  }
  stats.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const std::string manifest = config.out + ".manifest.json";
  stats.files.push_back(manifest);
  write_manifest(config, stats, manifest);
  return stats;
}

int exit_code_for_current_exception(std::ostream& err) {
  try {
    throw;
  } catch (const ParameterError& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const IoError& e) {
    err << "i/o failure: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::bad_alloc&) {
    err << "numerical failure: out of memory\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}

int run_main(const RunConfig& config, std::ostream& err) {
  try {
    run(config);
    return kExitOk;
  } catch (...) {
    return exit_code_for_current_exception(err);
  }
}

}  // namespace tcm::cli
