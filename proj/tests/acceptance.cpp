// acceptance: end-to-end checks of the engine, one line per criterion:
//
//   acceptance                 run all criteria
//   acceptance --criterion 6   run one
#include "support.hpp"
#include "tcm/cli/run.hpp"
#include "tcm/dynamics.hpp"
#include "tcm/envelope.hpp"
#include "tcm/reference_oracle.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

using namespace tcm;
using support::spec_with;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

PhotonDistribution coherent(double nbar) {
  return make_distribution(spec_with(DistKind::coherent, std::sqrt(nbar), 0, 0, 0, 0));
}

double peak(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

Outcome single_tlm() {
  const std::vector<double> t = uniform_times(50.0, 2000);
  std::vector<DistSpec> specs;
  for (double nbar : {1.0, 5.0, 10.0}) specs.push_back(spec_with(DistKind::coherent, std::sqrt(nbar), 0, 0, 0, 0));
  for (DistKind k : kAllDistKinds)
    if (k != DistKind::coherent) specs.push_back(default_spec(k));
  double worst = 0.0;
  for (const DistSpec& s : specs) {
    const PhotonDistribution d = make_distribution(s);
    const TimeSeries block = evaluate(emission_spectrum(d, 1, 0.0), t);
    worst = std::max(worst, support::max_abs_diff(block.values, support::single_tlm_direct(d.probs, t)));
  }
  return {worst < 1e-10, fmt("%g distributions, max |diff| = %.2e (limit 1e-10)", static_cast<double>(specs.size()), worst)};
}

Outcome dense_oracle() {
  const PhotonDistribution d = coherent(4.0);
  const std::vector<double> t = uniform_times(30.0, 200);
  double worst = 0.0;
  for (int n_tlm : {1, 2, 3})
    for (double det : {0.0, 1.0})
      for (TlmState tlm : {TlmState::up, TlmState::down}) {
        const long n_max = static_cast<long>(d.n_max()) + (tlm == TlmState::up ? n_tlm : 0);
        const TimeSeries ref = oracle_exchange(build_joint(n_tlm, n_max, det), d, tlm, t);
        const Mode mode = tlm == TlmState::up ? Mode::emission : Mode::absorption;
        const TimeSeries s = evaluate(mode_spectrum(mode, d, n_tlm, det), t);
        worst = std::max(worst, support::max_abs_diff(s.values, ref.values));
      }
  return {worst < 1e-8, fmt("12 runs, max |diff| = %.2e (limit 1e-8)", worst)};
}

Outcome collapse_revival() {
  const std::vector<double> t = uniform_times(40.0, 8001);
  const TimeSeries s = evaluate(emission_spectrum(coherent(25.0), 1, 0.0), t);
  const std::vector<double> amp = sliding_amplitude(t, s.values, 0.5, 2.0);
  const double revival = 2.0 * std::numbers::pi * 5.0;
  double at8 = 0.0, back = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (std::abs(t[k] - 8.0) < 1e-9) at8 = amp[k];
    if (t[k] >= 0.9 * revival && t[k] <= 1.1 * revival) back = std::max(back, amp[k]);
  }
  return {at8 < 0.1 && back > 0.25,
          fmt("amplitude %.3f at gamma t = 8 (< 0.1), max %.3f on [%.1f, %.1f] (> 0.25)", at8, back, 0.9 * revival,
              1.1 * revival)};
}

Outcome absorption_capacity() {
  const std::vector<double> t = uniform_times(200.0, 4000);
  const PhotonDistribution d = coherent(100.0);
  const TimeSeries s4 = evaluate(absorption_spectrum(d, 100, 0.0), t);
  const double m = peak(s4.values);
  const TimeSeries in = intensity(s4, d.mean_closed);
  const double lowest = *std::min_element(in.values.begin(), in.values.end());
  return {m >= 50.0 && m <= 70.0, fmt("max S4 = %.2f (want [50, 70]), min intensity = %.2f", m, lowest)};
}

Outcome quadratic_fit() {
  const std::vector<double> nbars = {20, 40, 60, 80, 100, 120};
  const CapacityScan scan = capacity_scan(100, nbars, 200.0, 4000);
  double mean = 0.0;
  for (const CapacityPoint& p : scan.points) mean += p.max_s4 / static_cast<double>(scan.points.size());
  const bool rms_ok = scan.residual_rms < 0.02 * mean;
  const bool curve_ok = std::abs(scan.c2) * 120.0 < 0.1 * std::abs(scan.c1);
  std::string pts;
  for (const CapacityPoint& p : scan.points) pts += fmt(" %.1f", p.max_s4);
  return {rms_ok && curve_ok,
          fmt("rms/mean = %.4f (< 0.02), |c2|*120/|c1| = %.3f (< 0.1), c1 = %.4f, c2 = %.2e;", scan.residual_rms / mean,
              std::abs(scan.c2) * 120.0 / std::abs(scan.c1), scan.c1, scan.c2) +
              " max S4:" + pts};
}

Outcome rise_and_fall() {
  const std::vector<double> t = uniform_times(400.0, 20001);
  const PhotonDistribution d = make_distribution(spec_with(DistKind::thermal, 0, 1.0, 0, 0, 0));
  const TimeSeries s4 = evaluate(absorption_spectrum(d, 50, 0.0), t);
  const TimeSeries s1 = evaluate(emission_spectrum(d, 50, 0.0), t);
  const std::vector<std::size_t> p4 = envelope_peaks(t, s4.values, 2.0, 0.25);
  const std::vector<std::size_t> p1 = envelope_peaks(t, s1.values, 2.0, 0.25);
  const double cv4 = spacing_cv(t, p4);
  const double cv1 = spacing_cv(t, p1);
  return {cv4 < 0.25 && cv1 >= 2.0 * cv4,
          fmt("S4 spacing CV = %.3f over %g peaks (< 0.25), S1 CV = %.3f over %g peaks (>= 2x)", cv4,
              static_cast<double>(p4.size()), cv1, static_cast<double>(p1.size()))};
}

Outcome distribution_suite() {
  int checks = 0, failures = 0;
  std::string first;
  auto expect = [&](bool ok, const std::string& what) {
    ++checks;
    if (!ok && failures++ == 0) first = what;
  };
  std::mt19937_64 rng(2718);
  std::uniform_real_distribution<double> b2(0.0, 100.0), nt(0.0, 20.0), r(0.0, 2.0), psi(-3.2, 3.2);
  std::uniform_int_distribution<int> l(0, 10);
  for (DistKind k : kAllDistKinds) {
    std::vector<DistSpec> specs = {default_spec(k)};
    for (int i = 0; i < 4; ++i) specs.push_back(spec_with(k, std::sqrt(b2(rng)), nt(rng), r(rng), psi(rng), l(rng)));
    for (const DistSpec& s : specs) {
      const PhotonDistribution d = make_distribution(s);
      const Moments m = empirical_moments(d);
      const Moments c = closed_form_moments(s);
      const double em = c.mean == 0.0 ? std::abs(m.mean) : std::abs(m.mean / c.mean - 1.0);
      const double ev = c.var == 0.0 ? std::abs(m.var) : std::abs(m.var / c.var - 1.0);
      expect(em < (c.mean == 0.0 ? 1e-8 : 1e-6) && ev < (c.var == 0.0 ? 1e-8 : 1e-6),
             std::string(to_string(k)) + " moments");
    }
    const DistSpec s = default_spec(k);
    const PhotonDistribution d = make_distribution(s);
    const double dev = support::max_abs_diff(d.probs, gaussian_fock_oracle(s, oracle_dim(s, d.n_max())));
    expect(dev < 1e-8, std::string(to_string(k)) + " oracle");
  }
  for (double rr : {0.4, 1.3})
    for (int ll : {0, 3, 8}) {
      const PhotonDistribution sv = make_distribution(spec_with(DistKind::squeezed_vacuum, 0, 0, rr, 0, 0));
      const PhotonDistribution sf = make_distribution(spec_with(DistKind::squeezed_fock, 0, 0, rr, 0, ll));
      bool zeros = true;
      for (std::size_t n = 1; n < sv.probs.size(); n += 2) zeros = zeros && sv.probs[n] == 0.0;
      for (std::size_t n = 0; n < sf.probs.size(); ++n)
        if ((n + ll) % 2) zeros = zeros && sf.probs[n] == 0.0;
      expect(zeros, "parity");
    }
  using K = DistKind;
  const double b = 1.7, n = 0.8, q = 0.6, f = 0.4;
  const std::pair<DistSpec, DistSpec> limits[] = {
      {spec_with(K::squeezed_vacuum, 0, 0, 0, 0, 0), spec_with(K::fock, 0, 0, 0, 0, 0)},
      {spec_with(K::squeezed_fock, 0, 0, 0, 0, 3), spec_with(K::fock, 0, 0, 0, 0, 3)},
      {spec_with(K::squeezed_thermal, 0, n, 0, 0, 0), spec_with(K::thermal, 0, n, 0, 0, 0)},
      {spec_with(K::squeezed_coherent, b, 0, 0, 0, 0), spec_with(K::coherent, b, 0, 0, 0, 0)},
      {spec_with(K::mixed_squeezed_coherent_thermal, b, n, 0, 0, 0), spec_with(K::mixed_coherent_thermal, b, n, 0, 0, 0)},
      {spec_with(K::displaced_squeezed_thermal, b, n, 0, 0, 0), spec_with(K::mixed_coherent_thermal, b, n, 0, 0, 0)},
      {spec_with(K::squeezed_displaced_fock, b, 0, 0, 0, 3), spec_with(K::displaced_fock, b, 0, 0, 0, 3)},
      {spec_with(K::coherent, 0, 0, 0, 0, 0), spec_with(K::fock, 0, 0, 0, 0, 0)},
      {spec_with(K::displaced_fock, 0, 0, 0, 0, 3), spec_with(K::fock, 0, 0, 0, 0, 3)},
      {spec_with(K::mixed_coherent_thermal, 0, n, 0, 0, 0), spec_with(K::thermal, 0, n, 0, 0, 0)},
      {spec_with(K::squeezed_coherent, 0, 0, q, f, 0), spec_with(K::squeezed_vacuum, 0, 0, q, 0, 0)},
      {spec_with(K::displaced_squeezed_thermal, 0, n, q, f, 0), spec_with(K::squeezed_thermal, 0, n, q, 0, 0)},
      {spec_with(K::squeezed_displaced_fock, 0, 0, q, f, 3), spec_with(K::squeezed_fock, 0, 0, q, 0, 3)},
      {spec_with(K::thermal, 0, 0, 0, 0, 0), spec_with(K::fock, 0, 0, 0, 0, 0)},
      {spec_with(K::mixed_coherent_thermal, b, 0, 0, 0, 0), spec_with(K::coherent, b, 0, 0, 0, 0)},
      {spec_with(K::squeezed_thermal, 0, 0, q, 0, 0), spec_with(K::squeezed_vacuum, 0, 0, q, 0, 0)},
      {spec_with(K::mixed_squeezed_coherent_thermal, b, 0, q, f, 0), spec_with(K::squeezed_coherent, b, 0, q, f, 0)},
      {spec_with(K::displaced_squeezed_thermal, b, 0, q, f, 0), spec_with(K::squeezed_coherent, b, 0, q, f, 0)},
  };
  for (const auto& [x, y] : limits)
    expect(support::max_abs_diff(make_distribution(x).probs, make_distribution(y).probs) < 1e-11,
           std::string(to_string(x.kind)) + " limit");
  return {failures == 0, fmt("%g checks, %g failed", checks, failures) + (failures ? "; first: " + first : "")};
}

int run_tool(const std::string& args) {
  const std::string cmd = std::string(TCM_BINARY) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

Outcome invariant_suite() {
  int failures = 0;
  std::string first;
  auto expect = [&](bool ok, const std::string& what) {
    if (!ok && failures++ == 0) first = what;
  };
  std::mt19937_64 rng(31415);
  std::uniform_int_distribution<int> tlm(1, 50);
  std::uniform_int_distribution<long> photons(0, 200);
  std::uniform_real_distribution<double> det(-10.0, 10.0);
  for (int i = 0; i < 500; ++i) {
    const TCBlock b = block_for(i % 2 ? Mode::emission : Mode::absorption, tlm(rng), photons(rng), det(rng));
    const EigenSystem e = diagonalize(b);
    const double dim = static_cast<double>(b.dim());
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(e.A.rows(), e.A.cols());
    expect(orthonormality_residual(e.A) < 1e-12 * dim, "orthonormality " + b.describe());
    expect((e.A * e.A.transpose() - id).cwiseAbs().maxCoeff() < 1e-12 * dim, "completeness " + b.describe());
    double trace = 0.0, qsum = 0.0;
    for (double v : b.diag) trace += v;
    for (double q : e.q) qsum += q;
    expect(std::abs(qsum - trace) < 1e-10 * (1.0 + std::abs(trace)), "trace " + b.describe());
  }
  for (int n = 1; n <= 20; ++n) {
    Rational total = 0;
    for (const auto& [two_r, p] : multiplicity_table(n).values) total += p * (two_r + 1);
    expect(total == Rational(boost::multiprecision::cpp_int(1) << n), "multiplicity sum");
  }
  std::uniform_int_distribution<int> kind(0, static_cast<int>(kAllDistKinds.size()) - 1);
  std::uniform_int_distribution<int> small(1, 15);
  const std::vector<double> t = uniform_times(60.0, 600);
  for (int i = 0; i < 30; ++i) {
    const PhotonDistribution d = make_distribution(default_spec(kAllDistKinds[kind(rng)]));
    const int n_tlm = small(rng);
    const double beta = i % 3 ? 0.3 * det(rng) : 0.0;
    const std::vector<double> s1 = evaluate(emission_spectrum(d, n_tlm, beta), t).values;
    const std::vector<double> s4 = evaluate(absorption_spectrum(d, n_tlm, beta), t).values;
    expect(s1[0] == 0.0 && s4[0] == 0.0, "zero at origin");
    const double cap4 = std::min<double>(n_tlm, static_cast<double>(d.n_max()));
    for (std::size_t k = 0; k < t.size(); ++k) {
      expect(s1[k] >= -1e-9 && s1[k] <= n_tlm + 1e-9, "S1 bounds");
      expect(s4[k] >= -1e-9 && s4[k] <= cap4 + 1e-9, "S4 bounds");
    }
  }
  const std::filesystem::path dir = std::filesystem::temp_directory_path() / ("tcm_accept_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const std::vector<std::string> runs = {
      "emit -N 8 --kind thermal --n-thermal 2 --t-max 80 --t-steps 4001",
      "absorb -N 12 --kind squeezed-displaced-fock --beta 1.5 --r 0.3 --psi 0.7 --fock-l 2 --detuning 0.4",
      "scan -N 20 --nbars 2,6,10 --t-max 40 --format json",
  };
  int idx = 0;
  for (const std::string& args : runs) {
    std::string reference;
    for (const char* threads : {"1", "4", "0"}) {
      const std::string prefix = (dir / ("r" + std::to_string(idx) + "_" + threads)).string();
      expect(run_tool(args + " --threads " + threads + " --out " + prefix) == 0, "cli run " + args);
      const std::string out = slurp(prefix + (args.find("json") != std::string::npos ? ".json" : ".csv"));
      if (reference.empty()) reference = out;
      expect(!out.empty() && out == reference, "thread determinism " + args);
    }
    ++idx;
  }
  std::filesystem::remove_all(dir);
  return {failures == 0, fmt("%g failed checks", failures) + (failures ? "; first: " + first : "")};
}

constexpr double kNoBudget = std::numeric_limits<double>::infinity();

struct Criterion {
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {"single-TLM closed form", 5.0, single_tlm},
      {"dense-oracle equivalence", 30.0, dense_oracle},
      {"collapse and revival", kNoBudget, collapse_revival},
      {"absorption capacity", 120.0, absorption_capacity},
      {"quadratic fit of capacity", kNoBudget, quadratic_fit},
      {"rise-and-fall regularity", 60.0, rise_and_fall},
      {"distribution suite", 60.0, distribution_suite},
      {"invariant suite", 60.0, invariant_suite},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      selected.push_back(std::atoi(argv[++i]));
    } else {
      std::fprintf(stderr, "usage: %s [--criterion K]...\n", argv[0]);
      return 2;
    }
  }
  if (selected.empty())
    for (int k = 1; k <= static_cast<int>(criteria.size()); ++k) selected.push_back(k);

  bool all = true;
  for (int k : selected) {
    if (k < 1 || k > static_cast<int>(criteria.size())) {
      std::fprintf(stderr, "no criterion %d\n", k);
      return 2;
    }
    const Criterion& c = criteria[k - 1];
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = sec < c.budget_seconds;
    const bool pass = o.pass && in_time;
    all = all && pass;
    const std::string budget = std::isinf(c.budget_seconds) ? "" : fmt(" (budget %.0f s)", c.budget_seconds);
    std::printf("criterion %d %-28s %s  %s; %.1f s%s\n", k, c.name, pass ? "PASS" : "FAIL", o.detail.c_str(), sec,
                budget.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
