// tcm: command-line driver for the Tavis-Cummings emission/absorption engine.
//
//   tcm emit --kind coherent --nbar 25 -N 1 --t-max 60 --out revival --plot
//   tcm scan -N 100 --nbars 20,40,60,80,100,120 --t-max 200 --t-steps 4000
//   tcm dist --config run.json --format json
#include "tcm/cli/run.hpp"
#include "tcm/error.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

struct Flags {
  std::optional<std::string> config;
  std::optional<int> n_tlm;
  std::optional<std::string> kind;
  std::optional<double> beta, n_thermal, r, psi, nbar;
  std::optional<int> fock_l;
  std::optional<double> detuning, t_max, tail_tol, amp_floor;
  std::optional<long> t_steps;
  std::optional<std::string> out, format, tlm;
  std::optional<int> threads;
  std::vector<double> nbars;
  bool plot = false;
};

void add_options(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON config file; flags override its values");
  sub->add_option("-N,--n-tlm", f.n_tlm, "number of two-level molecules");
  sub->add_option("--kind", f.kind, "photon distribution, e.g. coherent, squeezed-thermal");
  sub->add_option("--beta", f.beta, "displacement magnitude |beta|");
  sub->add_option("--n-thermal", f.n_thermal, "mean thermal photon number");
  sub->add_option("--r", f.r, "squeeze magnitude");
  sub->add_option("--psi", f.psi, "squeeze phase (radians)");
  sub->add_option("--fock-l", f.fock_l, "number state l");
  sub->add_option("--nbar", f.nbar, "mean photon number (coherent or thermal)");
  sub->add_option("--detuning", f.detuning, "relative tuning parameter");
  sub->add_option("--t-max", f.t_max, "end of the gamma*t grid");
  sub->add_option("--t-steps", f.t_steps, "number of grid points");
  sub->add_option("--tail-tol", f.tail_tol, "truncation tolerance on the distribution tail");
  sub->add_option("--amp-floor", f.amp_floor, "drop spectral terms below this amplitude");
  sub->add_option("--out", f.out, "output path prefix");
  sub->add_option("--format", f.format, "csv or json");
  sub->add_option("--tlm", f.tlm, "initial TLM state for spectrum/oracle: up or down");
  sub->add_option("--threads", f.threads, "worker threads, 0 = automatic");
  sub->add_option("--nbars", f.nbars, "mean photon numbers for scan")->delimiter(',');
  sub->add_flag("--plot", f.plot, "also write an SVG plot");
}

tcm::cli::RunConfig build_config(const std::string& command, const Flags& f) {
  using namespace tcm::cli;
  RunConfig c = f.config ? load_config(*f.config) : RunConfig{};
  c.command = parse_command(command);
  if (f.n_tlm) c.n_tlm = *f.n_tlm;
  if (f.kind) {
    const tcm::DistKind kind = tcm::parse_dist_kind(*f.kind);
    if (kind != c.dist.kind) c.dist = tcm::DistSpec{kind};
  }
  if (f.beta) c.dist.beta = *f.beta;
  if (f.n_thermal) c.dist.n_thermal = *f.n_thermal;
  if (f.r) c.dist.r = *f.r;
  if (f.psi) c.dist.psi = *f.psi;
  if (f.fock_l) c.dist.fock_l = *f.fock_l;
  if (f.nbar) apply_nbar(c.dist, *f.nbar);
  if (f.detuning) c.detuning = *f.detuning;
  if (f.t_max) c.t_max = *f.t_max;
  if (f.t_steps) c.t_steps = *f.t_steps;
  if (f.tail_tol) c.tail_tol = *f.tail_tol;
  if (f.amp_floor) c.amp_floor = *f.amp_floor;
  if (f.out) c.out = *f.out;
  if (f.format) c.format = parse_format(*f.format);
  if (f.tlm) c.tlm = parse_tlm(*f.tlm);
  if (f.threads) c.threads = *f.threads;
  if (!f.nbars.empty()) c.nbars = f.nbars;
  if (f.plot) c.plot = true;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stimulated emission and absorption of one field mode by N two-level molecules"};
  app.require_subcommand(1);
  Flags flags;
  const std::vector<std::pair<const char*, const char*>> commands = {
      {"emit", "photons emitted with all molecules initially up (S1)"},
      {"absorb", "photons absorbed with all molecules initially down (S4)"},
      {"dist", "truncated photon-number distribution"},
      {"spectrum", "frequency/amplitude terms of S1 or S4"},
      {"oracle", "compare against dense joint-space evolution"},
      {"scan", "peak absorption against mean photon number, with quadratic fit"},
  };
  for (const auto& [name, help] : commands) add_options(app.add_subcommand(name, help), flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return tcm::cli::kExitConfig;
  }

  try {
    const std::string command = app.get_subcommands().front()->get_name();
    return tcm::cli::run_main(build_config(command, flags), std::cerr);
  } catch (...) {
    return tcm::cli::exit_code_for_current_exception(std::cerr);
  }
}
