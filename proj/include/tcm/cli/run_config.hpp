// run_config.hpp: configuration of one command-line run and its JSON form.
#pragma once

#include "tcm/photon_dist.hpp"
#include "tcm/reference_oracle.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tcm::cli {

enum class Command { emit, absorb, dist, spectrum, oracle, scan };
enum class OutputFormat { csv, json };

std::string_view to_string(Command c) noexcept;
std::string_view to_string(OutputFormat f) noexcept;
std::string_view to_string(TlmState s) noexcept;
Command parse_command(std::string_view name);
OutputFormat parse_format(std::string_view name);
TlmState parse_tlm(std::string_view name);

struct RunConfig {
  Command command = Command::emit;
  int n_tlm = 1;
  DistSpec dist{DistKind::coherent, 1.0, 0.0, 0.0, 0.0, 0};
  double detuning = 0.0;
  double t_max = 100.0;
  long t_steps = 2000;  // grid points including both ends
  double tail_tol = 1e-12;
  std::string out = "tcm_run";  // output prefix; extensions are appended
  OutputFormat format = OutputFormat::csv;
  bool plot = false;
  int threads = 0;  // 0 = OpenMP default
  std::optional<double> amp_floor;
  TlmState tlm = TlmState::up;  // spectrum and oracle: up = emission
  std::vector<double> nbars{20, 40, 60, 80, 100, 120};

  bool operator==(const RunConfig&) const = default;
};

// Throws ParameterError whose message starts with the offending field.
void validate(const RunConfig& config);

nlohmann::json to_json(const RunConfig& config);

// Overlays the keys present in j onto base. Unknown keys and type mismatches
// raise ParameterError. "nbar" is accepted as a shorthand: beta = sqrt(nbar)
// for coherent light, n_thermal = nbar for thermal light.
RunConfig overlay(RunConfig base, const nlohmann::json& j);

std::string serialize(const RunConfig& config);
RunConfig parse_config(std::string_view text);

// Reads a JSON config file over the defaults. IoError if unreadable.
RunConfig load_config(const std::string& path);

// Applies the nbar shorthand to a distribution spec.
void apply_nbar(DistSpec& dist, double nbar);

}  // namespace tcm::cli
