#include "tcm/cli/run_config.hpp"

#include "tcm/error.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace tcm::cli {

namespace {

using nlohmann::json;

template <typename T>
T get_field(const json& j, const std::string& key, const std::string& field) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ParameterError(field + ": wrong type");
  }
}

double get_number(const json& j, const std::string& key, const std::string& field) {
  if (!j.at(key).is_number()) throw ParameterError(field + ": expected a number");
  return j.at(key).get<double>();
}

long get_integer(const json& j, const std::string& key, const std::string& field) {
  const json& v = j.at(key);
  if (v.is_number_integer()) return v.get<long>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::floor(d) == d && std::abs(d) < 9e15) return static_cast<long>(d);
  }
  throw ParameterError(field + ": expected an integer");
}

void overlay_dist(DistSpec& dist, const json& j) {
  if (!j.is_object()) throw ParameterError("dist: expected an object");
  if (j.contains("kind")) {
    const DistKind kind = parse_dist_kind(get_field<std::string>(j, "kind", "dist.kind"));
    if (kind != dist.kind) dist = DistSpec{kind};
  }
  for (const auto& [key, value] : j.items()) {
    if (key == "kind") continue;
    const std::string field = "dist." + key;
    if (key == "beta") dist.beta = get_number(j, key, field);
    else if (key == "n_thermal") dist.n_thermal = get_number(j, key, field);
    else if (key == "r") dist.r = get_number(j, key, field);
    else if (key == "psi") dist.psi = get_number(j, key, field);
    else if (key == "fock_l") dist.fock_l = static_cast<int>(get_integer(j, key, field));
    else if (key == "nbar") apply_nbar(dist, get_number(j, key, field));
    else throw ParameterError(field + ": unknown key");
  }
}

}  // namespace

std::string_view to_string(Command c) noexcept {
  switch (c) {
    case Command::emit: return "emit";
    case Command::absorb: return "absorb";
    case Command::dist: return "dist";
    case Command::spectrum: return "spectrum";
    case Command::oracle: return "oracle";
    case Command::scan: return "scan";
  }
  return "?";
}

std::string_view to_string(OutputFormat f) noexcept { return f == OutputFormat::csv ? "csv" : "json"; }

std::string_view to_string(TlmState s) noexcept { return s == TlmState::up ? "up" : "down"; }

Command parse_command(std::string_view name) {
  for (Command c : {Command::emit, Command::absorb, Command::dist, Command::spectrum, Command::oracle,
                    Command::scan})
    if (to_string(c) == name) return c;
  throw ParameterError("command: unknown command '" + std::string(name) + "'");
}

OutputFormat parse_format(std::string_view name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw ParameterError("format: expected csv or json, got '" + std::string(name) + "'");
}

TlmState parse_tlm(std::string_view name) {
  if (name == "up") return TlmState::up;
  if (name == "down") return TlmState::down;
  throw ParameterError("tlm: expected up or down, got '" + std::string(name) + "'");
}

void apply_nbar(DistSpec& dist, double nbar) {
  if (!(nbar >= 0.0) || !std::isfinite(nbar)) throw ParameterError("nbar: must be finite and >= 0");
  if (dist.kind == DistKind::coherent) {
    dist.beta = std::sqrt(nbar);
  } else if (dist.kind == DistKind::thermal) {
    dist.n_thermal = nbar;
  } else {
    throw ParameterError("nbar: shorthand only applies to coherent or thermal light");
  }
}

void validate(const RunConfig& c) {
  if (c.n_tlm < 1) throw ParameterError("n_tlm: must be >= 1");
  if (!std::isfinite(c.detuning)) throw ParameterError("detuning: must be finite");
  if (!(c.t_max > 0.0) || !std::isfinite(c.t_max)) throw ParameterError("t_max: must be finite and > 0");
  if (c.t_steps < 2) throw ParameterError("t_steps: must be >= 2");
  if (c.t_steps > 100'000'000) throw ParameterError("t_steps: must be <= 100000000");
  if (!(c.tail_tol > 0.0) || !(c.tail_tol < 1.0)) throw ParameterError("tail_tol: must lie in (0, 1)");
  if (c.out.empty()) throw ParameterError("out: must not be empty");
  if (c.threads < 0) throw ParameterError("threads: must be >= 0");
  if (c.amp_floor && (!(*c.amp_floor >= 0.0) || !std::isfinite(*c.amp_floor)))
    throw ParameterError("amp_floor: must be finite and >= 0");
  try {
    tcm::validate(c.dist);
  } catch (const ParameterError& e) {
    throw ParameterError(std::string("dist.") + e.what());
  }
  if (c.command == Command::scan) {
    if (c.nbars.size() < 3) throw ParameterError("nbars: a scan needs at least 3 values");
    for (double v : c.nbars)
      if (!(v >= 0.0) || !std::isfinite(v)) throw ParameterError("nbars: values must be finite and >= 0");
  }
}

json to_json(const RunConfig& c) {
  json j;
  j["command"] = to_string(c.command);
  j["n_tlm"] = c.n_tlm;
  j["dist"] = {{"kind", to_string(c.dist.kind)}, {"beta", c.dist.beta},       {"n_thermal", c.dist.n_thermal},
               {"r", c.dist.r},                  {"psi", c.dist.psi},         {"fock_l", c.dist.fock_l}};
  j["detuning"] = c.detuning;
  j["t_max"] = c.t_max;
  j["t_steps"] = c.t_steps;
  j["tail_tol"] = c.tail_tol;
  j["out"] = c.out;
  j["format"] = to_string(c.format);
  j["plot"] = c.plot;
  j["threads"] = c.threads;
  j["amp_floor"] = c.amp_floor ? json(*c.amp_floor) : json(nullptr);
  j["tlm"] = to_string(c.tlm);
  j["nbars"] = c.nbars;
  return j;
}

RunConfig overlay(RunConfig c, const json& j) {
  if (!j.is_object()) throw ParameterError("config: expected a JSON object");
  if (j.contains("dist")) overlay_dist(c.dist, j.at("dist"));
  for (const auto& [key, value] : j.items()) {
    if (key == "dist") continue;
    if (key == "command") c.command = parse_command(get_field<std::string>(j, key, key));
    else if (key == "n_tlm") c.n_tlm = static_cast<int>(get_integer(j, key, key));
    else if (key == "detuning") c.detuning = get_number(j, key, key);
    else if (key == "t_max") c.t_max = get_number(j, key, key);
    else if (key == "t_steps") c.t_steps = get_integer(j, key, key);
    else if (key == "tail_tol") c.tail_tol = get_number(j, key, key);
    else if (key == "out") c.out = get_field<std::string>(j, key, key);
    else if (key == "format") c.format = parse_format(get_field<std::string>(j, key, key));
    else if (key == "plot") c.plot = get_field<bool>(j, key, key);
    else if (key == "threads") c.threads = static_cast<int>(get_integer(j, key, key));
    else if (key == "amp_floor")
      c.amp_floor = value.is_null() ? std::nullopt : std::optional<double>(get_number(j, key, key));
    else if (key == "tlm") c.tlm = parse_tlm(get_field<std::string>(j, key, key));
    else if (key == "nbars") {
      if (!value.is_array()) throw ParameterError("nbars: expected an array");
      c.nbars.clear();
      for (const json& v : value) {
        if (!v.is_number()) throw ParameterError("nbars: expected numbers");
        c.nbars.push_back(v.get<double>());
      }
    } else if (key == "nbar") {
      apply_nbar(c.dist, get_number(j, key, key));
    } else {
      throw ParameterError(key + ": unknown key");
    }
  }
  return c;
}

std::string serialize(const RunConfig& config) { return to_json(config).dump(2) + "\n"; }

RunConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParameterError(std::string("config: ") + e.what());
  }
  return overlay(RunConfig{}, j);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace tcm::cli
