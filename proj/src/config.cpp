#include "metadyn/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>

#include "metadyn/errors.hpp"
#include "metadyn/parallel.hpp"

namespace metadyn {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_real(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double out = 0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size() || !std::isfinite(out))
    throw ConfigError("'" + key + "' expects a finite number, got '" + v + "'");
  return out;
}

long long to_int(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long long out = 0;
  try {
    out = std::stoll(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw ConfigError("'" + key + "' expects an integer, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "on" || v == "true" || v == "yes" || v == "1") return true;
  if (v == "off" || v == "false" || v == "no" || v == "0") return false;
  throw ConfigError("'" + key + "' expects on/off, got '" + v + "'");
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"mode", [](RunConfig& c, auto&, auto& v) { c.mode = mode_from_string(v); }},
      {"epsilon", [](RunConfig& c, auto& k, auto& v) { c.epsilon = to_real(k, v); }},
      {"nl", [](RunConfig& c, auto& k, auto& v) { c.nl.enabled = to_bool(k, v); }},
      {"nl-size", [](RunConfig& c, auto& k, auto& v) { c.nl.size = static_cast<int>(to_int(k, v)); }},
      {"nl-stride", [](RunConfig& c, auto& k, auto& v) { c.nl.stride = static_cast<int>(to_int(k, v)); }},
      {"mtd", [](RunConfig& c, auto& k, auto& v) { c.mtd.enabled = to_bool(k, v); }},
      {"tau-g", [](RunConfig& c, auto& k, auto& v) { c.mtd.stride = static_cast<int>(to_int(k, v)); }},
      {"sigma", [](RunConfig& c, auto& k, auto& v) { c.mtd.sigma = to_real(k, v); }},
      {"height", [](RunConfig& c, auto& k, auto& v) { c.mtd.height = to_real(k, v); }},
      {"grid", [](RunConfig& c, auto& k, auto& v) { c.mtd.grid = to_bool(k, v); }},
      {"grid-min", [](RunConfig& c, auto& k, auto& v) { c.mtd.grid_min = to_real(k, v); }},
      {"grid-max", [](RunConfig& c, auto& k, auto& v) { c.mtd.grid_max = to_real(k, v); }},
      {"grid-bins", [](RunConfig& c, auto& k, auto& v) { c.mtd.bins = static_cast<int>(to_int(k, v)); }},
      {"lambda", [](RunConfig& c, auto& k, auto& v) { c.lambda = to_real(k, v); }},
      {"n-beads", [](RunConfig& c, auto& k, auto& v) { c.system.n_beads = static_cast<int>(to_int(k, v)); }},
      {"bond-k", [](RunConfig& c, auto& k, auto& v) { c.system.bond_k = to_real(k, v); }},
      {"bond-r0", [](RunConfig& c, auto& k, auto& v) { c.system.bond_r0 = to_real(k, v); }},
      {"angle-k", [](RunConfig& c, auto& k, auto& v) { c.system.angle_k = to_real(k, v); }},
      {"angle-theta0", [](RunConfig& c, auto& k, auto& v) { c.system.angle_theta0 = to_real(k, v); }},
      {"temperature", [](RunConfig& c, auto& k, auto& v) { c.system.temperature = to_real(k, v); }},
      {"friction", [](RunConfig& c, auto& k, auto& v) { c.system.friction = to_real(k, v); }},
      {"bead-mass", [](RunConfig& c, auto& k, auto& v) { c.system.bead_mass = to_real(k, v); }},
      {"dt", [](RunConfig& c, auto& k, auto& v) { c.system.dt = to_real(k, v); }},
      {"seed", [](RunConfig& c, auto& k, auto& v) { c.system.rng_seed = static_cast<std::uint64_t>(to_int(k, v)); }},
      {"steps", [](RunConfig& c, auto& k, auto& v) { c.n_steps = to_int(k, v); }},
      {"refs", [](RunConfig& c, auto&, auto& v) { c.refs_path = v; }},
      {"cv-out", [](RunConfig& c, auto&, auto& v) { c.cv_path = v; }},
      {"hills-out", [](RunConfig& c, auto&, auto& v) { c.hills_path = v; }},
      {"traj-out", [](RunConfig& c, auto&, auto& v) { c.trajectory_path = v; }},
      {"traj-stride", [](RunConfig& c, auto& k, auto& v) { c.trajectory_stride = static_cast<int>(to_int(k, v)); }},
      {"report-out", [](RunConfig& c, auto&, auto& v) { c.report_path = v; }},
      {"amdahl-p", [](RunConfig& c, auto& k, auto& v) { c.amdahl_p = to_real(k, v); }},
      {"threads", [](RunConfig& c, auto& k, auto& v) { c.threads = static_cast<int>(to_int(k, v)); }},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, _] : setters()) k.push_back(name);
    return k;
  }();
  return keys;
}

void set_config_value(RunConfig& config, const std::string& key, const std::string& value) {
  const auto it = setters().find(key);
  if (it == setters().end()) throw ConfigError("unknown configuration key '" + key + "'");
  it->second(config, key, value);
}

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value", line_no);
    std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ParseError("empty key", line_no);
    out.emplace_back(std::move(key), trim(line.substr(eq + 1)));
  }
  return out;
}

RunOptions to_run_options(const RunConfig& c) {
  RunOptions o;
  o.mode = c.mode;
  o.epsilon = c.epsilon;
  o.nl = c.nl;
  o.mtd = c.mtd;
  o.n_steps = c.n_steps;
  o.trajectory_stride = c.trajectory_stride;
  o.threads = c.threads < 0 ? threads_from_env() : c.threads;
  if (!(o.epsilon >= 0)) throw ConfigError("epsilon must be non-negative");
  if (o.mtd.grid && o.mtd.grid_min && o.mtd.grid_max && !(*o.mtd.grid_max > *o.mtd.grid_min))
    throw ConfigError("grid-max must exceed grid-min");
  return o;
}

}  // namespace metadyn
