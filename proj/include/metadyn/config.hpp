#pragma once

#include <string>
#include <utility>
#include <vector>

#include "metadyn/toysim.hpp"

namespace metadyn {

struct RunConfig {
  Mode mode = Mode::close;
  double epsilon = 0.01;
  NeighbourListConfig nl;
  MetadynamicsConfig mtd;
  double lambda = 100.0;
  ToySystem system;
  std::int64_t n_steps = 5000;
  std::string refs_path = "data/demo_refs.txt";
  std::string cv_path = "COLVAR.csv";
  std::string hills_path = "HILLS";
  std::string trajectory_path = "trajectory.txt";
  std::string report_path = "report.txt";
  int trajectory_stride = 100;
  double amdahl_p = 0.93;
  int threads = -1;  // -1: METADYN_THREADS
};

/// Every key accepted in a config file and as a --<key> flag.
const std::vector<std::string>& config_keys();

/// Sets one key. Throws ConfigError for unknown keys or unparsable values.
void set_config_value(RunConfig& config, const std::string& key, const std::string& value);

/// Flat "key = value" lines; '#' starts a comment. Throws ParseError.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path);

RunOptions to_run_options(const RunConfig& config);

}  // namespace metadyn
