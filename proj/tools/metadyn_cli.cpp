#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "metadyn/config.hpp"
#include "metadyn/diagnostics.hpp"
#include "metadyn/errors.hpp"
#include "metadyn/io.hpp"
#include "metadyn/perf.hpp"
#include "metadyn/toysim.hpp"

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

template <typename Write>
void write_file(const std::string& path, Write&& write) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw metadyn::ConfigError("cannot write '" + path + "'");
  write(out);
}

std::string format_report(const metadyn::RunConfig& cfg, const metadyn::RunReport& r) {
  using namespace metadyn;
  std::ostringstream out;
  out << "mode = " << to_string(r.mode) << '\n'
      << "steps = " << r.steps << '\n'
      << "references = " << r.references << '\n'
      << "nl_size = " << r.nl_size << '\n'
      << "nl_stride = " << r.nl_stride << '\n'
      << "epsilon = " << num(cfg.epsilon) << '\n'
      << "expensive_count = " << r.expensive_count << '\n'
      << "cheap_count = " << r.cheap_count << '\n'
      << "reassign_count = " << r.reassign_count << '\n'
      << "nl_updates = " << r.nl_updates << '\n'
      << "expensive_per_step = " << num(static_cast<double>(r.expensive_count) / static_cast<double>(r.steps))
      << '\n';

  CostModel model;
  model.references = r.references;
  model.nl_size = r.nl_size;
  model.nl_stride = r.nl_stride;
  // Without a measured reassignment interval, assume one reassignment per run.
  model.reassign_interval = r.reassign_count > 0 ? r.measured_K : static_cast<double>(r.steps);
  const ModelComparison cmp = measured_vs_model(r.counters(), model);
  out << "counter_identity = " << (cmp.exact_match ? "ok" : "MISMATCH") << " (expected "
      << cmp.expected_count << ")\n";
  out << "measured_K = " << num(r.measured_K) << '\n'
      << "original_cost = " << num(original_cost(model)) << '\n'
      << "close_cost = " << num(close_cost(model)) << '\n'
      << "msd_speedup = " << num(msd_speedup(model)) << '\n'
      << "accelerates = " << (accelerates(model) ? "yes" : "no") << '\n'
      << "amdahl_p = " << num(cfg.amdahl_p) << '\n'
      << "amdahl_speedup = " << num(amdahl({cfg.amdahl_p, msd_speedup(model)})) << '\n'
      << "wall_time_s = " << num(r.wall_time) << '\n';
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace metadyn;
  CLI::App app{"Metadynamics property-map variable with the floating close-structure approximation"};
  app.require_subcommand(1);

  // run
  auto* run_cmd = app.add_subcommand("run", "Run the biased toy chain and write CV, HILLS, trajectory and report");
  std::string config_path;
  run_cmd->add_option("--config", config_path, "key=value configuration file");
  bool nl_off = false;
  run_cmd->add_flag("--nl-off", nl_off, "Disable the neighbour list (same as --nl off)");
  std::map<std::string, std::string> overrides;
  for (const std::string& key : config_keys()) run_cmd->add_option("--" + key, overrides[key], "config key " + key);

  // model
  auto* model_cmd = app.add_subcommand("model", "Evaluate the expensive-evaluation cost model and Amdahl's law");
  CostModel model;
  double p = -1;
  double s_override = -1;
  model_cmd->add_option("--N", model.references, "reference structures")->required();
  model_cmd->add_option("--M", model.nl_size, "neighbour list size (0: none)");
  model_cmd->add_option("--L", model.nl_stride, "neighbour list stride (1: none)");
  model_cmd->add_option("--K", model.reassign_interval, "mean steps between close-structure reassignments");
  model_cmd->add_option("--p", p, "fraction of run time spent in distance evaluation");
  model_cmd->add_option("--s", s_override, "speed-up of that fraction (default: the modelled MSD speed-up)");

  // check
  auto* check_cmd = app.add_subcommand("check", "Finite-difference and orthonormality self-tests");
  std::uint64_t check_seed = 7;
  int check_instances = 100;
  check_cmd->add_option("--seed", check_seed);
  check_cmd->add_option("--instances", check_instances);

  // make-refs
  auto* refs_cmd = app.add_subcommand("make-refs", "Generate a reference set from an unbiased pre-run");
  std::string refs_out = "refs.txt";
  int refs_count = 16, refs_interval = 500, refs_equil = 1000;
  std::map<std::string, std::string> refs_overrides;
  refs_cmd->add_option("--out", refs_out);
  refs_cmd->add_option("--count", refs_count);
  refs_cmd->add_option("--interval", refs_interval);
  refs_cmd->add_option("--equilibration", refs_equil);
  refs_cmd->add_option("--config", config_path);
  for (const std::string& key : config_keys())
    refs_cmd->add_option("--" + key, refs_overrides[key], "config key " + key);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd || *refs_cmd) {
      RunConfig cfg;
      if (!config_path.empty())
        for (const auto& [k, v] : read_config_file(config_path)) set_config_value(cfg, k, v);
      const auto& chosen = *run_cmd ? overrides : refs_overrides;
      CLI::App* sub = *run_cmd ? run_cmd : refs_cmd;
      for (const auto& [k, v] : chosen)
        if (sub->count("--" + k) > 0) set_config_value(cfg, k, v);

      if (*refs_cmd) {
        const ReferenceSet ref = generate_references(cfg.system, refs_count, refs_interval, refs_equil, cfg.lambda);
        save_references(refs_out, ref);
        std::cout << "wrote " << ref.size() << " structures to " << refs_out << '\n';
        return 0;
      }

      if (nl_off) cfg.nl.enabled = false;
      const ReferenceSet ref = load_references(cfg.refs_path, cfg.lambda);
      const RunReport report = run(cfg.system, ref, to_run_options(cfg));
      write_file(cfg.cv_path, [&](std::ostream& o) { write_cv_series(o, report); });
      write_file(cfg.hills_path, [&](std::ostream& o) {
        if (report.bias) report.bias->write_hills(o);
      });
      write_file(cfg.trajectory_path, [&](std::ostream& o) { write_trajectory(o, report.frames); });
      const std::string text = format_report(cfg, report);
      write_file(cfg.report_path, [&](std::ostream& o) { o << text; });
      std::cout << text;
      return 0;
    }

    if (*model_cmd) {
      const double orig = original_cost(model);
      const double close = close_cost(model);
      const double speed = msd_speedup(model);
      std::cout << "original_cost = " << num(orig) << '\n'
                << "close_cost = " << num(close) << '\n'
                << "msd_speedup = " << num(speed) << '\n'
                << "accelerates = " << (accelerates(model) ? "yes" : "no") << '\n';
      if (p >= 0) {
        const double s = s_override > 0 ? s_override : speed;
        std::cout << "amdahl_p = " << num(p) << '\n'
                  << "amdahl_s = " << num(s) << '\n'
                  << "amdahl_speedup = " << num(amdahl({p, s})) << '\n';
      }
      return 0;
    }

    if (*check_cmd) {
      bool all = true;
      std::printf("%-66s %12s %10s  %s\n", "check", "worst", "tolerance", "result");
      for (const CheckRow& row : run_self_checks(check_seed, check_instances)) {
        std::printf("%-66s %12.3e %10.1e  %s\n", row.name.c_str(), row.measured, row.tolerance,
                    row.pass ? "PASS" : "FAIL");
        all = all && row.pass;
      }
      return all ? 0 : 1;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
