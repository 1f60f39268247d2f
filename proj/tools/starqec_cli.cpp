// Command-line driver: every subcommand reads an optional JSON config, lets
// flags override individual fields, and writes CSV or JSON to --out or stdout.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "starqec/qcore.hpp"
#include "starqec/sweep.hpp"

namespace sweep = starqec::sweep;
using sweep::Json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct CommonFlags {
  std::string config_path;
  std::string out_path;
  int jobs = 1;
  std::optional<std::uint64_t> seed;
  bool timing = false;
};

Json load_config(const std::string& path) {
  if (path.empty()) return Json::object();
  std::ifstream in(path);
  if (!in) throw sweep::ConfigError("cannot open config file " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw sweep::ConfigError("malformed config " + path + ": " + e.what());
  }
}

void emit(const CommonFlags& flags, const std::string& text) {
  if (flags.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(flags.out_path, std::ios::binary);
  if (!out) throw sweep::ConfigError("cannot write " + flags.out_path);
  out << text;
}

std::string json_text(const Json& doc) { return doc.dump(2) + "\n"; }

template <typename T>
void override_if_set(T& field, const std::optional<T>& flag) {
  if (flag) field = *flag;
}

void add_common(CLI::App* app, CommonFlags& flags) {
  app->add_option("--config", flags.config_path, "JSON config file");
  app->add_option("--out", flags.out_path, "output file (default stdout)");
  app->add_option("--jobs", flags.jobs, "concurrent grid points")->check(CLI::PositiveNumber);
  app->add_option("--seed", flags.seed, "random seed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation of error-corrected entanglement-assisted interferometry"};
  app.set_version_flag("--version", std::string(sweep::version()));
  app.require_subcommand(1);

  // qfi-sweep
  CommonFlags sweep_flags;
  std::optional<std::string> code, channel, parameter, qfi_mode;
  std::optional<double> sweep_gamma, sweep_phi;
  std::optional<std::vector<double>> p_grid;
  auto* qfi_cmd = app.add_subcommand("qfi-sweep", "QFI versus physical error rate");
  add_common(qfi_cmd, sweep_flags);
  qfi_cmd->add_option("--code", code, "none, rep-n, four-qubit or five-one-three");
  qfi_cmd->add_option("--channel", channel, "dephasing, depolarizing or amplitude-damping");
  qfi_cmd->add_option("--gamma", sweep_gamma);
  qfi_cmd->add_option("--phi", sweep_phi);
  qfi_cmd->add_option("--p-grid", p_grid, "error rates")->delimiter(',');
  qfi_cmd->add_option("--parameter", parameter, "phi or gamma");
  qfi_cmd->add_option("--qfi-mode", qfi_mode, "averaged or syndrome-resolved");
  qfi_cmd->add_flag("--timing", sweep_flags.timing, "record wall-clock time per row");

  // stirap
  CommonFlags stirap_flags;
  std::optional<double> total_time;
  std::optional<int> sector, samples;
  bool no_optimize = false;
  auto* stirap_cmd = app.add_subcommand("stirap", "optimized adiabatic capture trajectory");
  add_common(stirap_cmd, stirap_flags);
  stirap_cmd->add_option("--total-time", total_time, "pulse duration in units of 1/g");
  stirap_cmd->add_option("--n", sector, "photon-number sector");
  stirap_cmd->add_option("--samples", samples, "output time samples");
  stirap_cmd->add_flag("--no-optimize", no_optimize, "use the schedule from the config as given");

  // protocol
  CommonFlags protocol_flags;
  std::optional<std::vector<double>> protocol_eps;
  std::optional<double> protocol_gamma, protocol_phi, protocol_delta;
  auto* protocol_cmd = app.add_subcommand("protocol", "capture, vacuum removal and photon counting");
  add_common(protocol_cmd, protocol_flags);
  protocol_cmd->add_option("--epsilon", protocol_eps)->delimiter(',');
  protocol_cmd->add_option("--gamma", protocol_gamma);
  protocol_cmd->add_option("--phi", protocol_phi);
  protocol_cmd->add_option("--delta", protocol_delta, "two-photon capture phase");

  // threshold
  CommonFlags threshold_flags;
  std::optional<std::vector<long>> n_grid;
  std::optional<double> distance_rate;
  std::optional<std::vector<double>> threshold_p;
  auto* threshold_cmd = app.add_subcommand("threshold", "failure bounds for large codes");
  add_common(threshold_cmd, threshold_flags);
  threshold_cmd->add_option("--n-grid", n_grid)->delimiter(',');
  threshold_cmd->add_option("--distance-rate", distance_rate);
  threshold_cmd->add_option("--p-grid", threshold_p)->delimiter(',');

  // source
  CommonFlags source_flags;
  std::optional<std::vector<double>> source_eps;
  std::optional<double> source_gamma, source_phi;
  auto* source_cmd = app.add_subcommand("source", "thermal source covariance and Fock sectors");
  add_common(source_cmd, source_flags);
  source_cmd->add_option("--epsilon", source_eps)->delimiter(',');
  source_cmd->add_option("--gamma", source_gamma);
  source_cmd->add_option("--phi", source_phi);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (qfi_cmd->parsed()) {
      sweep::SweepConfig config;
      sweep::apply_json(config, load_config(sweep_flags.config_path));
      override_if_set(config.code, code);
      override_if_set(config.channel, channel);
      override_if_set(config.gamma, sweep_gamma);
      override_if_set(config.phi, sweep_phi);
      override_if_set(config.p_grid, p_grid);
      override_if_set(config.parameter, parameter);
      override_if_set(config.qfi_mode, qfi_mode);
      override_if_set(config.seed, sweep_flags.seed);
      const auto rows = sweep::run_qfi_sweep(config, {sweep_flags.jobs, sweep_flags.timing});
      emit(sweep_flags, sweep::render_qfi_sweep(config, rows));
    } else if (stirap_cmd->parsed()) {
      sweep::StirapConfig config;
      sweep::apply_json(config, load_config(stirap_flags.config_path));
      override_if_set(config.total_time, total_time);
      override_if_set(config.n, sector);
      override_if_set(config.samples, samples);
      override_if_set(config.seed, stirap_flags.seed);
      if (no_optimize) config.optimize = false;
      emit(stirap_flags, sweep::render_stirap(config, sweep::run_stirap(config)));
    } else if (protocol_cmd->parsed()) {
      sweep::ProtocolConfig config;
      sweep::apply_json(config, load_config(protocol_flags.config_path));
      override_if_set(config.epsilon_grid, protocol_eps);
      override_if_set(config.gamma, protocol_gamma);
      override_if_set(config.phi, protocol_phi);
      override_if_set(config.delta, protocol_delta);
      emit(protocol_flags, json_text(sweep::run_protocol(config)));
    } else if (threshold_cmd->parsed()) {
      sweep::ThresholdConfig config;
      sweep::apply_json(config, load_config(threshold_flags.config_path));
      override_if_set(config.n_grid, n_grid);
      override_if_set(config.distance_rate, distance_rate);
      override_if_set(config.p_grid, threshold_p);
      emit(threshold_flags, sweep::render_threshold(config));
    } else if (source_cmd->parsed()) {
      sweep::SourceConfig config;
      sweep::apply_json(config, load_config(source_flags.config_path));
      override_if_set(config.epsilon_grid, source_eps);
      override_if_set(config.gamma, source_gamma);
      override_if_set(config.phi, source_phi);
      emit(source_flags, json_text(sweep::run_source(config)));
    }
  } catch (const starqec::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::out_of_range& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  }
  return 0;
}
