#pragma once

// Batch drivers behind the command-line tool. Each driver validates its
// config, runs deterministically and renders a self-describing CSV or JSON
// document whose leading header records the full config and version.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "starqec/stirap.hpp"

namespace starqec::sweep {

using Json = nlohmann::ordered_json;

/// Invalid user configuration (exit code 2 in the CLI).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

const char* version();

/// 12 significant digits, '.' decimal separator.
std::string format_number(double value);

struct RunOptions {
  int jobs = 1;
  bool timing = false;  // fill runtime_ms; otherwise it stays 0 for byte-stable output
};

// ---- qfi-sweep ----

struct SweepConfig {
  std::string code = "rep-3";
  std::string channel = "dephasing";
  double gamma = 1.0;
  double phi = 0.0;
  std::vector<double> p_grid = {0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5};
  std::string parameter = "phi";
  std::string qfi_mode = "averaged";
  std::uint64_t seed = 0;
};

struct SweepRow {
  double p = 0.0;
  double qfi = 0.0;
  double qfi_unprotected = 0.0;
  double fi_local_at_adaptive_theta = 0.0;
  double runtime_ms = 0.0;
};

void validate(const SweepConfig& config);
/// Overlays the JSON object's fields onto `config`; unknown keys are errors.
void apply_json(SweepConfig& config, const Json& json);
Json to_json(const SweepConfig& config);

std::vector<SweepRow> run_qfi_sweep(const SweepConfig& config, const RunOptions& options = {});
std::string render_qfi_sweep(const SweepConfig& config, const std::vector<SweepRow>& rows);

// ---- stirap ----

struct StirapConfig {
  double total_time = 50.0;
  int n = 1;
  bool optimize = true;
  std::uint64_t seed = 0;
  int samples = 501;
  /// Used as given when optimize is false.
  stirap::PulseSchedule schedule;
};

struct StirapRun {
  stirap::PulseSchedule schedule;
  stirap::Trajectory trajectory;
  std::optional<stirap::OptimizationResult> optimization;
};

void validate(const StirapConfig& config);
void apply_json(StirapConfig& config, const Json& json);
Json to_json(const StirapConfig& config);

StirapRun run_stirap(const StirapConfig& config);
/// Columns t,omega,delta,pop_0R,pop_e,pop_1R.
std::string render_stirap(const StirapConfig& config, const StirapRun& run);

// ---- protocol ----

struct ProtocolConfig {
  std::vector<double> epsilon_grid = {1e-3};
  double gamma = 1.0;
  double phi = 0.0;
  double delta = 0.0;  // two-photon STIRAP phase used for the multi-photon table
};

void validate(const ProtocolConfig& config);
void apply_json(ProtocolConfig& config, const Json& json);
Json to_json(const ProtocolConfig& config);

Json run_protocol(const ProtocolConfig& config);

// ---- threshold ----

struct ThresholdConfig {
  std::vector<long> n_grid = {100, 1000};
  double distance_rate = 0.1893;
  std::vector<double> p_grid = {0.02, 0.04, 0.06, 0.08};
};

void validate(const ThresholdConfig& config);
void apply_json(ThresholdConfig& config, const Json& json);
Json to_json(const ThresholdConfig& config);

/// Columns n,d,p,chernoff_bound,exact_tail. Rows with p ≥ d/(2n), where the
/// bound is vacuous, report chernoff_bound = 1.
std::string render_threshold(const ThresholdConfig& config);

// ---- source ----

struct SourceConfig {
  std::vector<double> epsilon_grid = {0.0, 0.001, 0.01};
  double gamma = 1.0;
  double phi = 0.0;
};

void validate(const SourceConfig& config);
void apply_json(SourceConfig& config, const Json& json);
Json to_json(const SourceConfig& config);

Json run_source(const SourceConfig& config);

/// Comment block for CSV output: "# " lines with version, command and config.
std::string csv_header(const std::string& command, const Json& config);
/// JSON documents put the same information under a leading "meta" key.
Json json_document(const std::string& command, const Json& config, Json results);

}  // namespace starqec::sweep
