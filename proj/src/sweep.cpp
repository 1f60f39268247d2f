#include "starqec/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "starqec/bounds.hpp"
#include "starqec/channels.hpp"
#include "starqec/codes.hpp"
#include "starqec/encoder.hpp"
#include "starqec/metrology.hpp"
#include "starqec/recovery.hpp"
#include "starqec/source.hpp"

#ifndef STARQEC_VERSION
#define STARQEC_VERSION "0.0.0"
#endif

namespace starqec::sweep {

namespace {

using Setter = std::function<void(const Json&)>;

// Applies each key of `json` through its setter; type mismatches and unknown
// keys become ConfigError.
void apply_fields(const Json& json, const std::map<std::string, Setter>& setters) {
  if (!json.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : json.items()) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("unknown config field: " + key);
    try {
      it->second(value);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("bad value for " + key + ": " + e.what());
    }
  }
}

template <typename T>
Setter set(T& field) {
  return [&field](const Json& v) { field = v.get<T>(); };
}

void require(bool condition, const std::string& message) {
  if (!condition) throw ConfigError(message);
}

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

Json number_array(const std::vector<double>& values) {
  Json a = Json::array();
  for (double v : values) a.push_back(v);
  return a;
}

Json complex_matrix_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

// Runs body(i) for i in [0, count) on up to `jobs` threads; results are
// written by index so order never depends on scheduling.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, jobs)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> threads;
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

const char* version() { return STARQEC_VERSION; }

std::string format_number(double value) {
  if (value == 0.0) return "0";  // avoids "-0"
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

std::string csv_header(const std::string& command, const Json& config) {
  std::ostringstream out;
  out << "# starqec " << version() << "\n";
  out << "# command: " << command << "\n";
  out << "# config: " << config.dump() << "\n";
  return out.str();
}

Json json_document(const std::string& command, const Json& config, Json results) {
  Json doc;
  doc["meta"] = {{"starqec_version", version()}, {"command", command}, {"config", config}};
  doc["results"] = std::move(results);
  return doc;
}

// ---- qfi-sweep ----

void validate(const SweepConfig& config) {
  codes::StabilizerCode code;
  try {
    code = codes::code_by_name(config.code);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  require(2 * code.n <= qcore::kMaxQubits, "register of " + std::to_string(2 * code.n) +
                                               " qubits exceeds the 12-qubit limit");
  require(config.channel == "dephasing" || config.channel == "depolarizing" ||
              config.channel == "amplitude-damping",
          "channel must be dephasing, depolarizing or amplitude-damping");
  require(is_probability(config.gamma), "gamma must lie in [0, 1]");
  require(std::isfinite(config.phi), "phi must be finite");
  require(!config.p_grid.empty(), "p_grid must not be empty");
  for (double p : config.p_grid) require(is_probability(p), "p_grid values must lie in [0, 1]");
  require(config.parameter == "phi" || config.parameter == "gamma", "parameter must be phi or gamma");
  require(config.qfi_mode == "averaged" || config.qfi_mode == "syndrome_resolved" ||
              config.qfi_mode == "syndrome-resolved",
          "qfi_mode must be averaged or syndrome_resolved");
}

void apply_json(SweepConfig& config, const Json& json) {
  apply_fields(json, {{"code", set(config.code)},
                      {"channel", set(config.channel)},
                      {"gamma", set(config.gamma)},
                      {"phi", set(config.phi)},
                      {"p_grid", set(config.p_grid)},
                      {"parameter", set(config.parameter)},
                      {"qfi_mode", set(config.qfi_mode)},
                      {"seed", set(config.seed)}});
}

Json to_json(const SweepConfig& config) {
  Json j;
  j["code"] = config.code;
  j["channel"] = config.channel;
  j["gamma"] = config.gamma;
  j["phi"] = config.phi;
  j["p_grid"] = number_array(config.p_grid);
  j["parameter"] = config.parameter;
  j["qfi_mode"] = config.qfi_mode == "syndrome-resolved" ? "syndrome_resolved" : config.qfi_mode;
  j["seed"] = config.seed;
  return j;
}

std::vector<SweepRow> run_qfi_sweep(const SweepConfig& config, const RunOptions& options) {
  validate(config);
  const auto code = codes::code_by_name(config.code);
  const auto unprotected = codes::trivial_code();
  const auto which = metrology::parameter_from_string(config.parameter);
  const auto mode = recovery::qfi_mode_from_string(config.qfi_mode);
  const auto family = source::conditioned_state({0.0, config.gamma, config.phi});
  const double theta = metrology::adaptive_theta(which, config.phi);

  std::vector<SweepRow> rows(config.p_grid.size());
  parallel_for(rows.size(), options.jobs, [&](std::size_t i) {
    const auto start = std::chrono::steady_clock::now();
    const double p = config.p_grid[i];
    const auto channel = channels::channel_by_name(config.channel, p);
    SweepRow row;
    row.p = p;
    const auto averaged = recovery::qec_pipeline(code, channel, family);
    row.qfi = mode == recovery::QfiMode::averaged
                  ? metrology::qfi(averaged, which)
                  : recovery::pipeline_qfi(code, channel, family, which, mode);
    row.qfi_unprotected = metrology::qfi(recovery::qec_pipeline(unprotected, channel, family), which);
    const auto fi = metrology::local_measurement_fi(averaged, theta);
    row.fi_local_at_adaptive_theta = which == metrology::Parameter::phi ? fi.fi_phi : fi.fi_gamma;
    if (options.timing) {
      row.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
    rows[i] = row;
  });
  return rows;
}

std::string render_qfi_sweep(const SweepConfig& config, const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << csv_header("qfi-sweep", to_json(config));
  out << "p,qfi,qfi_unprotected,fi_local_at_adaptive_theta,runtime_ms\n";
  for (const auto& r : rows) {
    out << format_number(r.p) << ',' << format_number(r.qfi) << ',' << format_number(r.qfi_unprotected)
        << ',' << format_number(r.fi_local_at_adaptive_theta) << ',' << format_number(r.runtime_ms)
        << '\n';
  }
  return out.str();
}

// ---- stirap ----

void validate(const StirapConfig& config) {
  require(config.n >= 1, "photon number n must be at least 1");
  require(config.samples >= 2, "samples must be at least 2");
  if (config.optimize) {
    require(config.total_time >= 10.0, "pulse optimization needs total_time >= 10");
  } else {
    stirap::PulseSchedule s = config.schedule;
    s.total_time = config.total_time;
    try {
      s.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
}

void apply_json(StirapConfig& config, const Json& json) {
  auto& s = config.schedule;
  apply_fields(json, {{"total_time", set(config.total_time)},
                      {"n", set(config.n)},
                      {"optimize", set(config.optimize)},
                      {"seed", set(config.seed)},
                      {"samples", set(config.samples)},
                      {"omega0", set(s.omega0)},
                      {"omega1", set(s.omega1)},
                      {"break1", set(s.break1)},
                      {"break2", set(s.break2)},
                      {"tanh_center", set(s.tanh_center)},
                      {"tanh_width", set(s.tanh_width)}});
}

namespace {

Json schedule_json(const stirap::PulseSchedule& s) {
  Json j;
  j["total_time"] = s.total_time;
  j["omega0"] = s.omega0;
  j["omega1"] = s.omega1;
  j["break1"] = s.break1;
  j["break2"] = s.break2;
  j["tanh_center"] = s.tanh_center;
  j["tanh_width"] = s.tanh_width;
  return j;
}

}  // namespace

Json to_json(const StirapConfig& config) {
  Json j;
  j["total_time"] = config.total_time;
  j["n"] = config.n;
  j["optimize"] = config.optimize;
  j["seed"] = config.seed;
  j["samples"] = config.samples;
  if (!config.optimize) {
    const Json schedule = schedule_json(config.schedule);
    for (const auto& [k, v] : schedule.items()) {
      if (k != "total_time") j[k] = v;
    }
  }
  return j;
}

StirapRun run_stirap(const StirapConfig& config) {
  validate(config);
  StirapRun run;
  if (config.optimize) {
    stirap::OptimizeOptions options;
    options.seed = config.seed;
    run.optimization = stirap::optimize_pulse(config.total_time, 1, options);
    if (run.optimization->objective < stirap::kMinTransferFidelity) {
      throw NumericalError("pulse optimization reached transfer " + format_number(run.optimization->objective) +
                           ", below " + format_number(stirap::kMinTransferFidelity));
    }
    run.schedule = run.optimization->schedule;
  } else {
    run.schedule = config.schedule;
    run.schedule.total_time = config.total_time;
  }
  stirap::PropagationOptions options;
  options.samples = config.samples;
  run.trajectory = stirap::propagate(run.schedule, config.n, stirap::initial_photon_state(), options);
  return run;
}

std::string render_stirap(const StirapConfig& config, const StirapRun& run) {
  std::ostringstream out;
  out << csv_header("stirap", to_json(config));
  out << "# schedule: " << schedule_json(run.schedule).dump() << "\n";
  if (run.optimization) {
    out << "# optimizer: {\"converged\":" << (run.optimization->converged ? "true" : "false")
        << ",\"iterations\":" << run.optimization->iterations
        << ",\"objective\":" << format_number(run.optimization->objective) << "}\n";
  }
  out << "t,omega,delta,pop_0R,pop_e,pop_1R\n";
  const auto& tr = run.trajectory;
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    out << format_number(tr.times[i]) << ',' << format_number(tr.omega[i]) << ','
        << format_number(tr.delta[i]) << ',' << format_number(tr.population(i, 2)) << ','
        << format_number(tr.population(i, 1)) << ',' << format_number(tr.population(i, 0)) << '\n';
  }
  return out.str();
}

// ---- protocol ----

void validate(const ProtocolConfig& config) {
  require(!config.epsilon_grid.empty(), "epsilon_grid must not be empty");
  for (double e : config.epsilon_grid) {
    require(e >= 0.0 && e < source::kMaxFockEpsilon, "epsilon values must lie in [0, 0.1)");
  }
  require(is_probability(config.gamma), "gamma must lie in [0, 1]");
  require(std::isfinite(config.phi) && std::isfinite(config.delta), "phi and delta must be finite");
}

void apply_json(ProtocolConfig& config, const Json& json) {
  apply_fields(json, {{"epsilon_grid", set(config.epsilon_grid)},
                      {"gamma", set(config.gamma)},
                      {"phi", set(config.phi)},
                      {"delta", set(config.delta)}});
}

Json to_json(const ProtocolConfig& config) {
  Json j;
  j["epsilon_grid"] = number_array(config.epsilon_grid);
  j["gamma"] = config.gamma;
  j["phi"] = config.phi;
  j["delta"] = config.delta;
  return j;
}

Json run_protocol(const ProtocolConfig& config) {
  validate(config);
  Json results = Json::array();
  for (double eps : config.epsilon_grid) {
    const source::SourceParams params{eps, config.gamma, config.phi};
    const auto captured = encoder::teleport_capture(source::rho_star(params));
    const auto projection = encoder::vacuum_projection(captured.logical);
    Json entry;
    entry["epsilon"] = eps;
    entry["accept_probability"] = projection.accept_probability;
    if (projection.conditioned) {
      const auto reference = source::conditioned_state(params);
      entry["fidelity_with_conditioned_state"] =
          qcore::fidelity(projection.conditioned->matrix(), reference.state.matrix());
      entry["qfi_phi"] = metrology::qfi(reference, metrology::Parameter::phi);
      entry["qfi_gamma"] = metrology::qfi(reference, metrology::Parameter::gamma);
    } else {
      entry["fidelity_with_conditioned_state"] = nullptr;
    }
    Json table = Json::array();
    const auto outcomes =
        encoder::multiphoton_discriminate(encoder::discrimination_input(encoder::memory_mixture(params, config.delta)));
    for (const auto& o : outcomes) {
      table.push_back({{"tag", encoder::to_string(o.tag)},
                       {"level_pair", o.level_pair_odd ? "phi_minus" : "phi_plus"},
                       {"photon_pair", o.photon_pair_odd ? "phi_minus" : "phi_plus"},
                       {"probability", o.probability}});
    }
    entry["discrimination"] = std::move(table);
    results.push_back(std::move(entry));
  }
  return json_document("protocol", to_json(config), std::move(results));
}

// ---- threshold ----

void validate(const ThresholdConfig& config) {
  require(!config.n_grid.empty() && !config.p_grid.empty(), "n_grid and p_grid must not be empty");
  for (long n : config.n_grid) require(n >= 1 && n <= 10000, "n values must lie in [1, 10000]");
  for (double p : config.p_grid) require(is_probability(p), "p_grid values must lie in [0, 1]");
  require(config.distance_rate > 0.0 && config.distance_rate <= 1.0, "distance_rate must lie in (0, 1]");
}

void apply_json(ThresholdConfig& config, const Json& json) {
  apply_fields(json, {{"n_grid", set(config.n_grid)},
                      {"distance_rate", set(config.distance_rate)},
                      {"p_grid", set(config.p_grid)}});
}

Json to_json(const ThresholdConfig& config) {
  Json j;
  j["n_grid"] = config.n_grid;
  j["distance_rate"] = config.distance_rate;
  j["p_grid"] = number_array(config.p_grid);
  return j;
}

std::string render_threshold(const ThresholdConfig& config) {
  validate(config);
  const double threshold = config.distance_rate / 2.0;
  std::ostringstream out;
  out << csv_header("threshold", to_json(config));
  out << "# threshold: " << format_number(threshold) << " ("
      << bounds::format_threshold_percent(threshold) << ")\n";
  out << "n,d,p,chernoff_bound,exact_tail\n";
  for (long n : config.n_grid) {
    const double d = config.distance_rate * static_cast<double>(n);
    for (double p : config.p_grid) {
      const double bound = p < threshold ? bounds::chernoff_fail_bound(n, d, p).bound : 1.0;
      out << n << ',' << format_number(d) << ',' << format_number(p) << ',' << format_number(bound)
          << ',' << format_number(bounds::exact_fail_probability(n, d, p)) << '\n';
    }
  }
  return out.str();
}

// ---- source ----

void validate(const SourceConfig& config) {
  require(!config.epsilon_grid.empty(), "epsilon_grid must not be empty");
  for (double e : config.epsilon_grid) {
    require(e >= 0.0 && e < source::kMaxFockEpsilon, "epsilon values must lie in [0, 0.1)");
  }
  require(is_probability(config.gamma), "gamma must lie in [0, 1]");
  require(std::isfinite(config.phi), "phi must be finite");
}

void apply_json(SourceConfig& config, const Json& json) {
  apply_fields(json, {{"epsilon_grid", set(config.epsilon_grid)},
                      {"gamma", set(config.gamma)},
                      {"phi", set(config.phi)}});
}

Json to_json(const SourceConfig& config) {
  Json j;
  j["epsilon_grid"] = number_array(config.epsilon_grid);
  j["gamma"] = config.gamma;
  j["phi"] = config.phi;
  return j;
}

Json run_source(const SourceConfig& config) {
  validate(config);
  Json results = Json::array();
  for (double eps : config.epsilon_grid) {
    const source::SourceParams params{eps, config.gamma, config.phi};
    const auto diag = source::diagonalize_source(params);
    const auto sectors = source::fock_expansion(params);
    Json entry;
    entry["epsilon"] = eps;
    entry["covariance"] = complex_matrix_json(source::covariance_matrix(params));
    entry["occupations"] = {diag.occupation_a, diag.occupation_b};
    entry["p00"] = sectors.p00;
    entry["one_photon"] = {{"weight", sectors.one_photon.weight},
                           {"psi_plus", sectors.one_photon.plus_fraction},
                           {"psi_minus", sectors.one_photon.minus_fraction}};
    entry["two_photon"] = {{"weight", sectors.two_photon.weight},
                           {"psi2_zero", sectors.two_photon.zero_fraction},
                           {"psi2_plus", sectors.two_photon.plus_fraction},
                           {"psi2_minus", sectors.two_photon.minus_fraction}};
    entry["truncation_deficit"] = sectors.truncation_deficit();
    results.push_back(std::move(entry));
  }
  return json_document("source", to_json(config), std::move(results));
}

}  // namespace starqec::sweep
