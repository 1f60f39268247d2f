#include "starqec/stirap.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <boost/numeric/odeint.hpp>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>
#include <gsl/gsl_vector.h>

namespace starqec::stirap {

namespace odeint = boost::numeric::odeint;

namespace {

using State = SectorState;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }
double logit(double y) { return std::log(y / (1.0 - y)); }

// i dψ/dt = H ψ, with H from hamiltonian_sector for real Ω.
struct SectorRhs {
  const std::function<double(double)>* omega;
  double sqrt_n;

  void operator()(const State& psi, State& dpsi, double t) const {
    const double o = (*omega)(t);
    const double d = 1.0 + o * o;
    const Complex h0 = o * psi[1];
    const Complex h1 = o * psi[0] - d * psi[1] + sqrt_n * psi[2];
    const Complex h2 = sqrt_n * psi[1];
    dpsi[0] = -kI * h0;
    dpsi[1] = -kI * h1;
    dpsi[2] = -kI * h2;
  }
};

auto make_stepper(const PropagationOptions& options) {
  using Dopri = odeint::runge_kutta_dopri5<State>;
  return odeint::make_dense_output(options.tolerance, options.tolerance, options.max_step, Dopri());
}

void check_sector(int n) {
  if (n < 1) throw std::invalid_argument("photon-number sector needs n >= 1");
}

// Search coordinates: unconstrained reals mapped onto a valid schedule.
PulseSchedule schedule_from_search(const double* x, double total_time) {
  PulseSchedule s;
  s.total_time = total_time;
  s.omega0 = kMinOmega0 + 25.0 * sigmoid(x[0]);
  const double r1 = 1e-3 + 0.3 * sigmoid(x[1]);
  const double r2 = r1 + (0.995 - r1) * sigmoid(x[2]);
  s.break1 = r1 * total_time;
  s.break2 = r2 * total_time;
  s.tanh_center = sigmoid(x[3]) * total_time;
  s.tanh_width = (0.01 + 0.5 * sigmoid(x[4])) * total_time;
  s.omega1 = s.omega0 * (1e-3 + (1.0 - 1e-3) * sigmoid(x[5]));
  return s;
}

// Inverse of schedule_from_search for the starting point
// (omega0, t1/T, t2/T, c/T, w/T, omega1/omega0).
std::array<double, 6> search_from_fractions(const std::array<double, 6>& f) {
  const double r1 = f[1];
  return {logit((f[0] - kMinOmega0) / 25.0),
          logit((r1 - 1e-3) / 0.3),
          logit((f[2] - r1) / (0.995 - r1)),
          logit(f[3]),
          logit((f[4] - 0.01) / 0.5),
          logit((f[5] - 1e-3) / (1.0 - 1e-3))};
}

struct SearchContext {
  double total_time;
  int n;
  PropagationOptions options;
};

double search_objective(const gsl_vector* x, void* params) {
  const auto* ctx = static_cast<const SearchContext*>(params);
  const PulseSchedule s = schedule_from_search(x->data, ctx->total_time);
  try {
    return -std::norm(transfer_amplitude(s, ctx->n, ctx->options));
  } catch (const NumericalError&) {
    return 1.0;
  }
}

}  // namespace

double PulseSchedule::omega(double t) const {
  if (t <= 0.0) return omega0;
  if (t >= total_time) return 0.0;
  if (t < break1) return omega0 + (omega1 - omega0) * t / break1;
  auto f = [&](double x) { return 1.0 - std::tanh((x - tanh_center) / tanh_width); };
  if (t < break2) return omega1 * f(t) / f(break1);
  const double at_break2 = omega1 * f(break2) / f(break1);
  return at_break2 * (total_time - t) / (total_time - break2);
}

void PulseSchedule::validate() const {
  if (!(total_time > 0.0)) throw std::invalid_argument("pulse duration must be positive");
  if (!(omega0 >= kMinOmega0)) throw std::invalid_argument("omega0 must be at least 5 g");
  if (!(break1 > 0.0 && break1 < break2 && break2 < total_time)) {
    throw std::invalid_argument("segment breaks must satisfy 0 < t1 < t2 < T");
  }
  if (!(tanh_width > 0.0)) throw std::invalid_argument("tanh width must be positive");
  if (!(omega1 > 0.0 && omega1 <= omega0)) {
    throw std::invalid_argument("omega1 must lie in (0, omega0]");
  }
}

ComplexMatrix hamiltonian_sector(int n, Complex omega, double delta) {
  check_sector(n);
  const double c = std::sqrt(static_cast<double>(n));
  ComplexMatrix h = ComplexMatrix::Zero(3, 3);
  h(0, 1) = std::conj(omega);
  h(1, 0) = omega;
  h(1, 1) = -delta;
  h(1, 2) = c;
  h(2, 1) = c;
  return h;
}

SectorState dark_state(int n, Complex omega) {
  check_sector(n);
  if (omega == Complex{0.0, 0.0}) return {Complex{-1.0, 0.0}, 0.0, 0.0};
  const Complex r = std::sqrt(static_cast<double>(n)) / omega;
  const double norm = std::sqrt(1.0 + std::norm(r));
  return {-r / norm, 0.0, 1.0 / norm};
}

SectorState initial_photon_state() { return {0.0, 0.0, 1.0}; }

PropagationOptions PropagationOptions::refined() const {
  PropagationOptions out = *this;
  out.max_step *= 0.5;
  out.tolerance /= 32.0;
  return out;
}

double Trajectory::population(std::size_t sample, int level) const {
  return std::norm(amplitudes.at(sample).at(static_cast<std::size_t>(level)));
}

double Trajectory::max_excited_population() const {
  double m = 0.0;
  for (const auto& a : amplitudes) m = std::max(m, std::norm(a[1]));
  return m;
}

double Trajectory::max_norm_drift() const {
  double m = 0.0;
  for (const auto& a : amplitudes) {
    const double norm = std::sqrt(std::norm(a[0]) + std::norm(a[1]) + std::norm(a[2]));
    m = std::max(m, std::abs(norm - 1.0));
  }
  return m;
}

Trajectory propagate(const std::function<double(double)>& omega, double total_time, int n,
                     const SectorState& initial, const PropagationOptions& options) {
  check_sector(n);
  if (!(total_time > 0.0)) throw std::invalid_argument("propagation time must be positive");
  if (options.samples < 2) throw std::invalid_argument("need at least two samples");
  Trajectory traj;
  traj.n = n;
  std::vector<double> grid(static_cast<std::size_t>(options.samples));
  for (int i = 0; i < options.samples; ++i) {
    grid[static_cast<std::size_t>(i)] = total_time * i / (options.samples - 1);
  }
  State psi = initial;
  SectorRhs rhs{&omega, std::sqrt(static_cast<double>(n))};
  auto observer = [&](const State& y, double t) {
    traj.times.push_back(t);
    traj.amplitudes.push_back(y);
    const double o = omega(t);
    traj.omega.push_back(o);
    traj.delta.push_back(1.0 + o * o);
  };
  try {
    odeint::integrate_times(make_stepper(options), rhs, psi, grid.begin(), grid.end(),
                            options.max_step, observer, odeint::max_step_checker(1000000));
  } catch (const odeint::step_adjustment_error& e) {
    throw NumericalError(std::string("step-size underflow: ") + e.what());
  } catch (const odeint::no_progress_error& e) {
    throw NumericalError(std::string("integrator made no progress: ") + e.what());
  }
  return traj;
}

Trajectory propagate(const PulseSchedule& schedule, int n, const SectorState& initial,
                     const PropagationOptions& options) {
  schedule.validate();
  const std::function<double(double)> omega = [&](double t) { return schedule.omega(t); };
  return propagate(omega, schedule.total_time, n, initial, options);
}

Complex transfer_amplitude(const PulseSchedule& schedule, int n, const PropagationOptions& options) {
  schedule.validate();
  check_sector(n);
  const std::function<double(double)> omega = [&](double t) { return schedule.omega(t); };
  State psi = initial_photon_state();
  SectorRhs rhs{&omega, std::sqrt(static_cast<double>(n))};
  try {
    odeint::integrate_const(make_stepper(options), rhs, psi, 0.0, schedule.total_time,
                            schedule.total_time, odeint::null_observer(),
                            odeint::max_step_checker(1000000));
  } catch (const odeint::step_adjustment_error& e) {
    throw NumericalError(std::string("step-size underflow: ") + e.what());
  } catch (const odeint::no_progress_error& e) {
    throw NumericalError(std::string("integrator made no progress: ") + e.what());
  }
  return psi[0];
}

OptimizationResult optimize_pulse(double total_time, int objective_n, const OptimizeOptions& options) {
  if (!(total_time >= 10.0)) throw std::invalid_argument("pulse optimization needs T >= 10/g");
  check_sector(objective_n);
  if (options.budget < 1) throw std::invalid_argument("optimizer budget must be positive");

  constexpr std::size_t kDim = 6;
  const auto start = search_from_fractions({22.0, 0.06, 0.95, 0.45, 0.15, 0.55});
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> jitter(0.0, 0.05);

  SearchContext ctx{total_time, objective_n, PropagationOptions{}};
  ctx.options.tolerance = options.search_tolerance;

  gsl_set_error_handler_off();
  gsl_vector* x = gsl_vector_alloc(kDim);
  gsl_vector* step = gsl_vector_alloc(kDim);
  for (std::size_t i = 0; i < kDim; ++i) {
    gsl_vector_set(x, i, start[i] + jitter(rng));
    gsl_vector_set(step, i, 0.5);
  }
  gsl_multimin_function fn{&search_objective, kDim, &ctx};
  gsl_multimin_fminimizer* minimizer = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, kDim);
  gsl_multimin_fminimizer_set(minimizer, &fn, x, step);

  OptimizationResult result;
  int status = GSL_CONTINUE;
  while (status == GSL_CONTINUE && result.iterations < options.budget) {
    ++result.iterations;
    if (gsl_multimin_fminimizer_iterate(minimizer) != GSL_SUCCESS) break;
    status = gsl_multimin_test_size(gsl_multimin_fminimizer_size(minimizer), options.size_tolerance);
    if (1.0 + gsl_multimin_fminimizer_minimum(minimizer) < options.target_infidelity) status = GSL_SUCCESS;
  }
  result.converged = (status == GSL_SUCCESS);
  result.schedule = schedule_from_search(gsl_multimin_fminimizer_x(minimizer)->data, total_time);
  gsl_multimin_fminimizer_free(minimizer);
  gsl_vector_free(step);
  gsl_vector_free(x);

  result.objective = std::norm(transfer_amplitude(result.schedule, objective_n));
  return result;
}

double wrap_phase(double angle) {
  double a = std::remainder(angle, 2.0 * std::numbers::pi);
  if (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
  return a;
}

double adiabatic_phase_deviation(Complex amplitude) { return wrap_phase(std::arg(-amplitude)); }

TwoPhotonPhase two_photon_phase(const PulseSchedule& schedule, const PropagationOptions& options) {
  TwoPhotonPhase out;
  out.a1 = transfer_amplitude(schedule, 1, options);
  out.a2 = transfer_amplitude(schedule, 2, options);
  for (const auto& [n, a] : {std::pair{1, out.a1}, std::pair{2, out.a2}}) {
    if (std::norm(a) < kMinTransferFidelity) {
      std::ostringstream msg;
      msg << "insufficient transfer in sector n=" << n << ": " << std::norm(a);
      throw NumericalError(msg.str());
    }
  }
  out.delta = wrap_phase(2.0 * std::arg(out.a1) - std::arg(out.a2));
  return out;
}

}  // namespace starqec::stirap
