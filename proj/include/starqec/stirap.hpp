#pragma once

// Photon capture by stimulated Raman adiabatic passage, one photon-number
// sector at a time. Units: g = 1, detuning Δ(t) = 1 + Ω(t)².
//
// Sector basis order: {|1_R, n−1⟩, |e, n−1⟩, |0_R, n⟩}.

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "starqec/qcore.hpp"

namespace starqec::stirap {

/// Ω(t): linear from omega0 to omega1 on [0, break1]; omega1·f(t)/f(break1)
/// with f(t) = 1 − tanh((t − tanh_center)/tanh_width) on [break1, break2];
/// linear taper to zero on [break2, total_time].
struct PulseSchedule {
  double total_time = 50.0;
  double omega0 = 20.0;
  double omega1 = 10.0;
  double break1 = 2.5;
  double break2 = 47.5;
  double tanh_center = 25.0;
  double tanh_width = 7.5;

  double omega(double t) const;
  double detuning(double t) const { return 1.0 + omega(t) * omega(t); }
  /// Throws std::invalid_argument unless omega0 ≥ 5, 0 < break1 < break2 < T,
  /// tanh_width > 0 and 0 < omega1 ≤ omega0.
  void validate() const;
};

inline constexpr double kMinOmega0 = 5.0;

using SectorState = std::array<Complex, 3>;

ComplexMatrix hamiltonian_sector(int n, Complex omega, double delta);

/// Normalized (−r, 0, 1) with r = √n/Ω. At Ω = 0 returns the limit −|1_R, n−1⟩.
SectorState dark_state(int n, Complex omega);

SectorState initial_photon_state();  // |0_R, n⟩

struct PropagationOptions {
  double tolerance = 1e-10;  // absolute and relative local error per step
  double max_step = 0.05;
  int samples = 2001;

  /// Halved maximum step and a tolerance reduced by the fifth-order factor 32.
  PropagationOptions refined() const;
};

struct Trajectory {
  int n = 1;
  std::vector<double> times;
  std::vector<double> omega;
  std::vector<double> delta;
  std::vector<SectorState> amplitudes;

  const SectorState& final_state() const { return amplitudes.back(); }
  double population(std::size_t sample, int level) const;
  double max_excited_population() const;
  double max_norm_drift() const;
};

/// Integrates i dψ/dt = H⁽ⁿ⁾(t) ψ with an adaptive Dormand-Prince pair.
Trajectory propagate(const PulseSchedule& schedule, int n, const SectorState& initial,
                     const PropagationOptions& options = {});
/// Same with an arbitrary real Ω(t) on [0, total_time] and Δ = 1 + Ω².
Trajectory propagate(const std::function<double(double)>& omega, double total_time, int n,
                     const SectorState& initial, const PropagationOptions& options = {});

/// Final amplitude on |1_R, n−1⟩ starting from |0_R, n⟩, without sampling.
Complex transfer_amplitude(const PulseSchedule& schedule, int n,
                           const PropagationOptions& options = {});

struct OptimizeOptions {
  std::uint64_t seed = 0;
  int budget = 2000;
  double search_tolerance = 1e-8;  // integrator tolerance during the search
  double size_tolerance = 1e-5;    // simplex size at which the search stops
  double target_infidelity = 1e-6; // or once 1 − transfer falls below this
};

struct OptimizationResult {
  PulseSchedule schedule;
  double objective = 0.0;  // final |1_R, n−1⟩ population at default tolerance
  bool converged = false;
  int iterations = 0;
};

/// Nelder-Mead over (omega0, breaks, tanh center/width, omega1/omega0),
/// maximizing the transfer population in sector objective_n.
OptimizationResult optimize_pulse(double total_time, int objective_n,
                                  const OptimizeOptions& options = {});

struct TwoPhotonPhase {
  double delta = 0.0;  // 2 arg A₁ − arg A₂, wrapped to (−π, π]
  Complex a1;
  Complex a2;
};

inline constexpr double kMinTransferFidelity = 0.99;

/// Throws NumericalError when either sector transfers less than
/// kMinTransferFidelity.
TwoPhotonPhase two_photon_phase(const PulseSchedule& schedule,
                                const PropagationOptions& options = {});

/// Phase of A_n relative to the dark-state connection, which ends on −|1_R⟩.
double adiabatic_phase_deviation(Complex amplitude);

double wrap_phase(double angle);

}  // namespace starqec::stirap
