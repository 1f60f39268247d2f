#pragma once

// Symmetric logarithmic derivatives, quantum and classical Fisher information,
// and the observables used to reach the quantum Cramér-Rao bound.
//
// All QFIs are per photon: they refer to whatever trace-1 family is passed in.

#include <array>

#include "starqec/qcore.hpp"
#include "starqec/source.hpp"

namespace starqec::metrology {

enum class Parameter { phi, gamma };

const char* to_string(Parameter which);
Parameter parameter_from_string(std::string_view name);

inline constexpr double kRankCutoff = 1e-12;

struct SldResult {
  ComplexMatrix sld;
  double qfi = 0.0;
  double rank_cutoff_used = kRankCutoff;
};

struct ObservableSpec {
  ComplexMatrix matrix;
  double adjustable_phase = 0.0;
};

struct LocalFisher {
  double fi_phi = 0.0;
  double fi_gamma = 0.0;
};

const ComplexMatrix& derivative(const source::ParamDerivativeFamily& family, Parameter which);

/// L = 2 Σ_{p_n+p_m > cutoff} ⟨e_m|∂ρ|e_n⟩/(p_n+p_m) |e_m⟩⟨e_n| and
/// J = Σ 2|⟨e_m|∂ρ|e_n⟩|²/(p_n+p_m) over the same pairs.
SldResult sld_and_qfi(const ComplexMatrix& rho, const ComplexMatrix& drho,
                      double cutoff = kRankCutoff);
SldResult sld_and_qfi(const source::ParamDerivativeFamily& family, Parameter which);

double qfi(const source::ParamDerivativeFamily& family, Parameter which);

/// Tr(ρ [L_φ, L_γ]).
Complex compatibility(const source::ParamDerivativeFamily& family);

/// 1/(N·J). Throws NumericalError when J is not positive (unidentifiable).
double crb_variance(double qfi, long n_probes);

/// Product basis (|0⟩ ± e^{iθ}|1⟩)/√2 ⊗ (|0⟩ ± |1⟩)/√2 in outcome order
/// (+,+), (+,−), (−,+), (−,−).
std::array<ComplexVector, 4> local_measurement_basis(double theta);

/// Classical Fisher information of the local product measurement, from the
/// outcome probabilities and their analytic derivatives.
LocalFisher local_measurement_fi(const source::ParamDerivativeFamily& family, double theta);

/// θ that saturates the QFI of the noiseless state: π/2 − φ for φ, −φ for γ.
double adaptive_theta(Parameter which, double phi);

/// (Tr ρX² − (Tr ρX)²)/|∂ Tr ρX|². Throws NumericalError when the slope
/// magnitude is at most 1e-12.
double error_propagation_variance(const source::ParamDerivativeFamily& family,
                                  const ObservableSpec& obs, Parameter which);

/// P = e^{iα}|10⟩⟨01| + e^{−iα}|01⟩⟨10|, so that Tr(ρ′P) = γcos(α+φ) like the
/// separable observable.
ObservableSpec sld_observable(double alpha);
/// Parity of the local outcomes in the basis (|0⟩ ± e^{iα}|1⟩) ⊗ (|0⟩ ± |1⟩).
ObservableSpec separable_observable(double alpha);
/// θ·I + L/J.
ObservableSpec optimal_estimator(double theta_ref, const SldResult& sld);

}  // namespace starqec::metrology
