#pragma once

// Two-mode weak thermal starlight: covariance matrix, its diagonalizing
// transform, the Fock expansion to two photons, and the single-photon state
// family with analytic parameter derivatives.
//
// Dual-rail convention: |1_p>_A|vac>_B is the two-qubit basis state |10>,
// |vac>_A|1_p>_B is |01>. With that convention
//   psi_±^φ = (|10> ± e^{iφ}|01>)/√2,
// and the same vectors describe the logical register state after capture.

#include "starqec/qcore.hpp"

namespace starqec::source {

struct SourceParams {
  double epsilon = 0.0;  // mean total photon number
  double gamma = 0.0;    // mutual coherence in [0, 1]
  double phi = 0.0;      // interferometric phase

  void validate() const;
};

/// A state together with its derivatives with respect to φ and γ.
struct ParamDerivativeFamily {
  qcore::DensityMatrix state;
  ComplexMatrix d_phi;
  ComplexMatrix d_gamma;
};

struct SourceDiagonalization {
  ComplexMatrix transform;  // S: beam splitter after a phase shifter on mode b
  ComplexMatrix diagonal;   // S Σ Sᵀ
  double occupation_a = 0.0;
  double occupation_b = 0.0;
};

struct OnePhotonSector {
  double weight = 0.0;
  double plus_fraction = 0.0;   // on psi_+^φ
  double minus_fraction = 0.0;  // on psi_-^φ
};

struct TwoPhotonSector {
  double weight = 0.0;
  double zero_fraction = 0.0;   // Ψ²₀ = (|20> − e^{2iφ}|02>)/√2
  double plus_fraction = 0.0;   // Ψ²₊ = (|20> + √2 e^{iφ}|11> + e^{2iφ}|02>)/2
  double minus_fraction = 0.0;  // Ψ²₋ = (|20> − √2 e^{iφ}|11> + e^{2iφ}|02>)/2
};

struct PhotonSectorDecomposition {
  double n_a = 0.0;
  double n_b = 0.0;
  double p00 = 0.0;
  OnePhotonSector one_photon;
  TwoPhotonSector two_photon;

  /// Probability carried by three or more photons, dropped by the truncation.
  double truncation_deficit() const;
};

inline constexpr double kMaxFockEpsilon = 0.1;

ComplexVector psi_plus(double phi);
ComplexVector psi_minus(double phi);

/// Covariance matrix in the operator basis {a, a†, b, b†}.
ComplexMatrix covariance_matrix(const SourceParams& params);

SourceDiagonalization diagonalize_source(const SourceParams& params);

PhotonSectorDecomposition fock_expansion(const SourceParams& params);

/// Two-photon sector states on the two-mode Fock space truncated at two
/// photons per mode (dimension 9, index 3*n_a + n_b).
ComplexVector two_photon_state_zero(double phi);
ComplexVector two_photon_state_plus(double phi);
ComplexVector two_photon_state_minus(double phi);

/// Truncated two-mode Fock density matrix (unnormalized: weights as in
/// fock_expansion), factor dims {3, 3}.
ComplexMatrix truncated_fock_state(const SourceParams& params);

/// ρ′ = (1+γ)/2 |psi_+⟩⟨psi_+| + (1−γ)/2 |psi_-⟩⟨psi_-| with ∂φρ′ and ∂γρ′.
ParamDerivativeFamily conditioned_state(const SourceParams& params);

/// (1−ε)|00⟩⟨00| + ε ρ′ on the dual-rail qubits.
qcore::DensityMatrix rho_star(const SourceParams& params);
ParamDerivativeFamily rho_star_family(const SourceParams& params);

}  // namespace starqec::source
