#pragma once

// Logical-level simulation of photon capture: teleportation of the captured
// photon onto the registers, the CZ parity check that removes the vacuum, and
// the level/photon parity checks that separate multi-photon events.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "starqec/qcore.hpp"
#include "starqec/source.hpp"

namespace starqec::encoder {

/// A register state whose factors carry unique names.
struct ProtocolState {
  qcore::DensityMatrix rho;
  std::vector<std::string> labels;

  ProtocolState(qcore::DensityMatrix rho, std::vector<std::string> labels);
  int index_of(std::string_view label) const;
};

ComplexVector bell_phi_plus();
ComplexVector bell_phi_minus();
ComplexVector bell_psi_plus();
ComplexVector bell_psi_minus();

struct BellBranch {
  int outcome_a = 0;  // 0..3 for Φ+, Φ−, Ψ+, Ψ−
  int outcome_b = 0;
  double probability = 0.0;
  qcore::DensityMatrix logical;  // after the Pauli correction
};

struct CaptureResult {
  qcore::DensityMatrix logical;  // branch average, on (L_A, L_B)
  std::vector<BellBranch> branches;
};

/// photon_mixture lives on the two photon-presence qubits (P_A, P_B) in the
/// dual-rail convention. Per site: register L and green ancilla G start in
/// Φ₀, the red ancilla R in |0⟩; ideal capture swaps the photon into R; a Bell
/// measurement on (R, G) and a Pauli correction on L complete teleportation.
CaptureResult teleport_capture(const qcore::DensityMatrix& photon_mixture);

struct VacuumProjection {
  double accept_probability = 0.0;
  std::optional<qcore::DensityMatrix> conditioned;  // absent when nothing is accepted
  std::optional<qcore::DensityMatrix> rejected;
  /// Register ⊗ ancilla pair after both CZ gates, factor order (L_A, L_B, C_A, C_B).
  ComplexMatrix evolved;
};

/// Appends a Φ⁺ pair (C_A, C_B), applies CZ(L_A, C_A) and CZ(L_B, C_B),
/// measures both ancillae in the X basis and keeps odd parity.
VacuumProjection vacuum_projection(const qcore::DensityMatrix& rho_ab);

enum class PhotonTag { zero_or_contaminated, one_photon, two_photon, unclassified };
const char* to_string(PhotonTag tag);

struct DiscriminationOutcome {
  PhotonTag tag = PhotonTag::zero_or_contaminated;
  bool level_pair_odd = false;   // Φ⁻_l observed
  bool photon_pair_odd = false;  // Φ⁻_p observed
  double probability = 0.0;
  std::optional<qcore::DensityMatrix> post_state;  // on (l_A, p_A, l_B, p_B)
};

/// Memory factor labels, then the level-type and photon-type Bell ancillae.
inline const std::vector<std::string> kDiscriminationLabels = {
    "l_A", "p_A", "l_B", "p_B", "bell_l_A", "bell_l_B", "bell_p_A", "bell_p_B"};

/// Wraps a 16×16 memory state on (l_A, p_A, l_B, p_B) with fresh Φ⁺_l, Φ⁺_p.
ProtocolState discrimination_input(const qcore::DensityMatrix& memory);

/// CZ from each memory qubit to its ancilla, X-basis parity of each ancilla
/// pair. Outcomes are listed in the order (Φ⁺_l,Φ⁺_p), (Φ⁻_l,Φ⁺_p),
/// (Φ⁻_l,Φ⁻_p), (Φ⁺_l,Φ⁻_p).
std::vector<DiscriminationOutcome> multiphoton_discriminate(const ProtocolState& state);

/// Memory states (l_A, p_A, l_B, p_B) after capture of 0, 1 or 2 photons.
struct MemoryStates {
  ComplexVector vacuum;
  ComplexVector one_plus;   // (|1_l0_p,00⟩ + e^{iφ}|00,1_l0_p⟩)/√2
  ComplexVector one_minus;
  ComplexVector two_zero;   // ψ₁ = (|1_l1_p,00⟩ − e^{2iφ}|00,1_l1_p⟩)/√2
  ComplexVector two_plus;   // ψ₂, with phase δ on |1_l0_p,1_l0_p⟩
  ComplexVector two_minus;  // ψ₃
};

MemoryStates memory_states(double phi, double delta);

/// Mixture over the truncated Fock sectors, renormalized to unit trace.
qcore::DensityMatrix memory_mixture(const source::SourceParams& params, double delta);

}  // namespace starqec::encoder
