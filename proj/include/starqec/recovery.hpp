#pragma once

// Syndrome extraction, minimum-weight correction, decoding, and the full
// encode → noise → recover → decode pipeline on a two-block register.
//
// For syndrome s with correction C_s, let W_s = [C_s|0_L⟩, C_s|1_L⟩]. The
// recovery channel is Σ_s V W_s† ρ W_s V†, where V is the encoder; this is the
// projective syndrome measurement followed by C_s, written so that each branch
// lands directly in logical coordinates.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "starqec/codes.hpp"
#include "starqec/metrology.hpp"
#include "starqec/qcore.hpp"
#include "starqec/source.hpp"

namespace starqec::recovery {

struct SyndromeTable {
  int num_stabilizers = 0;
  std::vector<std::string> corrections;  // indexed by syndrome bits

  const std::string& correction(std::uint32_t syndrome) const;
  std::size_t size() const { return corrections.size(); }
};

/// Exhaustive search by weight ascending over the code's correction alphabet;
/// the first hit per syndrome wins (see codes::for_each_pauli for the order).
SyndromeTable build_syndrome_table(const codes::StabilizerCode& code);

struct RecoveryBranch {
  std::uint32_t syndrome = 0;
  double probability = 0.0;
  qcore::DensityMatrix state;  // normalized, after correction
};

struct RecoveryOutput {
  qcore::DensityMatrix averaged_state;
  std::vector<RecoveryBranch> syndrome_branches;  // filled on request
};

/// Per-syndrome maps W_s, in syndrome order.
std::vector<ComplexMatrix> recovery_isometries(const codes::StabilizerCode& code,
                                               const SyndromeTable& table);

RecoveryOutput recover_block(const qcore::DensityMatrix& rho, const codes::StabilizerCode& code,
                             int block_offset, bool with_branches = false);
/// The same linear map on an arbitrary operator (used for derivatives).
ComplexMatrix recover_block(const ComplexMatrix& op, std::span<const int> dims,
                            const codes::StabilizerCode& code, int block_offset);

inline constexpr double kLeakageTol = 1e-8;

/// (V⊗V)† ρ (V⊗V). Throws NumericalError if more than kLeakageTol of the
/// trace lies outside the two-block codespace.
qcore::DensityMatrix decode_pair(const qcore::DensityMatrix& rho, const codes::StabilizerCode& code);
ComplexMatrix decode_pair(const ComplexMatrix& op, const codes::StabilizerCode& code);

/// Images of |a⟩⟨b| (index 2a+b) under one block's encode → noise →
/// syndrome-s recovery → decode, for one syndrome.
struct BlockBranchMap {
  std::uint32_t syndrome = 0;
  std::array<ComplexMatrix, 4> images;
};

std::vector<BlockBranchMap> block_logical_maps(const codes::StabilizerCode& code,
                                               const qcore::KrausChannel& channel);

/// Applies map_a ⊗ map_b to a 4×4 logical operator.
ComplexMatrix apply_pair_map(const BlockBranchMap& map_a, const BlockBranchMap& map_b,
                             const ComplexMatrix& op);

/// Syndrome-averaged pipeline, evaluated with the single-block logical maps.
source::ParamDerivativeFamily qec_pipeline(const codes::StabilizerCode& code,
                                           const qcore::KrausChannel& channel,
                                           const source::ParamDerivativeFamily& family);

/// The same pipeline run literally on the 2n-qubit register.
source::ParamDerivativeFamily qec_pipeline_register(const codes::StabilizerCode& code,
                                                    const qcore::KrausChannel& channel,
                                                    const source::ParamDerivativeFamily& family);

struct ResolvedBranch {
  std::uint32_t syndrome_a = 0;
  std::uint32_t syndrome_b = 0;
  double probability = 0.0;
  source::ParamDerivativeFamily family;  // normalized branch state and its derivatives
};

inline constexpr double kBranchProbabilityFloor = 1e-14;

/// Joint syndrome branches (s_A, s_B) with probability above the floor.
std::vector<ResolvedBranch> qec_pipeline_branches(const codes::StabilizerCode& code,
                                                  const qcore::KrausChannel& channel,
                                                  const source::ParamDerivativeFamily& family);

enum class QfiMode { averaged, syndrome_resolved };

QfiMode qfi_mode_from_string(std::string_view name);
const char* to_string(QfiMode mode);

/// Σ_s p_s J(ρ_s).
double resolved_qfi(const std::vector<ResolvedBranch>& branches, metrology::Parameter which);

double pipeline_qfi(const codes::StabilizerCode& code, const qcore::KrausChannel& channel,
                    const source::ParamDerivativeFamily& family, metrology::Parameter which,
                    QfiMode mode);

}  // namespace starqec::recovery
