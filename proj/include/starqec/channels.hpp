#pragma once

// Single-qubit noise channels and their i.i.d. application to registers.

#include <span>
#include <string_view>

#include "starqec/qcore.hpp"

namespace starqec::channels {

using qcore::KrausChannel;

KrausChannel identity_channel();
/// {√(1−p) I, √p Z}
KrausChannel dephasing(double p);
/// {√(1−3p/4) I, √(p/4) X, √(p/4) Y, √(p/4) Z}, i.e. (1−p)ρ + p I/2.
KrausChannel depolarizing(double p);
/// D₀ = diag(1, √(1−η)), D₁ = √η |0⟩⟨1|; |1⟩ is the excited level.
KrausChannel amplitude_damping(double eta);

/// Accepts "dephasing", "depolarizing", "amplitude-damping", "identity".
KrausChannel channel_by_name(std::string_view name, double strength);

/// Applies the channel to each listed qubit in turn. Duplicate indices are
/// rejected; the result does not depend on the order.
ComplexMatrix apply_iid(const ComplexMatrix& op, std::span<const int> dims,
                        const KrausChannel& channel, std::span<const int> qubits);
qcore::DensityMatrix apply_iid(const qcore::DensityMatrix& rho, const KrausChannel& channel,
                               std::span<const int> qubits);

/// Σ_k vec(K_k) vec(K_k)†, i.e. (id ⊗ Λ)(|Ω⟩⟨Ω|) up to normalization.
ComplexMatrix choi_matrix(const KrausChannel& channel);

}  // namespace starqec::channels
