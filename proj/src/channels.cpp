#include "starqec/channels.hpp"

#include <cmath>
#include <set>
#include <string>

#include "starqec/codes.hpp"

namespace starqec::channels {

namespace {

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
  }
}

}  // namespace

KrausChannel identity_channel() {
  return {{ComplexMatrix::Identity(2, 2)}, "identity", 0.0};
}

KrausChannel dephasing(double p) {
  check_probability(p, "dephasing probability");
  return {{std::sqrt(1.0 - p) * codes::pauli_matrix('I'), std::sqrt(p) * codes::pauli_matrix('Z')},
          "dephasing",
          p};
}

KrausChannel depolarizing(double p) {
  check_probability(p, "depolarizing probability");
  const double a = std::sqrt(1.0 - 0.75 * p);
  const double b = std::sqrt(0.25 * p);
  return {{a * codes::pauli_matrix('I'), b * codes::pauli_matrix('X'),
           b * codes::pauli_matrix('Y'), b * codes::pauli_matrix('Z')},
          "depolarizing",
          p};
}

KrausChannel amplitude_damping(double eta) {
  check_probability(eta, "amplitude damping strength");
  ComplexMatrix d0 = ComplexMatrix::Zero(2, 2);
  d0(0, 0) = 1.0;
  d0(1, 1) = std::sqrt(1.0 - eta);
  ComplexMatrix d1 = ComplexMatrix::Zero(2, 2);
  d1(0, 1) = std::sqrt(eta);
  return {{d0, d1}, "amplitude-damping", eta};
}

KrausChannel channel_by_name(std::string_view name, double strength) {
  if (name == "dephasing") return dephasing(strength);
  if (name == "depolarizing") return depolarizing(strength);
  if (name == "amplitude-damping") return amplitude_damping(strength);
  if (name == "identity") return identity_channel();
  throw std::invalid_argument("unknown channel: " + std::string(name));
}

ComplexMatrix apply_iid(const ComplexMatrix& op, std::span<const int> dims,
                        const KrausChannel& channel, std::span<const int> qubits) {
  std::set<int> seen;
  for (int q : qubits) {
    if (!seen.insert(q).second) throw std::invalid_argument("duplicate qubit index in apply_iid");
  }
  ComplexMatrix out = op;
  for (int q : qubits) out = qcore::apply_local_kraus(out, dims, channel, q);
  return out;
}

qcore::DensityMatrix apply_iid(const qcore::DensityMatrix& rho, const KrausChannel& channel,
                               std::span<const int> qubits) {
  ComplexMatrix out = apply_iid(rho.matrix(), rho.factor_dims(), channel, qubits);
  out = (0.5 * (out + out.adjoint())).eval();
  return qcore::DensityMatrix(std::move(out), rho.factor_dims());
}

ComplexMatrix choi_matrix(const KrausChannel& channel) {
  ComplexMatrix choi = ComplexMatrix::Zero(4, 4);
  for (const auto& k : channel.kraus_ops) {
    // vec stacks columns so that choi = Σ_ij |i⟩⟨j| ⊗ Λ(|i⟩⟨j|).
    ComplexVector v(4);
    v << k(0, 0), k(1, 0), k(0, 1), k(1, 1);
    choi += v * v.adjoint();
  }
  return choi;
}

}  // namespace starqec::channels
