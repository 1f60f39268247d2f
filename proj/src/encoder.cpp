#include "starqec/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "starqec/codes.hpp"

namespace starqec::encoder {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kOutcomeFloor = 1e-14;

ComplexMatrix projector(const ComplexVector& v) { return v * v.adjoint(); }

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

ComplexVector ket(std::initializer_list<int> bits) {
  std::size_t index = 0;
  for (int b : bits) index = 2 * index + static_cast<std::size_t>(b);
  ComplexVector v = ComplexVector::Zero(Eigen::Index{1} << bits.size());
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return v;
}

ComplexMatrix cz() {
  ComplexMatrix m = ComplexMatrix::Identity(4, 4);
  m(3, 3) = -1.0;
  return m;
}

ComplexMatrix swap_gate() {
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  m(0, 0) = 1.0;
  m(1, 2) = 1.0;
  m(2, 1) = 1.0;
  m(3, 3) = 1.0;
  return m;
}

// (I ± X⊗X)/2: even (+) or odd (−) X-basis parity of a pair.
ComplexMatrix x_parity_projector(bool odd) {
  const ComplexMatrix xx = codes::pauli_string_matrix("XX");
  return 0.5 * (ComplexMatrix::Identity(4, 4) + (odd ? -1.0 : 1.0) * xx);
}

std::optional<qcore::DensityMatrix> normalized(const ComplexMatrix& m, double p,
                                               std::vector<int> dims) {
  if (p <= kOutcomeFloor) return std::nullopt;
  return qcore::DensityMatrix(hermitian_part(m) / p, std::move(dims));
}

}  // namespace

ProtocolState::ProtocolState(qcore::DensityMatrix state, std::vector<std::string> names)
    : rho(std::move(state)), labels(std::move(names)) {
  if (static_cast<int>(labels.size()) != rho.num_factors()) {
    throw std::invalid_argument("one label per tensor factor is required");
  }
  std::set<std::string> seen(labels.begin(), labels.end());
  if (seen.size() != labels.size()) throw std::invalid_argument("protocol labels must be unique");
}

int ProtocolState::index_of(std::string_view label) const {
  const auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) throw std::invalid_argument("missing label: " + std::string(label));
  return static_cast<int>(it - labels.begin());
}

ComplexVector bell_phi_plus() { return kInvSqrt2 * (ket({0, 0}) + ket({1, 1})); }
ComplexVector bell_phi_minus() { return kInvSqrt2 * (ket({0, 0}) - ket({1, 1})); }
ComplexVector bell_psi_plus() { return kInvSqrt2 * (ket({0, 1}) + ket({1, 0})); }
ComplexVector bell_psi_minus() { return kInvSqrt2 * (ket({0, 1}) - ket({1, 0})); }

CaptureResult teleport_capture(const qcore::DensityMatrix& photon_mixture) {
  if (photon_mixture.factor_dims() != std::vector<int>{2, 2}) {
    throw std::invalid_argument("photon mixture must live on two photon-presence qubits");
  }
  // Factor order: L_A, G_A, R_A, L_B, G_B, R_B, P_A, P_B.
  enum { LA, GA, RA, LB, GB, RB, PA, PB };
  const auto dims = qcore::qubit_dims(8);
  const ComplexVector site = qcore::tensor(bell_phi_plus(), ket({0}));  // Φ₀ on (L, G), R = |0⟩
  const ComplexMatrix sites = projector(qcore::tensor(site, site));
  ComplexMatrix rho = qcore::tensor(sites, photon_mixture.matrix());

  // Ideal capture: the photon moves into the red ancilla, leaving the mode empty.
  const int swap_a[] = {RA, PA};
  const int swap_b[] = {RB, PB};
  const ComplexMatrix capture =
      qcore::embed(swap_gate(), dims, swap_b) * qcore::embed(swap_gate(), dims, swap_a);
  rho = capture * rho * capture.adjoint();

  const ComplexVector bell[4] = {bell_phi_plus(), bell_phi_minus(), bell_psi_plus(), bell_psi_minus()};
  const ComplexMatrix x = codes::pauli_matrix('X');
  const ComplexMatrix z = codes::pauli_matrix('Z');
  const ComplexMatrix correction[4] = {ComplexMatrix::Identity(2, 2), z, x, z * x};

  std::vector<BellBranch> branches;
  ComplexMatrix average = ComplexMatrix::Zero(4, 4);
  const int meas_a[] = {RA, GA};
  const int meas_b[] = {RB, GB};
  const int fix_a[] = {LA};
  const int fix_b[] = {LB};
  for (int ma = 0; ma < 4; ++ma) {
    for (int mb = 0; mb < 4; ++mb) {
      const ComplexMatrix k = qcore::embed(correction[ma], dims, fix_a) *
                              qcore::embed(correction[mb], dims, fix_b) *
                              qcore::embed(projector(bell[ma]), dims, meas_a) *
                              qcore::embed(projector(bell[mb]), dims, meas_b);
      const ComplexMatrix branch = k * rho * k.adjoint();
      const double p = branch.trace().real();
      if (p <= kOutcomeFloor) continue;
      const ComplexMatrix logical = qcore::partial_trace(branch, dims, {LA, LB});
      average += logical;
      branches.push_back({ma, mb, p, qcore::DensityMatrix(hermitian_part(logical) / p, {2, 2})});
    }
  }
  return {qcore::DensityMatrix(hermitian_part(average) / average.trace().real(), {2, 2}),
          std::move(branches)};
}

VacuumProjection vacuum_projection(const qcore::DensityMatrix& rho_ab) {
  if (rho_ab.factor_dims() != std::vector<int>{2, 2}) {
    throw std::invalid_argument("vacuum projection acts on two logical qubits");
  }
  // Factor order: L_A, L_B, C_A, C_B.
  const auto dims = qcore::qubit_dims(4);
  ComplexMatrix rho = qcore::tensor(rho_ab.matrix(), projector(bell_phi_plus()));
  const int cz_a[] = {0, 2};
  const int cz_b[] = {1, 3};
  const ComplexMatrix gates = qcore::embed(cz(), dims, cz_a) * qcore::embed(cz(), dims, cz_b);
  rho = gates * rho * gates.adjoint();

  VacuumProjection out;
  out.evolved = rho;
  const int ancillae[] = {2, 3};
  const ComplexMatrix odd = qcore::embed(x_parity_projector(true), dims, ancillae);
  const ComplexMatrix even = qcore::embed(x_parity_projector(false), dims, ancillae);
  const ComplexMatrix accepted = qcore::partial_trace(odd * rho * odd, dims, {0, 1});
  const ComplexMatrix rejected = qcore::partial_trace(even * rho * even, dims, {0, 1});
  out.accept_probability = std::max(0.0, accepted.trace().real());
  out.conditioned = normalized(accepted, out.accept_probability, {2, 2});
  out.rejected = normalized(rejected, rejected.trace().real(), {2, 2});
  return out;
}

const char* to_string(PhotonTag tag) {
  switch (tag) {
    case PhotonTag::zero_or_contaminated: return "zero_or_contaminated";
    case PhotonTag::one_photon: return "one_photon";
    case PhotonTag::two_photon: return "two_photon";
    case PhotonTag::unclassified: return "unclassified";
  }
  return "unknown";
}

ProtocolState discrimination_input(const qcore::DensityMatrix& memory) {
  if (memory.factor_dims() != qcore::qubit_dims(4)) {
    throw std::invalid_argument("memory state must live on four qubits (l_A, p_A, l_B, p_B)");
  }
  // Ancilla order (bell_l_A, bell_l_B, bell_p_A, bell_p_B): Φ⁺_l then Φ⁺_p.
  const ComplexMatrix pairs = projector(qcore::tensor(bell_phi_plus(), bell_phi_plus()));
  return ProtocolState(qcore::DensityMatrix(qcore::tensor(memory.matrix(), pairs), qcore::qubit_dims(8)),
                       kDiscriminationLabels);
}

std::vector<DiscriminationOutcome> multiphoton_discriminate(const ProtocolState& state) {
  const auto& dims = state.rho.factor_dims();
  for (int d : dims) {
    if (d != 2) throw std::invalid_argument("discrimination expects qubit factors only");
  }
  const int l_a = state.index_of("l_A");
  const int p_a = state.index_of("p_A");
  const int l_b = state.index_of("l_B");
  const int p_b = state.index_of("p_B");
  const int bl_a = state.index_of("bell_l_A");
  const int bl_b = state.index_of("bell_l_B");
  const int bp_a = state.index_of("bell_p_A");
  const int bp_b = state.index_of("bell_p_B");

  ComplexMatrix gates = ComplexMatrix::Identity(state.rho.dim(), state.rho.dim());
  for (const auto& [control, target] : {std::pair{l_a, bl_a}, std::pair{l_b, bl_b},
                                        std::pair{p_a, bp_a}, std::pair{p_b, bp_b}}) {
    const int targets[] = {control, target};
    gates = qcore::embed(cz(), dims, targets) * gates;
  }
  const ComplexMatrix rho = gates * state.rho.matrix() * gates.adjoint();

  const int level_pair[] = {bl_a, bl_b};
  const int photon_pair[] = {bp_a, bp_b};
  const std::vector<int> memory = {l_a, p_a, l_b, p_b};
  std::vector<int> keep = memory;
  std::sort(keep.begin(), keep.end());
  if (keep != memory) throw std::invalid_argument("memory factors must precede in order l_A, p_A, l_B, p_B");

  struct Case {
    bool level_odd;
    bool photon_odd;
    PhotonTag tag;
  };
  const Case cases[] = {{false, false, PhotonTag::zero_or_contaminated},
                        {true, false, PhotonTag::one_photon},
                        {true, true, PhotonTag::two_photon},
                        {false, true, PhotonTag::unclassified}};
  std::vector<DiscriminationOutcome> out;
  for (const auto& c : cases) {
    const ComplexMatrix proj = qcore::embed(x_parity_projector(c.level_odd), dims, level_pair) *
                               qcore::embed(x_parity_projector(c.photon_odd), dims, photon_pair);
    const ComplexMatrix reduced = qcore::partial_trace(proj * rho * proj, dims, keep);
    const double p = std::max(0.0, reduced.trace().real());
    out.push_back({c.tag, c.level_odd, c.photon_odd, p, normalized(reduced, p, qcore::qubit_dims(4))});
  }
  return out;
}

MemoryStates memory_states(double phi, double delta) {
  const Complex e1 = std::exp(kI * phi);
  const Complex e2 = std::exp(2.0 * kI * phi);
  const Complex ed = std::exp(kI * (phi + delta));
  // Order (l_A, p_A, l_B, p_B).
  const ComplexVector a_one = ket({1, 0, 0, 0});
  const ComplexVector b_one = ket({0, 0, 1, 0});
  const ComplexVector a_two = ket({1, 1, 0, 0});
  const ComplexVector b_two = ket({0, 0, 1, 1});
  const ComplexVector both = ket({1, 0, 1, 0});
  MemoryStates m;
  m.vacuum = ket({0, 0, 0, 0});
  m.one_plus = kInvSqrt2 * (a_one + e1 * b_one);
  m.one_minus = kInvSqrt2 * (a_one - e1 * b_one);
  m.two_zero = kInvSqrt2 * (a_two - e2 * b_two);
  m.two_plus = 0.5 * a_two + kInvSqrt2 * ed * both + 0.5 * e2 * b_two;
  m.two_minus = 0.5 * a_two - kInvSqrt2 * ed * both + 0.5 * e2 * b_two;
  return m;
}

qcore::DensityMatrix memory_mixture(const source::SourceParams& params, double delta) {
  const auto sectors = source::fock_expansion(params);
  const auto m = memory_states(params.phi, delta);
  const auto& one = sectors.one_photon;
  const auto& two = sectors.two_photon;
  ComplexMatrix rho = sectors.p00 * projector(m.vacuum) +
                      one.weight * (one.plus_fraction * projector(m.one_plus) +
                                    one.minus_fraction * projector(m.one_minus)) +
                      two.weight * (two.zero_fraction * projector(m.two_zero) +
                                    two.plus_fraction * projector(m.two_plus) +
                                    two.minus_fraction * projector(m.two_minus));
  rho /= rho.trace().real();
  return qcore::DensityMatrix(hermitian_part(rho), qcore::qubit_dims(4));
}

}  // namespace starqec::encoder
