#pragma once

// [[n,1,d]] stabilizer codes and the encoding isometry for two-block registers.
//
// Pauli strings are written one letter per qubit from {I, X, Y, Z}; letter i
// acts on qubit i of the block (qubit 0 leftmost, see qcore.hpp).

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "starqec/qcore.hpp"

namespace starqec::codes {

struct StabilizerCode {
  std::string name;
  int n = 0;
  int k = 1;
  int d = 1;
  std::vector<std::string> stabilizers;
  std::string logical_x;
  std::string logical_z;
  ComplexVector codeword0;
  ComplexVector codeword1;
  /// Letters tried when building the syndrome table.
  std::string correction_alphabet = "XYZ";

  /// 2ⁿ × 2 isometry with the codewords as columns.
  ComplexMatrix encoder() const;
};

/// Codewords |0>, |1>, no stabilizers: the unencoded reference.
StabilizerCode trivial_code();
/// X-basis repetition code: |0_L> = |+>^n, |1_L> = |->^n.
StabilizerCode repetition_code(int n);
StabilizerCode four_qubit_code();
/// Cyclic XZZXI generators.
StabilizerCode five_qubit_code();

/// Accepts "none", "rep-<n>", "four-qubit", "five-one-three".
StabilizerCode code_by_name(std::string_view name);

ComplexMatrix pauli_matrix(char letter);
ComplexMatrix pauli_string_matrix(std::string_view paulis);
ComplexVector apply_pauli(std::string_view paulis, const ComplexVector& psi);

bool paulis_commute(std::string_view a, std::string_view b);
int pauli_weight(std::string_view paulis);
/// Letter-wise product up to phase.
std::string pauli_product(std::string_view a, std::string_view b);

/// Visits Pauli strings on n qubits by weight ascending (starting at the
/// identity), then support lexicographic with lowest qubit indices first, then
/// letters in alphabet order. The visitor returns false to stop.
void for_each_pauli(int n, std::string_view alphabet, int max_weight,
                    const std::function<bool(const std::string&)>& visit);

/// Bit j set iff the error anticommutes with stabilizer j.
std::uint32_t syndrome_of(const StabilizerCode& code, std::string_view error);

/// All 2^m elements of the group generated by the m stabilizers, as Pauli
/// strings with phases dropped.
std::vector<std::string> stabilizer_group(const StabilizerCode& code);

/// Smallest weight of a Pauli string over the code's correction alphabet that
/// preserves the codespace but acts on it as a nontrivial logical operator,
/// by exhaustive search up to `max_weight`. Returns −1 if none is found.
int logical_distance(const StabilizerCode& code, int max_weight);

/// V⊗V · op · (V⊗V)† on a 4×4 logical operator.
ComplexMatrix encode_pair(const StabilizerCode& code, const ComplexMatrix& logical);
qcore::DensityMatrix encode_pair(const StabilizerCode& code, const qcore::DensityMatrix& logical);

}  // namespace starqec::codes
