#include "starqec/codes.hpp"

#include <charconv>
#include <cmath>

namespace starqec::codes {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void check_pauli_string(std::string_view paulis) {
  for (char c : paulis) {
    if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') {
      throw std::invalid_argument("Pauli strings use only the letters I, X, Y, Z");
    }
  }
}

ComplexVector basis_state(int n, std::uint64_t index) {
  ComplexVector v = ComplexVector::Zero(Eigen::Index{1} << n);
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return v;
}

ComplexVector product_state(int n, const ComplexVector& single) {
  ComplexVector v = single;
  for (int i = 1; i < n; ++i) v = qcore::tensor(v, single);
  return v;
}

// Projects psi onto the +1 eigenspace of every stabilizer and normalizes.
ComplexVector project_codespace(const std::vector<std::string>& stabilizers, ComplexVector psi) {
  for (const auto& s : stabilizers) psi = 0.5 * (psi + apply_pauli(s, psi));
  const double norm = psi.norm();
  if (norm < 1e-8) throw std::logic_error("reference state has no codespace component");
  return psi / norm;
}

}  // namespace

ComplexMatrix StabilizerCode::encoder() const {
  ComplexMatrix v(codeword0.size(), 2);
  v.col(0) = codeword0;
  v.col(1) = codeword1;
  return v;
}

ComplexMatrix pauli_matrix(char letter) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  switch (letter) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -kI, kI, 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("unknown Pauli letter");
  }
  return m;
}

ComplexMatrix pauli_string_matrix(std::string_view paulis) {
  check_pauli_string(paulis);
  if (paulis.empty()) return ComplexMatrix::Identity(1, 1);
  ComplexMatrix m = pauli_matrix(paulis[0]);
  for (std::size_t i = 1; i < paulis.size(); ++i) m = qcore::tensor(m, pauli_matrix(paulis[i]));
  return m;
}

ComplexVector apply_pauli(std::string_view paulis, const ComplexVector& psi) {
  check_pauli_string(paulis);
  const int n = static_cast<int>(paulis.size());
  if (psi.size() != (Eigen::Index{1} << n)) {
    throw std::invalid_argument("Pauli string length does not match the state dimension");
  }
  std::uint64_t x_mask = 0;
  std::uint64_t z_mask = 0;
  int y_count = 0;
  for (int q = 0; q < n; ++q) {
    const std::uint64_t bit = std::uint64_t{1} << (n - 1 - q);
    const char c = paulis[q];
    if (c == 'X' || c == 'Y') x_mask |= bit;
    if (c == 'Z' || c == 'Y') z_mask |= bit;
    if (c == 'Y') ++y_count;
  }
  // Y = i·X·Z, so P|b> = i^{#Y} (−1)^{popcount(b & z)} |b ^ x>.
  static const Complex kIPowers[4] = {1.0, kI, -1.0, -kI};
  const Complex global = kIPowers[y_count % 4];
  ComplexVector out(psi.size());
  for (Eigen::Index b = 0; b < psi.size(); ++b) {
    const auto ub = static_cast<std::uint64_t>(b);
    const double sign = (__builtin_popcountll(ub & z_mask) % 2) ? -1.0 : 1.0;
    out(static_cast<Eigen::Index>(ub ^ x_mask)) = global * sign * psi(b);
  }
  return out;
}

bool paulis_commute(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) throw std::invalid_argument("Pauli strings differ in length");
  int anticommuting = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != 'I' && b[i] != 'I' && a[i] != b[i]) ++anticommuting;
  }
  return anticommuting % 2 == 0;
}

int pauli_weight(std::string_view paulis) {
  int w = 0;
  for (char c : paulis) w += (c != 'I');
  return w;
}

std::string pauli_product(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) throw std::invalid_argument("Pauli strings differ in length");
  auto bits = [](char c) { return (c == 'X' ? 1 : c == 'Z' ? 2 : c == 'Y' ? 3 : 0); };
  static const char kLetters[4] = {'I', 'X', 'Z', 'Y'};
  std::string out(a.size(), 'I');
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = kLetters[bits(a[i]) ^ bits(b[i])];
  return out;
}

void for_each_pauli(int n, std::string_view alphabet, int max_weight,
                    const std::function<bool(const std::string&)>& visit) {
  if (alphabet.empty()) throw std::invalid_argument("empty Pauli alphabet");
  const int letters = static_cast<int>(alphabet.size());
  for (int w = 0; w <= std::min(max_weight, n); ++w) {
    std::vector<int> support(w);
    for (int i = 0; i < w; ++i) support[i] = i;
    while (true) {
      std::vector<int> choice(w, 0);
      while (true) {
        std::string p(n, 'I');
        for (int i = 0; i < w; ++i) p[support[i]] = alphabet[choice[i]];
        if (!visit(p)) return;
        int pos = w - 1;
        while (pos >= 0 && choice[pos] == letters - 1) choice[pos--] = 0;
        if (pos < 0) break;
        ++choice[pos];
      }
      int pos = w - 1;
      while (pos >= 0 && support[pos] == n - w + pos) --pos;
      if (pos < 0) break;
      ++support[pos];
      for (int i = pos + 1; i < w; ++i) support[i] = support[i - 1] + 1;
    }
  }
}

std::uint32_t syndrome_of(const StabilizerCode& code, std::string_view error) {
  if (static_cast<int>(error.size()) != code.n) {
    throw std::invalid_argument("error string length differs from code length");
  }
  std::uint32_t s = 0;
  for (std::size_t j = 0; j < code.stabilizers.size(); ++j) {
    if (!paulis_commute(code.stabilizers[j], error)) s |= (std::uint32_t{1} << j);
  }
  return s;
}

std::vector<std::string> stabilizer_group(const StabilizerCode& code) {
  const std::size_t m = code.stabilizers.size();
  std::vector<std::string> group;
  group.reserve(std::size_t{1} << m);
  for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
    std::string p(code.n, 'I');
    for (std::size_t j = 0; j < m; ++j) {
      if (mask & (std::size_t{1} << j)) p = pauli_product(p, code.stabilizers[j]);
    }
    group.push_back(std::move(p));
  }
  return group;
}

int logical_distance(const StabilizerCode& code, int max_weight) {
  const ComplexMatrix v = code.encoder();
  int found = -1;
  for_each_pauli(code.n, code.correction_alphabet, max_weight, [&](const std::string& p) {
    if (pauli_weight(p) == 0 || syndrome_of(code, p) != 0) return true;
    ComplexMatrix pv(v.rows(), 2);
    pv.col(0) = apply_pauli(p, v.col(0));
    pv.col(1) = apply_pauli(p, v.col(1));
    const ComplexMatrix logical = v.adjoint() * pv;
    const bool trivial = std::abs(logical(0, 1)) < 1e-9 && std::abs(logical(1, 0)) < 1e-9 &&
                         std::abs(logical(0, 0) - logical(1, 1)) < 1e-9;
    if (trivial) return true;
    found = pauli_weight(p);
    return false;
  });
  return found;
}

StabilizerCode trivial_code() {
  StabilizerCode code;
  code.name = "none";
  code.n = 1;
  code.d = 1;
  code.logical_x = "X";
  code.logical_z = "Z";
  code.codeword0 = basis_state(1, 0);
  code.codeword1 = basis_state(1, 1);
  return code;
}

StabilizerCode repetition_code(int n) {
  if (n < 1) throw std::invalid_argument("repetition code needs n >= 1");
  if (n > 6) throw std::invalid_argument("repetition code limited to n <= 6 (two blocks within 12 qubits)");
  StabilizerCode code;
  code.name = "rep-" + std::to_string(n);
  code.n = n;
  code.d = n;
  for (int i = 0; i + 1 < n; ++i) {
    std::string s(n, 'I');
    s[i] = 'X';
    s[i + 1] = 'X';
    code.stabilizers.push_back(s);
  }
  code.logical_x = std::string(n, 'Z');
  code.logical_z = "X" + std::string(n - 1, 'I');
  ComplexVector plus(2), minus(2);
  plus << kInvSqrt2, kInvSqrt2;
  minus << kInvSqrt2, -kInvSqrt2;
  code.codeword0 = product_state(n, plus);
  code.codeword1 = product_state(n, minus);
  code.correction_alphabet = "Z";
  return code;
}

StabilizerCode four_qubit_code() {
  StabilizerCode code;
  code.name = "four-qubit";
  code.n = 4;
  code.d = 2;
  code.stabilizers = {"XXXX", "ZZII", "IIZZ"};
  code.logical_x = "IIXX";
  code.logical_z = "ZIZI";
  code.codeword0 = kInvSqrt2 * (basis_state(4, 0b0000) + basis_state(4, 0b1111));
  code.codeword1 = kInvSqrt2 * (basis_state(4, 0b0011) + basis_state(4, 0b1100));
  return code;
}

StabilizerCode five_qubit_code() {
  StabilizerCode code;
  code.name = "five-one-three";
  code.n = 5;
  code.d = 3;
  code.stabilizers = {"XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"};
  code.logical_x = "XXXXX";
  code.logical_z = "ZZZZZ";
  code.codeword0 = project_codespace(code.stabilizers, basis_state(5, 0));
  code.codeword1 = apply_pauli(code.logical_x, code.codeword0);
  return code;
}

StabilizerCode code_by_name(std::string_view name) {
  if (name == "none") return trivial_code();
  if (name == "four-qubit") return four_qubit_code();
  if (name == "five-one-three") return five_qubit_code();
  if (name.starts_with("rep-")) {
    int n = 0;
    const auto digits = name.substr(4);
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
    if (ec == std::errc{} && ptr == digits.data() + digits.size()) return repetition_code(n);
  }
  throw std::invalid_argument("unknown code name: " + std::string(name));
}

ComplexMatrix encode_pair(const StabilizerCode& code, const ComplexMatrix& logical) {
  if (logical.rows() != 4 || logical.cols() != 4) {
    throw std::invalid_argument("encode_pair expects a 4x4 logical operator");
  }
  const ComplexMatrix v = code.encoder();
  const ComplexMatrix vv = qcore::tensor(v, v);
  return vv * logical * vv.adjoint();
}

qcore::DensityMatrix encode_pair(const StabilizerCode& code, const qcore::DensityMatrix& logical) {
  if (logical.factor_dims() != std::vector<int>{2, 2}) {
    throw std::invalid_argument("encode_pair expects a two-qubit logical state");
  }
  ComplexMatrix out = encode_pair(code, logical.matrix());
  out = (0.5 * (out + out.adjoint())).eval();
  return qcore::DensityMatrix(std::move(out), qcore::qubit_dims(2 * code.n));
}

}  // namespace starqec::codes
