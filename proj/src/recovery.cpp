#include "starqec/recovery.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "starqec/channels.hpp"

namespace starqec::recovery {

namespace {

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

std::vector<int> range(int first, int count) {
  std::vector<int> v(count);
  std::iota(v.begin(), v.end(), first);
  return v;
}

void check_block(std::span<const int> dims, const codes::StabilizerCode& code, int offset) {
  if (offset < 0 || offset + code.n > static_cast<int>(dims.size())) {
    throw std::out_of_range("code block lies outside the register");
  }
  for (int q = offset; q < offset + code.n; ++q) {
    if (dims[q] != 2) throw std::invalid_argument("code block contains a non-qubit factor");
  }
}

void check_register_size(const codes::StabilizerCode& code) {
  if (2 * code.n > qcore::kMaxQubits) {
    throw std::invalid_argument("two code blocks exceed the 12-qubit register limit");
  }
}

}  // namespace

const std::string& SyndromeTable::correction(std::uint32_t syndrome) const {
  if (syndrome >= corrections.size()) throw std::out_of_range("syndrome out of range");
  return corrections[syndrome];
}

SyndromeTable build_syndrome_table(const codes::StabilizerCode& code) {
  if (code.n > 6) throw std::invalid_argument("syndrome table search limited to n <= 6");
  SyndromeTable table;
  table.num_stabilizers = static_cast<int>(code.stabilizers.size());
  const std::size_t count = std::size_t{1} << table.num_stabilizers;
  table.corrections.assign(count, std::string());
  std::size_t filled = 0;
  codes::for_each_pauli(code.n, code.correction_alphabet, code.n, [&](const std::string& p) {
    const auto s = codes::syndrome_of(code, p);
    if (table.corrections[s].empty()) {
      table.corrections[s] = p;
      ++filled;
    }
    return filled < count;
  });
  if (filled < count) {
    throw std::logic_error("correction alphabet does not reach every syndrome of " + code.name);
  }
  return table;
}

std::vector<ComplexMatrix> recovery_isometries(const codes::StabilizerCode& code,
                                               const SyndromeTable& table) {
  std::vector<ComplexMatrix> w;
  w.reserve(table.size());
  for (const auto& c : table.corrections) {
    ComplexMatrix ws(code.codeword0.size(), 2);
    ws.col(0) = codes::apply_pauli(c, code.codeword0);
    ws.col(1) = codes::apply_pauli(c, code.codeword1);
    w.push_back(std::move(ws));
  }
  return w;
}

ComplexMatrix recover_block(const ComplexMatrix& op, std::span<const int> dims,
                            const codes::StabilizerCode& code, int block_offset) {
  check_block(dims, code, block_offset);
  const auto table = build_syndrome_table(code);
  const auto ws = recovery_isometries(code, table);
  const auto layout = qcore::BlockLayout::of(dims, block_offset, code.n);
  qcore::BlockLayout logical_layout = layout;
  logical_layout.block = 2;

  ComplexMatrix logical;
  for (const auto& w : ws) {
    ComplexMatrix branch = qcore::sandwich_block(op, layout, w.adjoint());
    if (logical.size() == 0) logical = std::move(branch);
    else logical += branch;
  }
  return qcore::sandwich_block(logical, logical_layout, code.encoder());
}

RecoveryOutput recover_block(const qcore::DensityMatrix& rho, const codes::StabilizerCode& code,
                             int block_offset, bool with_branches) {
  const auto& dims = rho.factor_dims();
  check_block(dims, code, block_offset);
  const auto table = build_syndrome_table(code);
  const auto ws = recovery_isometries(code, table);
  const auto layout = qcore::BlockLayout::of(dims, block_offset, code.n);
  qcore::BlockLayout logical_layout = layout;
  logical_layout.block = 2;
  const ComplexMatrix v = code.encoder();

  ComplexMatrix logical;
  std::vector<RecoveryBranch> branches;
  for (std::size_t s = 0; s < ws.size(); ++s) {
    ComplexMatrix branch = qcore::sandwich_block(rho.matrix(), layout, ws[s].adjoint());
    if (with_branches) {
      const double p = branch.trace().real();
      if (p > kBranchProbabilityFloor) {
        ComplexMatrix full = hermitian_part(qcore::sandwich_block(branch, logical_layout, v)) / p;
        branches.push_back({static_cast<std::uint32_t>(s), p,
                            qcore::DensityMatrix(std::move(full), dims)});
      }
    }
    if (logical.size() == 0) logical = std::move(branch);
    else logical += branch;
  }
  ComplexMatrix averaged = hermitian_part(qcore::sandwich_block(logical, logical_layout, v));
  return {qcore::DensityMatrix(std::move(averaged), dims), std::move(branches)};
}

ComplexMatrix decode_pair(const ComplexMatrix& op, const codes::StabilizerCode& code) {
  check_register_size(code);
  const auto dims = qcore::qubit_dims(2 * code.n);
  if (op.rows() != qcore::product(dims) || op.cols() != op.rows()) {
    throw std::invalid_argument("operator does not live on two code blocks");
  }
  const ComplexMatrix vdag = code.encoder().adjoint();
  const ComplexMatrix half = qcore::sandwich_block(op, qcore::BlockLayout::of(dims, 0, code.n), vdag);
  std::vector<int> half_dims{2};
  half_dims.insert(half_dims.end(), code.n, 2);
  return qcore::sandwich_block(half, qcore::BlockLayout::of(half_dims, 1, code.n), vdag);
}

qcore::DensityMatrix decode_pair(const qcore::DensityMatrix& rho, const codes::StabilizerCode& code) {
  if (rho.factor_dims() != qcore::qubit_dims(2 * code.n)) {
    throw std::invalid_argument("state does not live on two code blocks");
  }
  ComplexMatrix logical = hermitian_part(decode_pair(rho.matrix(), code));
  const double in = rho.matrix().trace().real();
  const double leaked = std::abs(in - logical.trace().real()) / in;
  if (leaked > kLeakageTol) {
    std::ostringstream msg;
    msg << "codespace leakage " << leaked << " exceeds tolerance " << kLeakageTol;
    throw NumericalError(msg.str());
  }
  logical /= logical.trace().real();
  return qcore::DensityMatrix(std::move(logical), {2, 2});
}

std::vector<BlockBranchMap> block_logical_maps(const codes::StabilizerCode& code,
                                               const qcore::KrausChannel& channel) {
  const auto table = build_syndrome_table(code);
  const auto ws = recovery_isometries(code, table);
  const ComplexMatrix v = code.encoder();
  const auto dims = qcore::qubit_dims(code.n);
  const auto qubits = range(0, code.n);

  std::vector<BlockBranchMap> maps(ws.size());
  for (std::size_t s = 0; s < ws.size(); ++s) maps[s].syndrome = static_cast<std::uint32_t>(s);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const ComplexMatrix encoded = v.col(a) * v.col(b).adjoint();
      const ComplexMatrix noisy = channels::apply_iid(encoded, dims, channel, qubits);
      for (std::size_t s = 0; s < ws.size(); ++s) {
        maps[s].images[2 * a + b] = ws[s].adjoint() * noisy * ws[s];
      }
    }
  }
  return maps;
}

ComplexMatrix apply_pair_map(const BlockBranchMap& map_a, const BlockBranchMap& map_b,
                             const ComplexMatrix& op) {
  if (op.rows() != 4 || op.cols() != 4) throw std::invalid_argument("pair map acts on 4x4 operators");
  ComplexMatrix out = ComplexMatrix::Zero(4, 4);
  for (int a = 0; a < 2; ++a) {
    for (int ap = 0; ap < 2; ++ap) {
      for (int b = 0; b < 2; ++b) {
        for (int bp = 0; bp < 2; ++bp) {
          const Complex c = op(2 * a + b, 2 * ap + bp);
          if (c == Complex{0.0, 0.0}) continue;
          out += c * qcore::tensor(map_a.images[2 * a + ap], map_b.images[2 * b + bp]);
        }
      }
    }
  }
  return out;
}

source::ParamDerivativeFamily qec_pipeline(const codes::StabilizerCode& code,
                                           const qcore::KrausChannel& channel,
                                           const source::ParamDerivativeFamily& family) {
  check_register_size(code);
  if (family.state.dim() != 4) throw std::invalid_argument("pipeline expects a two-qubit logical family");
  const auto maps = block_logical_maps(code, channel);
  BlockBranchMap total;
  for (auto& img : total.images) img = ComplexMatrix::Zero(2, 2);
  for (const auto& m : maps) {
    for (int k = 0; k < 4; ++k) total.images[k] += m.images[k];
  }
  ComplexMatrix rho = hermitian_part(apply_pair_map(total, total, family.state.matrix()));
  return {qcore::DensityMatrix(std::move(rho), {2, 2}),
          hermitian_part(apply_pair_map(total, total, family.d_phi)),
          hermitian_part(apply_pair_map(total, total, family.d_gamma))};
}

source::ParamDerivativeFamily qec_pipeline_register(const codes::StabilizerCode& code,
                                                    const qcore::KrausChannel& channel,
                                                    const source::ParamDerivativeFamily& family) {
  check_register_size(code);
  if (family.state.dim() != 4) throw std::invalid_argument("pipeline expects a two-qubit logical family");
  const auto dims = qcore::qubit_dims(2 * code.n);
  const auto qubits = range(0, 2 * code.n);
  auto recovered = [&](const ComplexMatrix& logical) {
    ComplexMatrix m = codes::encode_pair(code, logical);
    m = channels::apply_iid(m, dims, channel, qubits);
    m = recover_block(m, dims, code, 0);
    return recover_block(m, dims, code, code.n);
  };
  // The state goes through the checked decoder so leakage is reported.
  const auto rho = decode_pair(
      qcore::DensityMatrix(hermitian_part(recovered(family.state.matrix())), dims), code);
  return {rho, hermitian_part(decode_pair(recovered(family.d_phi), code)),
          hermitian_part(decode_pair(recovered(family.d_gamma), code))};
}

std::vector<ResolvedBranch> qec_pipeline_branches(const codes::StabilizerCode& code,
                                                  const qcore::KrausChannel& channel,
                                                  const source::ParamDerivativeFamily& family) {
  check_register_size(code);
  if (family.state.dim() != 4) throw std::invalid_argument("pipeline expects a two-qubit logical family");
  const auto maps = block_logical_maps(code, channel);
  std::vector<ResolvedBranch> out;
  for (const auto& ma : maps) {
    for (const auto& mb : maps) {
      const ComplexMatrix sigma = hermitian_part(apply_pair_map(ma, mb, family.state.matrix()));
      const double p = sigma.trace().real();
      if (p <= kBranchProbabilityFloor) continue;
      const ComplexMatrix dsig_phi = hermitian_part(apply_pair_map(ma, mb, family.d_phi));
      const ComplexMatrix dsig_gamma = hermitian_part(apply_pair_map(ma, mb, family.d_gamma));
      const double dp_phi = dsig_phi.trace().real();
      const double dp_gamma = dsig_gamma.trace().real();
      ResolvedBranch branch{ma.syndrome, mb.syndrome, p,
                            {qcore::DensityMatrix(sigma / p, {2, 2}),
                             dsig_phi / p - sigma * (dp_phi / (p * p)),
                             dsig_gamma / p - sigma * (dp_gamma / (p * p))}};
      out.push_back(std::move(branch));
    }
  }
  return out;
}

QfiMode qfi_mode_from_string(std::string_view name) {
  if (name == "averaged") return QfiMode::averaged;
  if (name == "syndrome_resolved" || name == "syndrome-resolved") return QfiMode::syndrome_resolved;
  throw std::invalid_argument("qfi mode must be averaged or syndrome-resolved");
}

const char* to_string(QfiMode mode) {
  return mode == QfiMode::averaged ? "averaged" : "syndrome_resolved";
}

double resolved_qfi(const std::vector<ResolvedBranch>& branches, metrology::Parameter which) {
  double j = 0.0;
  for (const auto& b : branches) j += b.probability * metrology::qfi(b.family, which);
  return j;
}

double pipeline_qfi(const codes::StabilizerCode& code, const qcore::KrausChannel& channel,
                    const source::ParamDerivativeFamily& family, metrology::Parameter which,
                    QfiMode mode) {
  if (mode == QfiMode::averaged) return metrology::qfi(qec_pipeline(code, channel, family), which);
  return resolved_qfi(qec_pipeline_branches(code, channel, family), which);
}

}  // namespace starqec::recovery
