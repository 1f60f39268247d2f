#include "starqec/qcore.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

namespace starqec::qcore {

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

std::vector<int> strides_of(std::span<const int> dims) {
  std::vector<int> strides(dims.size(), 1);
  for (int k = static_cast<int>(dims.size()) - 2; k >= 0; --k) {
    strides[k] = strides[k + 1] * dims[k + 1];
  }
  return strides;
}

}  // namespace

int product(std::span<const int> dims) {
  return std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<>());
}

std::vector<int> qubit_dims(int n) { return std::vector<int>(static_cast<size_t>(n), 2); }

double max_abs_entry(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermiticity_error(const ComplexMatrix& m) {
  return max_abs_entry(m - m.adjoint());
}

DensityMatrix::DensityMatrix(ComplexMatrix matrix, std::vector<int> factor_dims)
    : matrix_(std::move(matrix)), factor_dims_(std::move(factor_dims)) {
  require(matrix_.rows() == matrix_.cols(), "density matrix must be square");
  require(!factor_dims_.empty(), "density matrix needs at least one factor");
  for (int d : factor_dims_) require(d >= 1, "factor dimensions must be positive");
  require(product(factor_dims_) == matrix_.rows(),
          "factor dimensions do not multiply to the matrix dimension");
  require(matrix_.rows() <= (1 << kMaxQubits), "register exceeds the 12-qubit limit");
  const double herm = hermiticity_error(matrix_);
  if (herm > kHermitianTol) {
    std::ostringstream msg;
    msg << "density matrix not Hermitian (max |ρ-ρ†| = " << herm << ")";
    throw std::invalid_argument(msg.str());
  }
  const double tr = matrix_.trace().real();
  if (std::abs(tr - 1.0) > kTraceTol) {
    std::ostringstream msg;
    msg << "density matrix trace " << tr << " is not 1";
    throw std::invalid_argument(msg.str());
  }
}

DensityMatrix DensityMatrix::from_pure(const ComplexVector& psi, std::vector<int> factor_dims) {
  const double norm = psi.norm();
  require(norm > 0.0, "zero state vector");
  const ComplexVector unit = psi / norm;
  return DensityMatrix(unit * unit.adjoint(), std::move(factor_dims));
}

DensityMatrix DensityMatrix::of_qubits(ComplexMatrix matrix) {
  int n = 0;
  while ((Eigen::Index{1} << n) < matrix.rows()) ++n;
  require((Eigen::Index{1} << n) == matrix.rows(), "dimension is not a power of two");
  return DensityMatrix(std::move(matrix), qubit_dims(n));
}

StateCheck check_state(const DensityMatrix& rho) {
  StateCheck check;
  check.hermiticity_error = hermiticity_error(rho.matrix());
  check.trace_error = std::abs(rho.matrix().trace() - Complex{1.0, 0.0});
  check.min_eigenvalue = eig_hermitian(rho.matrix()).eigenvalues.minCoeff();
  return check;
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

ComplexVector tensor(const ComplexVector& a, const ComplexVector& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

ComplexMatrix tensor_all(std::span<const ComplexMatrix> factors) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (const auto& f : factors) out = tensor(out, f);
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& op, std::span<const int> dims,
                            std::vector<int> keep) {
  const int nf = static_cast<int>(dims.size());
  require(op.rows() == op.cols() && op.rows() == product(dims),
          "operator does not match subsystem dimensions");
  std::sort(keep.begin(), keep.end());
  require(std::adjacent_find(keep.begin(), keep.end()) == keep.end(),
          "duplicate subsystem index in partial trace");
  for (int k : keep) {
    if (k < 0 || k >= nf) throw std::out_of_range("partial trace subsystem index out of range");
  }
  std::vector<int> traced;
  for (int k = 0; k < nf; ++k) {
    if (!std::binary_search(keep.begin(), keep.end(), k)) traced.push_back(k);
  }
  const auto strides = strides_of(dims);
  auto offsets_for = [&](const std::vector<int>& subsystems) {
    int total = 1;
    for (int s : subsystems) total *= dims[s];
    std::vector<int> offsets(static_cast<size_t>(total), 0);
    for (int idx = 0; idx < total; ++idx) {
      int rem = idx;
      int offset = 0;
      for (int k = static_cast<int>(subsystems.size()) - 1; k >= 0; --k) {
        const int d = dims[subsystems[k]];
        offset += (rem % d) * strides[subsystems[k]];
        rem /= d;
      }
      offsets[static_cast<size_t>(idx)] = offset;
    }
    return offsets;
  };
  const auto kept_off = offsets_for(keep);
  const auto traced_off = offsets_for(traced);
  const auto dk = static_cast<Eigen::Index>(kept_off.size());
  ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
  for (Eigen::Index j = 0; j < dk; ++j) {
    for (Eigen::Index i = 0; i < dk; ++i) {
      Complex acc{0.0, 0.0};
      for (int t : traced_off) acc += op(kept_off[i] + t, kept_off[j] + t);
      out(i, j) = acc;
    }
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::vector<int> keep) {
  std::vector<int> sorted = keep;
  std::sort(sorted.begin(), sorted.end());
  for (int k : sorted) {
    if (k < 0 || k >= rho.num_factors()) {
      throw std::out_of_range("partial trace subsystem index out of range");
    }
  }
  std::vector<int> kept_dims;
  for (int k : sorted) kept_dims.push_back(rho.factor_dims()[k]);
  ComplexMatrix reduced = partial_trace(rho.matrix(), rho.factor_dims(), sorted);
  reduced = (0.5 * (reduced + reduced.adjoint())).eval();
  return DensityMatrix(std::move(reduced), std::move(kept_dims));
}

HermitianEigensystem eig_hermitian(const ComplexMatrix& h) {
  require(h.rows() == h.cols(), "eigendecomposition needs a square matrix");
  const double herm = hermiticity_error(h);
  if (herm > kEigenInputTol) {
    std::ostringstream msg;
    msg << "matrix is not Hermitian (max |H-H†| = " << herm << ")";
    throw std::invalid_argument(msg.str());
  }
  const ComplexMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

ComplexMatrix embed(const ComplexMatrix& op, std::span<const int> dims,
                    std::span<const int> targets) {
  int tdim = 1;
  for (int t : targets) {
    if (t < 0 || t >= static_cast<int>(dims.size())) {
      throw std::out_of_range("embed target index out of range");
    }
    tdim *= dims[t];
  }
  require(op.rows() == tdim && op.cols() == tdim, "operator does not match target dimensions");
  const int total = product(dims);
  const auto strides = strides_of(dims);
  // digits of each basis index on the targets, and the index with targets zeroed
  std::vector<int> target_value(static_cast<size_t>(total));
  std::vector<int> base(static_cast<size_t>(total));
  for (int idx = 0; idx < total; ++idx) {
    int value = 0;
    int zeroed = idx;
    for (int t : targets) {
      const int digit = (idx / strides[t]) % dims[t];
      value = value * dims[t] + digit;
      zeroed -= digit * strides[t];
    }
    target_value[static_cast<size_t>(idx)] = value;
    base[static_cast<size_t>(idx)] = zeroed;
  }
  std::vector<int> offset_of_value(static_cast<size_t>(tdim));
  for (int v = 0; v < tdim; ++v) {
    int rem = v;
    int offset = 0;
    for (int k = static_cast<int>(targets.size()) - 1; k >= 0; --k) {
      const int d = dims[targets[k]];
      offset += (rem % d) * strides[targets[k]];
      rem /= d;
    }
    offset_of_value[static_cast<size_t>(v)] = offset;
  }
  ComplexMatrix out = ComplexMatrix::Zero(total, total);
  for (int col = 0; col < total; ++col) {
    const int vc = target_value[static_cast<size_t>(col)];
    const int b = base[static_cast<size_t>(col)];
    for (int vr = 0; vr < tdim; ++vr) {
      const Complex c = op(vr, vc);
      if (c != Complex{0.0, 0.0}) out(b + offset_of_value[static_cast<size_t>(vr)], col) = c;
    }
  }
  return out;
}

double fidelity(const ComplexMatrix& a, const ComplexMatrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "fidelity needs operators of equal shape");
  const auto ea = eig_hermitian(a);
  const RealVector sqrt_vals = ea.eigenvalues.cwiseMax(0.0).cwiseSqrt();
  const ComplexMatrix sqrt_a = ea.eigenvectors * sqrt_vals.asDiagonal() * ea.eigenvectors.adjoint();
  const ComplexMatrix inner = sqrt_a * b * sqrt_a;
  const auto ei = eig_hermitian(0.5 * (inner + inner.adjoint()));
  const double root_trace = ei.eigenvalues.cwiseMax(0.0).cwiseSqrt().sum();
  return root_trace * root_trace;
}

BlockLayout BlockLayout::of(std::span<const int> dims, int first, int count) {
  const int nf = static_cast<int>(dims.size());
  if (first < 0 || count < 0 || first + count > nf) {
    throw std::out_of_range("block lies outside the register");
  }
  BlockLayout layout;
  layout.outer = product(dims.subspan(0, static_cast<size_t>(first)));
  layout.block = product(dims.subspan(static_cast<size_t>(first), static_cast<size_t>(count)));
  layout.inner = product(dims.subspan(static_cast<size_t>(first + count)));
  return layout;
}

ComplexMatrix apply_block_left(const ComplexMatrix& m, const BlockLayout& layout,
                               const ComplexMatrix& op) {
  require(op.cols() == layout.block, "block operator has the wrong input dimension");
  require(m.rows() == layout.outer * layout.block * layout.inner,
          "operand does not match the block layout");
  const Eigen::Index out = op.rows();
  const Eigen::Index inner = layout.inner;
  ComplexMatrix result = ComplexMatrix::Zero(layout.outer * out * inner, m.cols());
  for (Eigen::Index h = 0; h < layout.outer; ++h) {
    for (Eigen::Index mo = 0; mo < out; ++mo) {
      auto dst = result.middleRows((h * out + mo) * inner, inner);
      for (Eigen::Index mi = 0; mi < layout.block; ++mi) {
        const Complex c = op(mo, mi);
        if (c == Complex{0.0, 0.0}) continue;
        dst += c * m.middleRows((h * layout.block + mi) * inner, inner);
      }
    }
  }
  return result;
}

ComplexMatrix sandwich_block(const ComplexMatrix& m, const BlockLayout& layout,
                             const ComplexMatrix& op) {
  const ComplexMatrix left = apply_block_left(m, layout, op);
  const ComplexMatrix both = apply_block_left(left.adjoint(), layout, op);
  return both.adjoint();
}

double KrausChannel::completeness_error() const {
  ComplexMatrix sum = ComplexMatrix::Zero(2, 2);
  for (const auto& k : kraus_ops) sum += k.adjoint() * k;
  return max_abs_entry(sum - ComplexMatrix::Identity(2, 2));
}

ComplexMatrix apply_local_kraus(const ComplexMatrix& op, std::span<const int> dims,
                                const KrausChannel& channel, int qubit) {
  if (qubit < 0 || qubit >= static_cast<int>(dims.size())) {
    throw std::out_of_range("qubit index out of range");
  }
  require(dims[qubit] == 2, "Kraus target subsystem is not a qubit");
  for (const auto& k : channel.kraus_ops) {
    require(k.rows() == 2 && k.cols() == 2, "single-qubit Kraus operators must be 2x2");
  }
  if (channel.completeness_error() > kKrausCompletenessTol) {
    throw std::invalid_argument("Kraus operators violate completeness");
  }
  const auto layout = BlockLayout::of(dims, qubit, 1);
  ComplexMatrix out = ComplexMatrix::Zero(op.rows(), op.cols());
  for (const auto& k : channel.kraus_ops) out += sandwich_block(op, layout, k);
  return out;
}

DensityMatrix apply_local_kraus(const DensityMatrix& rho, const KrausChannel& channel,
                                int qubit) {
  ComplexMatrix out = apply_local_kraus(rho.matrix(), rho.factor_dims(), channel, qubit);
  out = (0.5 * (out + out.adjoint())).eval();
  return DensityMatrix(std::move(out), rho.factor_dims());
}

}  // namespace starqec::qcore
