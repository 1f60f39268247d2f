#pragma once

// Dense complex linear algebra and multi-qubit tensor machinery.
//
// Subsystem order convention: factor 0 is the leftmost tensor factor, i.e. the
// most significant digit of a basis index. For qubits, |q0 q1 ... q_{n-1}> has
// index q0*2^{n-1} + ... + q_{n-1}. Every module addresses qubits by this
// position.

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace starqec {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

/// A computation that cannot return a trustworthy number: codespace leakage,
/// integrator step underflow, vanishing sensitivity, insufficient fidelity.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace qcore {

inline constexpr int kMaxQubits = 12;
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kEigenInputTol = 1e-10;

/// Hermitian, unit-trace matrix over a labeled tensor factorization. The
/// constructor checks shape, Hermiticity and trace; positivity costs an
/// eigendecomposition and is checked on demand with check_state().
class DensityMatrix {
 public:
  DensityMatrix(ComplexMatrix matrix, std::vector<int> factor_dims);

  static DensityMatrix from_pure(const ComplexVector& psi, std::vector<int> factor_dims);
  static DensityMatrix of_qubits(ComplexMatrix matrix);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  int num_factors() const { return static_cast<int>(factor_dims_.size()); }
  const ComplexMatrix& matrix() const { return matrix_; }
  const std::vector<int>& factor_dims() const { return factor_dims_; }

 private:
  ComplexMatrix matrix_;
  std::vector<int> factor_dims_;
};

struct StateCheck {
  double hermiticity_error = 0.0;
  double trace_error = 0.0;
  double min_eigenvalue = 0.0;

  bool ok() const {
    return hermiticity_error <= kHermitianTol && trace_error <= kTraceTol &&
           min_eigenvalue >= -kPsdTol;
  }
};

StateCheck check_state(const DensityMatrix& rho);

struct HermitianEigensystem {
  RealVector eigenvalues;      // ascending
  ComplexMatrix eigenvectors;  // columns
};

int product(std::span<const int> dims);
std::vector<int> qubit_dims(int n);

double max_abs_entry(const ComplexMatrix& m);
double hermiticity_error(const ComplexMatrix& m);

/// Kronecker product; a's indices are outermost.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix tensor_all(std::span<const ComplexMatrix> factors);
ComplexVector tensor(const ComplexVector& a, const ComplexVector& b);

/// Reduced operator over the kept subsystems (kept order follows the original
/// factor order).
ComplexMatrix partial_trace(const ComplexMatrix& op, std::span<const int> dims,
                            std::vector<int> keep);
DensityMatrix partial_trace(const DensityMatrix& rho, std::vector<int> keep);

/// Symmetrizes (H + H†)/2 before decomposing. Rejects inputs that are not
/// Hermitian to kEigenInputTol.
HermitianEigensystem eig_hermitian(const ComplexMatrix& h);

/// Uhlmann fidelity (Tr √(√a b √a))² of two density operators.
double fidelity(const ComplexMatrix& a, const ComplexMatrix& b);

/// Full-size operator acting as `op` on `targets` (in the given order) and as
/// the identity elsewhere.
ComplexMatrix embed(const ComplexMatrix& op, std::span<const int> dims,
                    std::span<const int> targets);

/// Layout of a contiguous block of factors inside a register: the register
/// index splits as (outer, block, inner).
struct BlockLayout {
  Eigen::Index outer = 1;
  Eigen::Index block = 1;
  Eigen::Index inner = 1;

  static BlockLayout of(std::span<const int> dims, int first, int count);
};

/// (I ⊗ op ⊗ I) · m where op is (out × layout.block); the block dimension of
/// the row space becomes op.rows().
ComplexMatrix apply_block_left(const ComplexMatrix& m, const BlockLayout& layout,
                               const ComplexMatrix& op);

/// (I ⊗ op ⊗ I) · m · (I ⊗ op ⊗ I)†, possibly rectangular.
ComplexMatrix sandwich_block(const ComplexMatrix& m, const BlockLayout& layout,
                             const ComplexMatrix& op);

/// Single-qubit channel given by Kraus operators. Completeness Σ K†K = I is
/// checked when the channel is applied.
struct KrausChannel {
  std::vector<ComplexMatrix> kraus_ops;
  std::string label;
  double strength = 0.0;

  double completeness_error() const;
};

inline constexpr double kKrausCompletenessTol = 1e-10;

/// Σ_k (I⊗K_k⊗I) op (I⊗K_k⊗I)† on the given qubit. Works on any operator so
/// that parameter derivatives can be pushed through the same linear map.
ComplexMatrix apply_local_kraus(const ComplexMatrix& op, std::span<const int> dims,
                                const KrausChannel& channel, int qubit);
DensityMatrix apply_local_kraus(const DensityMatrix& rho, const KrausChannel& channel,
                                int qubit);

}  // namespace qcore
}  // namespace starqec
