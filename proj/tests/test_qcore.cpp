#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "starqec/channels.hpp"
#include "starqec/qcore.hpp"

using namespace starqec;
using namespace starqec::qcore;

namespace {

ComplexMatrix pauli_x() {
  ComplexMatrix x(2, 2);
  x << 0, 1, 1, 0;
  return x;
}

ComplexMatrix pauli_z() {
  ComplexMatrix z(2, 2);
  z << 1, 0, 0, -1;
  return z;
}

ComplexVector plus_state() {
  ComplexVector v(2);
  v << 1, 1;
  return v / std::sqrt(2.0);
}

ComplexVector minus_state() {
  ComplexVector v(2);
  v << 1, -1;
  return v / std::sqrt(2.0);
}

}  // namespace

TEST(Tensor, IdentityTimesIdentity) {
  EXPECT_LE((tensor(ComplexMatrix(ComplexMatrix::Identity(2, 2)), ComplexMatrix(ComplexMatrix::Identity(2, 2))) -
             ComplexMatrix::Identity(4, 4))
                .norm(),
            0.0);
}

TEST(Tensor, ZZFlipsPlusPlus) {
  const ComplexVector out = tensor(pauli_z(), pauli_z()) * tensor(plus_state(), plus_state());
  EXPECT_LE((out - tensor(minus_state(), minus_state())).norm(), 1e-15);
}

TEST(Tensor, MixedProductAndExplicitKron) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = oracle::random_hermitian(2, rng), b = oracle::random_hermitian(2, rng);
    const auto c = oracle::random_hermitian(2, rng), d = oracle::random_hermitian(2, rng);
    EXPECT_LE((tensor(a, b) * tensor(c, d) - tensor(ComplexMatrix(a * c), ComplexMatrix(b * d))).norm(), 1e-12);
    const auto e = oracle::random_hermitian(3, rng);
    EXPECT_LE((tensor(a, e) - oracle::kron(a, e)).norm(), 1e-14);
  }
}

TEST(PartialTrace, BellPairHalvesAreMaximallyMixed) {
  ComplexVector bell = ComplexVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const auto rho = DensityMatrix::from_pure(bell, {2, 2});
  for (int keep : {0, 1}) {
    const auto reduced = partial_trace(rho, {keep});
    EXPECT_LE((reduced.matrix() - ComplexMatrix::Identity(2, 2) / 2.0).norm(), 1e-15);
  }
}

TEST(PartialTrace, ProductStateKeepsFactor) {
  std::mt19937_64 rng(3);
  const auto a = oracle::random_density(2, rng);
  const auto b = oracle::random_density(3, rng);
  const DensityMatrix rho(tensor(a, b), {2, 3});
  EXPECT_LE((partial_trace(rho, {0}).matrix() - a).norm(), 1e-12);
  EXPECT_LE((partial_trace(rho, {1}).matrix() - b).norm(), 1e-12);
}

TEST(PartialTrace, MatchesLoopOracleOnRandomThreeQubitStates) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const DensityMatrix rho(oracle::random_density(8, rng), qubit_dims(3));
    for (int q = 0; q < 3; ++q) {
      std::vector<int> keep;
      for (int k = 0; k < 3; ++k)
        if (k != q) keep.push_back(k);
      const auto reduced = partial_trace(rho, keep);
      EXPECT_NEAR(reduced.matrix().trace().real(), 1.0, 1e-12);
      EXPECT_LE((reduced.matrix() - oracle::trace_out_qubit(rho.matrix(), 3, q)).norm(), 1e-12);
    }
  }
}

TEST(PartialTrace, KeptFactorsStayInOriginalOrder) {
  std::mt19937_64 rng(8);
  const auto a = oracle::random_density(2, rng);
  const auto b = oracle::random_density(2, rng);
  const DensityMatrix rho(tensor(a, b), {2, 2});
  EXPECT_LE((partial_trace(rho, {1, 0}).matrix() - tensor(a, b)).norm(), 1e-12);
}

TEST(PartialTrace, RejectsBadIndices) {
  const DensityMatrix rho(ComplexMatrix::Identity(4, 4) / 4.0, {2, 2});
  EXPECT_THROW(partial_trace(rho, {2}), std::out_of_range);
  EXPECT_THROW(partial_trace(rho, {0, 0}), std::invalid_argument);
}

TEST(PartialTrace, CommutesWithChannelsOnKeptQubits) {
  std::mt19937_64 rng(21);
  const auto channel = channels::depolarizing(0.3);
  for (int trial = 0; trial < 5; ++trial) {
    const DensityMatrix rho(oracle::random_density(8, rng), qubit_dims(3));
    const auto a = partial_trace(apply_local_kraus(rho, channel, 0), {0, 1});
    const auto b = apply_local_kraus(partial_trace(rho, {0, 1}), channel, 0);
    EXPECT_LE((a.matrix() - b.matrix()).norm(), 1e-10);
  }
}

TEST(Eigen, IdentityAndPauliX) {
  const auto id = eig_hermitian(ComplexMatrix::Identity(3, 3));
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(id.eigenvalues(i), 1.0, 1e-15);
  const auto x = eig_hermitian(pauli_x());
  EXPECT_NEAR(x.eigenvalues(0), -1.0, 1e-15);
  EXPECT_NEAR(x.eigenvalues(1), 1.0, 1e-15);
}

TEST(Eigen, ReconstructsRandomHermitianAndIsUnitary) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const auto h = oracle::random_hermitian(16, rng);
    const auto es = eig_hermitian(h);
    const ComplexMatrix rebuilt = es.eigenvectors * es.eigenvalues.asDiagonal() * es.eigenvectors.adjoint();
    EXPECT_LE((rebuilt - h).norm(), 1e-10);
    EXPECT_LE((es.eigenvectors.adjoint() * es.eigenvectors - ComplexMatrix::Identity(16, 16)).norm(), 1e-10);
    for (int i = 1; i < 16; ++i) EXPECT_LE(es.eigenvalues(i - 1), es.eigenvalues(i));
  }
}

TEST(Eigen, RejectsNonHermitianInput) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  EXPECT_THROW(eig_hermitian(m), std::invalid_argument);
}

TEST(DensityMatrixTest, ValidatesInputs) {
  EXPECT_THROW(DensityMatrix(ComplexMatrix::Identity(4, 4), {2, 2}), std::invalid_argument);
  EXPECT_THROW(DensityMatrix(ComplexMatrix::Identity(4, 4) / 4.0, {2, 3}), std::invalid_argument);
  ComplexMatrix m = ComplexMatrix::Identity(2, 2) / 2.0;
  m(0, 1) = 0.1;
  EXPECT_THROW(DensityMatrix(m, {2}), std::invalid_argument);
  EXPECT_THROW(DensityMatrix::of_qubits(ComplexMatrix::Identity(3, 3) / 3.0), std::invalid_argument);
}

TEST(DensityMatrixTest, CheckStateFlagsNegativeEigenvalue) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 1.2;
  m(1, 1) = -0.2;
  EXPECT_FALSE(check_state(DensityMatrix(m, {2})).ok());
  EXPECT_TRUE(check_state(DensityMatrix(ComplexMatrix::Identity(2, 2) / 2.0, {2})).ok());
}

TEST(LocalKraus, IdentityChannelLeavesStateUnchanged) {
  std::mt19937_64 rng(17);
  const DensityMatrix rho(oracle::random_density(4, rng), qubit_dims(2));
  const auto out = apply_local_kraus(rho, channels::identity_channel(), 1);
  EXPECT_LE((out.matrix() - rho.matrix()).norm(), 1e-15);
}

TEST(LocalKraus, FullDephasingOfPlusIsMaximallyMixed) {
  const auto rho = DensityMatrix::from_pure(plus_state(), {2});
  const auto out = apply_local_kraus(rho, channels::dephasing(0.5), 0);
  EXPECT_LE((out.matrix() - ComplexMatrix::Identity(2, 2) / 2.0).norm(), 1e-15);
}

TEST(LocalKraus, MatchesEmbeddedKrausSumAndStaysValid) {
  std::mt19937_64 rng(19);
  for (const auto& channel : {channels::depolarizing(0.37), channels::amplitude_damping(0.2),
                              channels::dephasing(0.1)}) {
    const DensityMatrix rho(oracle::random_density(8, rng), qubit_dims(3));
    for (int q = 0; q < 3; ++q) {
      ComplexMatrix expected = ComplexMatrix::Zero(8, 8);
      for (const auto& k : channel.kraus_ops) {
        ComplexMatrix full = ComplexMatrix::Identity(1, 1);
        for (int j = 0; j < 3; ++j) full = oracle::kron(full, j == q ? k : ComplexMatrix::Identity(2, 2));
        expected += full * rho.matrix() * full.adjoint();
      }
      const auto out = apply_local_kraus(rho, channel, q);
      EXPECT_LE((out.matrix() - expected).norm(), 1e-12);
      EXPECT_NEAR(out.matrix().trace().real(), 1.0, 1e-12);
      EXPECT_TRUE(check_state(out).ok());
    }
  }
}

TEST(LocalKraus, RejectsIncompleteChannel) {
  KrausChannel broken{{ComplexMatrix::Identity(2, 2) * 0.5}, "broken", 0.0};
  const DensityMatrix rho(ComplexMatrix::Identity(2, 2) / 2.0, {2});
  EXPECT_THROW(apply_local_kraus(rho, broken, 0), std::invalid_argument);
  EXPECT_THROW(apply_local_kraus(rho, channels::dephasing(0.1), 1), std::out_of_range);
}

TEST(Embed, AgreesWithExplicitKron) {
  std::mt19937_64 rng(23);
  const auto op = oracle::random_hermitian(4, rng);
  const std::vector<int> dims = {2, 2, 2};
  const std::vector<int> targets = {0, 2};
  const auto big = embed(op, dims, targets);
  // Oracle: act on basis vectors by hand.
  for (int col = 0; col < 8; ++col) {
    const int b0 = (col >> 2) & 1, b1 = (col >> 1) & 1, b2 = col & 1;
    for (int row = 0; row < 8; ++row) {
      const int r0 = (row >> 2) & 1, r1 = (row >> 1) & 1, r2 = row & 1;
      const Complex expected = r1 == b1 ? op(2 * r0 + r2, 2 * b0 + b2) : Complex{0.0, 0.0};
      EXPECT_LE(std::abs(big(row, col) - expected), 1e-15);
    }
  }
}

TEST(Fidelity, PureStatesAndMixtures) {
  const auto plus = DensityMatrix::from_pure(plus_state(), {2}).matrix();
  const auto minus = DensityMatrix::from_pure(minus_state(), {2}).matrix();
  EXPECT_NEAR(fidelity(plus, plus), 1.0, 1e-12);
  EXPECT_NEAR(fidelity(plus, minus), 0.0, 1e-12);
  EXPECT_NEAR(fidelity(plus, ComplexMatrix::Identity(2, 2) / 2.0), 0.5, 1e-12);
  std::mt19937_64 rng(29);
  const auto a = oracle::random_density(4, rng), b = oracle::random_density(4, rng);
  const double root = oracle::root_fidelity(a, b);
  EXPECT_NEAR(fidelity(a, b), root * root, 1e-10);
  EXPECT_NEAR(fidelity(a, b), fidelity(b, a), 1e-10);
}
