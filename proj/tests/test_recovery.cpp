#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "starqec/channels.hpp"
#include "starqec/codes.hpp"
#include "starqec/metrology.hpp"
#include "starqec/recovery.hpp"
#include "starqec/source.hpp"

using namespace starqec;
using namespace starqec::recovery;
using codes::StabilizerCode;
using qcore::DensityMatrix;

namespace {

ComplexMatrix dense_pauli(const std::string& p) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (char c : p) {
    ComplexMatrix m(2, 2);
    switch (c) {
      case 'I': m << 1, 0, 0, 1; break;
      case 'X': m << 0, 1, 1, 0; break;
      case 'Y': m << 0, -kI, kI, 0; break;
      default: m << 1, 0, 0, -1; break;
    }
    out = oracle::kron(out, m);
  }
  return out;
}

ComplexMatrix encoder_matrix(const StabilizerCode& code) {
  ComplexMatrix v(code.codeword0.size(), 2);
  v.col(0) = code.codeword0;
  v.col(1) = code.codeword1;
  return v;
}

// Minimum-weight correction per syndrome found by scanning all Paulis in
// order of weight; ties are resolved by the caller-supplied table.
std::vector<std::string> oracle_corrections(const StabilizerCode& code, const std::string& alphabet) {
  const std::size_t m = code.stabilizers.size();
  std::vector<std::string> best(std::size_t{1} << m);
  std::vector<int> best_weight(best.size(), 1 << 20);
  const int letters = static_cast<int>(alphabet.size()) + 1;
  int total = 1;
  for (int i = 0; i < code.n; ++i) total *= letters;
  for (int idx = 0; idx < total; ++idx) {
    std::string p(code.n, 'I');
    int rest = idx, w = 0;
    for (int q = 0; q < code.n; ++q) {
      const int l = rest % letters;
      rest /= letters;
      if (l > 0) {
        p[q] = alphabet[l - 1];
        ++w;
      }
    }
    std::size_t s = 0;
    for (std::size_t j = 0; j < m; ++j) {
      const auto& stab = code.stabilizers[j];
      int anti = 0;
      for (int q = 0; q < code.n; ++q) {
        if (stab[q] != 'I' && p[q] != 'I' && stab[q] != p[q]) ++anti;
      }
      if (anti % 2) s |= std::size_t{1} << j;
    }
    if (w < best_weight[s]) {
      best_weight[s] = w;
      best[s] = p;
    }
  }
  return best;
}

// Literal register simulation: dense encoder, Kraus operators embedded with
// Kronecker products, syndrome projectors built from (I ± S)/2.
ComplexMatrix oracle_pipeline(const StabilizerCode& code, const std::vector<std::string>& corrections,
                              const qcore::KrausChannel& channel, const ComplexMatrix& logical) {
  const int n = code.n;
  const int dim = 1 << (2 * n);
  const ComplexMatrix v = encoder_matrix(code);
  const ComplexMatrix vv = oracle::kron(v, v);
  ComplexMatrix rho = vv * logical * vv.adjoint();
  for (int q = 0; q < 2 * n; ++q) {
    ComplexMatrix next = ComplexMatrix::Zero(dim, dim);
    for (const auto& k : channel.kraus_ops) {
      const ComplexMatrix full = oracle::kron(
          oracle::kron(ComplexMatrix::Identity(1 << q, 1 << q), k),
          ComplexMatrix::Identity(1 << (2 * n - q - 1), 1 << (2 * n - q - 1)));
      next += full * rho * full.adjoint();
    }
    rho = next;
  }
  const std::size_t m = code.stabilizers.size();
  const ComplexMatrix id_block = ComplexMatrix::Identity(1 << n, 1 << n);
  for (int block = 0; block < 2; ++block) {
    ComplexMatrix next = ComplexMatrix::Zero(dim, dim);
    for (std::size_t s = 0; s < (std::size_t{1} << m); ++s) {
      ComplexMatrix proj = id_block;
      for (std::size_t j = 0; j < m; ++j) {
        const double sign = (s >> j) & 1 ? -1.0 : 1.0;
        proj = proj * (id_block + sign * dense_pauli(code.stabilizers[j])) / 2.0;
      }
      const ComplexMatrix local = dense_pauli(corrections[s]) * proj;
      const ComplexMatrix full = block == 0 ? oracle::kron(local, id_block) : oracle::kron(id_block, local);
      next += full * rho * full.adjoint();
    }
    rho = next;
  }
  return vv.adjoint() * rho * vv;
}

source::ParamDerivativeFamily family(double gamma, double phi) {
  return source::conditioned_state({0.0, gamma, phi});
}

}  // namespace

TEST(SyndromeTableTest, TrivialSyndromeIsIdentity) {
  for (const auto& code : {codes::repetition_code(3), codes::four_qubit_code(), codes::five_qubit_code()}) {
    const auto table = build_syndrome_table(code);
    EXPECT_EQ(table.correction(0), std::string(code.n, 'I'));
    EXPECT_EQ(table.size(), std::size_t{1} << code.stabilizers.size());
  }
}

TEST(SyndromeTableTest, RepThreeMiddleFlip) {
  const auto code = codes::repetition_code(3);
  const auto table = build_syndrome_table(code);
  const auto s = codes::syndrome_of(code, "IZI");
  EXPECT_EQ(table.correction(s), "IZI");
  for (const std::string e : {"ZII", "IIZ"}) EXPECT_NE(codes::syndrome_of(code, e), s);
}

TEST(SyndromeTableTest, FiveQubitCoversAllSingleErrors) {
  const auto code = codes::five_qubit_code();
  const auto table = build_syndrome_table(code);
  EXPECT_EQ(table.size(), 16u);
  for (std::uint32_t s = 1; s < 16; ++s) EXPECT_EQ(codes::pauli_weight(table.correction(s)), 1);
}

TEST(SyndromeTableTest, MinimumWeightMatchesBruteForce) {
  for (const auto& code : {codes::repetition_code(3), codes::repetition_code(5), codes::four_qubit_code(),
                           codes::five_qubit_code()}) {
    SCOPED_TRACE(code.name);
    const auto table = build_syndrome_table(code);
    const auto brute = oracle_corrections(code, code.correction_alphabet);
    for (std::size_t s = 0; s < table.size(); ++s) {
      EXPECT_EQ(codes::pauli_weight(table.correction(s)), codes::pauli_weight(brute[s]));
      EXPECT_EQ(codes::syndrome_of(code, table.correction(s)), s);
    }
  }
}

TEST(SyndromeTableTest, EvenRepetitionTieGoesToLowestQubits) {
  const auto code = codes::repetition_code(4);
  const auto table = build_syndrome_table(code);
  // Z on qubits {0,1} and on {2,3} share a syndrome; the lower pair wins.
  EXPECT_EQ(codes::syndrome_of(code, "ZZII"), codes::syndrome_of(code, "IIZZ"));
  EXPECT_EQ(table.correction(codes::syndrome_of(code, "IIZZ")), "ZZII");
}

TEST(SyndromeTableTest, CorrectableErrorsAreFixedUpToStabilizers) {
  for (const auto& code : {codes::repetition_code(3), codes::repetition_code(5), codes::five_qubit_code()}) {
    SCOPED_TRACE(code.name);
    const auto table = build_syndrome_table(code);
    const auto group = codes::stabilizer_group(code);
    const int t = (code.d - 1) / 2;
    codes::for_each_pauli(code.n, code.correction_alphabet, t, [&](const std::string& e) {
      const auto residual = codes::pauli_product(table.correction(codes::syndrome_of(code, e)), e);
      EXPECT_NE(std::find(group.begin(), group.end(), residual), group.end()) << e;
      return true;
    });
  }
}

TEST(RecoverBlock, CodespaceInputIsUnchanged) {
  const auto code = codes::five_qubit_code();
  std::mt19937_64 rng(71);
  const auto logical = oracle::random_pure(2, rng);
  const ComplexVector phys = encoder_matrix(code) * logical;
  const auto rho = DensityMatrix::from_pure(phys, qcore::qubit_dims(5));
  const auto out = recover_block(rho, code, 0, true);
  EXPECT_LE((out.averaged_state.matrix() - rho.matrix()).norm(), 1e-12);
  ASSERT_EQ(out.syndrome_branches.size(), 1u);
  EXPECT_NEAR(out.syndrome_branches[0].probability, 1.0, 1e-12);
}

TEST(RecoverBlock, SingleErrorsAreUndone) {
  std::mt19937_64 rng(73);
  for (const auto& code : {codes::repetition_code(3), codes::five_qubit_code()}) {
    SCOPED_TRACE(code.name);
    const ComplexVector phys = encoder_matrix(code) * oracle::random_pure(2, rng);
    const auto clean = DensityMatrix::from_pure(phys, qcore::qubit_dims(code.n));
    codes::for_each_pauli(code.n, code.correction_alphabet, 1, [&](const std::string& e) {
      const auto noisy = DensityMatrix::from_pure(codes::apply_pauli(e, phys), qcore::qubit_dims(code.n));
      const auto out = recover_block(noisy, code, 0);
      EXPECT_LE((out.averaged_state.matrix() - clean.matrix()).norm(), 1e-12) << e;
      return true;
    });
  }
}

TEST(RecoverBlock, BranchProbabilitiesAreBinomial) {
  const auto code = codes::repetition_code(3);
  const double p = 0.13;
  std::mt19937_64 rng(79);
  const ComplexVector phys = encoder_matrix(code) * oracle::random_pure(2, rng);
  const std::vector<int> all = {0, 1, 2};
  const auto noisy = channels::apply_iid(DensityMatrix::from_pure(phys, qcore::qubit_dims(3)),
                                         channels::dephasing(p), all);
  const auto out = recover_block(noisy, code, 0, true);
  ASSERT_EQ(out.syndrome_branches.size(), 4u);
  double total = 0.0;
  ComplexMatrix mix = ComplexMatrix::Zero(8, 8);
  for (const auto& b : out.syndrome_branches) {
    const double expected = b.syndrome == 0 ? std::pow(1 - p, 3) + std::pow(p, 3) : p * (1 - p);
    EXPECT_NEAR(b.probability, expected, 1e-12);
    total += b.probability;
    mix += b.probability * b.state.matrix();
  }
  EXPECT_NEAR(total, 1.0, 1e-10);
  EXPECT_LE((mix - out.averaged_state.matrix()).norm(), 1e-12);
}

TEST(Decode, InvertsEncodingAndFlagsLeakage) {
  std::mt19937_64 rng(83);
  for (const auto& code : {codes::repetition_code(2), codes::four_qubit_code()}) {
    const DensityMatrix logical(oracle::random_density(4, rng), {2, 2});
    const auto enc = codes::encode_pair(code, logical);
    EXPECT_LE((decode_pair(enc, code).matrix() - logical.matrix()).norm(), 1e-12);
  }
  const auto code = codes::repetition_code(2);
  ComplexVector junk = ComplexVector::Zero(16);
  junk(0b0101) = 1.0;  // |0101⟩ is outside the |±±⟩ codespace product
  const auto leaked = DensityMatrix::from_pure(junk, qcore::qubit_dims(4));
  EXPECT_THROW(decode_pair(leaked, code), NumericalError);
}

TEST(Decode, CorrectableErrorsThenRecoveryRestoreLogicalState) {
  const auto code = codes::repetition_code(3);
  const auto psi = family(1.0, 0.6).state;
  const auto enc = codes::encode_pair(code, psi);
  const ComplexMatrix e = dense_pauli("IZIZII");
  const DensityMatrix noisy(e * enc.matrix() * e.adjoint(), qcore::qubit_dims(6));
  auto rec = recover_block(noisy, code, 0).averaged_state;
  rec = recover_block(rec, code, 3).averaged_state;
  EXPECT_LE((decode_pair(rec, code).matrix() - psi.matrix()).norm(), 1e-12);
}

TEST(Pipeline, IdentityChannelIsTransparent) {
  const auto f = family(0.7, 0.9);
  for (const auto& code : {codes::repetition_code(3), codes::five_qubit_code()}) {
    const auto out = qec_pipeline(code, channels::identity_channel(), f);
    EXPECT_LE((out.state.matrix() - f.state.matrix()).norm(), 1e-12);
    EXPECT_LE((out.d_phi - f.d_phi).norm(), 1e-12);
    EXPECT_LE((out.d_gamma - f.d_gamma).norm(), 1e-12);
  }
}

TEST(Pipeline, UnencodedDephasingCoherence) {
  for (double p : {0.05, 0.2, 0.4}) {
    const auto out = qec_pipeline(codes::trivial_code(), channels::dephasing(p), family(0.8, 0.3));
    const Complex expected = 0.8 * std::exp(-kI * 0.3) / 2.0 * std::pow(1 - 2 * p, 2);
    EXPECT_LE(std::abs(out.state.matrix()(2, 1) - expected), 1e-12);
  }
}

TEST(Pipeline, RepThreePreservesGammaInformationAtZeroPhase) {
  for (double p : {0.1, 0.3}) {
    const auto out = qec_pipeline(codes::repetition_code(3), channels::dephasing(p), family(0.95, 0.0));
    EXPECT_NEAR(metrology::qfi(out, metrology::Parameter::gamma), 1.0 / (1.0 - 0.95 * 0.95), 1e-8);
  }
}

TEST(Pipeline, FactorizedRouteMatchesBruteForceOracle) {
  struct Case {
    StabilizerCode code;
    qcore::KrausChannel channel;
  };
  const std::vector<Case> cases = {
      {codes::repetition_code(3), channels::dephasing(0.17)},
      {codes::repetition_code(3), channels::depolarizing(0.11)},
      {codes::repetition_code(4), channels::dephasing(0.23)},
      {codes::four_qubit_code(), channels::depolarizing(0.07)},
  };
  const auto f = family(0.6, 0.35);
  for (const auto& c : cases) {
    SCOPED_TRACE(c.code.name + " " + c.channel.label);
    const auto table = build_syndrome_table(c.code);
    const auto out = qec_pipeline(c.code, c.channel, f);
    EXPECT_LE((out.state.matrix() - oracle_pipeline(c.code, table.corrections, c.channel, f.state.matrix())).norm(),
              1e-12);
    EXPECT_LE((out.d_phi - oracle_pipeline(c.code, table.corrections, c.channel, f.d_phi)).norm(), 1e-12);
    EXPECT_LE((out.d_gamma - oracle_pipeline(c.code, table.corrections, c.channel, f.d_gamma)).norm(), 1e-12);
  }
}

TEST(Pipeline, RegisterRouteAgreesWithFactorizedRoute) {
  const auto f = family(0.9, 1.1);
  for (const auto& code : {codes::repetition_code(2), codes::repetition_code(3), codes::four_qubit_code(),
                           codes::five_qubit_code()}) {
    SCOPED_TRACE(code.name);
    const auto channel = channels::depolarizing(0.12);
    const auto a = qec_pipeline(code, channel, f);
    const auto b = qec_pipeline_register(code, channel, f);
    EXPECT_LE((a.state.matrix() - b.state.matrix()).norm(), 1e-12);
    EXPECT_LE((a.d_phi - b.d_phi).norm(), 1e-12);
    EXPECT_LE((a.d_gamma - b.d_gamma).norm(), 1e-12);
  }
}

TEST(Pipeline, OutputIsValidState) {
  for (const auto& code : {codes::repetition_code(3), codes::five_qubit_code()}) {
    for (double p : {0.0, 0.25, 0.5}) {
      for (const auto& name : {"dephasing", "depolarizing", "amplitude-damping"}) {
        const auto out = qec_pipeline(code, channels::channel_by_name(name, p), family(0.5, 0.2));
        EXPECT_TRUE(qcore::check_state(out.state).ok()) << code.name << " " << name << " " << p;
        EXPECT_LE(std::abs(out.d_phi.trace()), 1e-12);
      }
    }
  }
}

TEST(Pipeline, RepetitionEigenvectorOfLogicalFlip) {
  for (int n : {2, 3, 4}) {
    const auto code = codes::repetition_code(n);
    const ComplexMatrix z_all = dense_pauli(std::string(2 * n, 'Z'));
    for (double sign : {1.0, -1.0}) {
      ComplexVector logical = ComplexVector::Zero(4);
      logical(1) = 1.0 / std::sqrt(2.0);
      logical(2) = sign / std::sqrt(2.0);
      const ComplexMatrix v = encoder_matrix(code);
      const ComplexVector phys = oracle::kron(v, v) * logical;
      EXPECT_NEAR(std::norm(phys.dot(z_all * phys)), 1.0, 1e-12);
    }
  }
}

TEST(Resolved, BranchesReassembleAveragedState) {
  const auto code = codes::repetition_code(3);
  const auto channel = channels::depolarizing(0.2);
  const auto f = family(0.8, 0.4);
  const auto branches = qec_pipeline_branches(code, channel, f);
  const auto averaged = qec_pipeline(code, channel, f);
  ComplexMatrix sum = ComplexMatrix::Zero(4, 4);
  double total = 0.0;
  for (const auto& b : branches) {
    sum += b.probability * b.family.state.matrix();
    total += b.probability;
  }
  EXPECT_NEAR(total, 1.0, 1e-10);
  EXPECT_LE((sum - averaged.state.matrix()).norm(), 1e-12);
}

TEST(Resolved, BranchDerivativesMatchFiniteDifferences) {
  const auto code = codes::repetition_code(3);
  const auto channel = channels::depolarizing(0.15);
  const double gamma = 0.7, phi = 0.5, h = 1e-6;
  const auto base = qec_pipeline_branches(code, channel, family(gamma, phi));
  const auto up = qec_pipeline_branches(code, channel, family(gamma, phi + h));
  const auto down = qec_pipeline_branches(code, channel, family(gamma, phi - h));
  ASSERT_EQ(base.size(), up.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    const ComplexMatrix numeric = (up[i].family.state.matrix() - down[i].family.state.matrix()) / (2 * h);
    EXPECT_LE((base[i].family.d_phi - numeric).cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(Resolved, ClassicalQuantumBoundDominatesAveraged) {
  // Σ p_s J(ρ_s) plus the Fisher information of the syndrome record is the QFI
  // of the flagged state, which can only exceed that of the averaged state.
  const auto code = codes::four_qubit_code();
  const double gamma = 0.6, phi = 0.8, h = 1e-5;
  for (double p : {0.05, 0.2}) {
    const auto channel = channels::depolarizing(p);
    const auto branches = qec_pipeline_branches(code, channel, family(gamma, phi));
    const auto up = qec_pipeline_branches(code, channel, family(gamma, phi + h));
    const auto down = qec_pipeline_branches(code, channel, family(gamma, phi - h));
    double classical = 0.0;
    for (std::size_t i = 0; i < branches.size(); ++i) {
      const double dp = (up[i].probability - down[i].probability) / (2 * h);
      classical += dp * dp / branches[i].probability;
    }
    const double resolved = resolved_qfi(branches, metrology::Parameter::phi);
    const double averaged = metrology::qfi(qec_pipeline(code, channel, family(gamma, phi)), metrology::Parameter::phi);
    EXPECT_GE(resolved + classical, averaged - 1e-6);
    EXPECT_NEAR(pipeline_qfi(code, channel, family(gamma, phi), metrology::Parameter::phi,
                             QfiMode::syndrome_resolved),
                resolved, 1e-12);
  }
}

TEST(Resolved, ModeNames) {
  EXPECT_EQ(qfi_mode_from_string("syndrome-resolved"), QfiMode::syndrome_resolved);
  EXPECT_EQ(qfi_mode_from_string("syndrome_resolved"), QfiMode::syndrome_resolved);
  EXPECT_EQ(qfi_mode_from_string("averaged"), QfiMode::averaged);
  EXPECT_THROW(qfi_mode_from_string("mean"), std::invalid_argument);
}
