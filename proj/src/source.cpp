#include "starqec/source.hpp"

#include <cmath>

namespace starqec::source {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

ComplexMatrix outer(const ComplexVector& a, const ComplexVector& b) {
  return a * b.adjoint();
}

// Fock index on the 3x3 truncated two-mode space.
int fock(int na, int nb) { return 3 * na + nb; }

}  // namespace

void SourceParams::validate() const {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw std::domain_error("epsilon must be a nonnegative number");
  }
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::domain_error("gamma must lie in [0, 1]");
  if (!std::isfinite(phi)) throw std::domain_error("phi must be finite");
}

ComplexVector psi_plus(double phi) {
  ComplexVector v = ComplexVector::Zero(4);
  v(2) = kInvSqrt2;                              // |10>
  v(1) = kInvSqrt2 * std::exp(kI * phi);         // |01>
  return v;
}

ComplexVector psi_minus(double phi) {
  ComplexVector v = ComplexVector::Zero(4);
  v(2) = kInvSqrt2;
  v(1) = -kInvSqrt2 * std::exp(kI * phi);
  return v;
}

ComplexMatrix covariance_matrix(const SourceParams& params) {
  params.validate();
  const double eps = params.epsilon;
  const double diag = eps / 2.0 + 0.5;
  const Complex cross_plus = 0.5 * params.gamma * eps * std::exp(kI * params.phi);
  const Complex cross_minus = 0.5 * params.gamma * eps * std::exp(-kI * params.phi);
  ComplexMatrix sigma = ComplexMatrix::Zero(4, 4);
  sigma(0, 1) = diag;
  sigma(1, 0) = diag;
  sigma(2, 3) = diag;
  sigma(3, 2) = diag;
  sigma(0, 3) = cross_plus;
  sigma(3, 0) = cross_plus;
  sigma(1, 2) = cross_minus;
  sigma(2, 1) = cross_minus;
  return sigma;
}

SourceDiagonalization diagonalize_source(const SourceParams& params) {
  params.validate();
  // Phase shifter diag(1, 1, e^{-iα}, e^{iα}) with α = −φ, then a 50:50 beam
  // splitter mixing (a, b) and (a†, b†).
  const double alpha = -params.phi;
  ComplexMatrix shifter = ComplexMatrix::Identity(4, 4);
  shifter(2, 2) = std::exp(-kI * alpha);
  shifter(3, 3) = std::exp(kI * alpha);
  ComplexMatrix splitter(4, 4);
  splitter << 1, 0, 1, 0,
              0, 1, 0, 1,
              1, 0, -1, 0,
              0, 1, 0, -1;
  splitter *= kInvSqrt2;

  SourceDiagonalization out;
  out.transform = splitter * shifter;
  out.diagonal = out.transform * covariance_matrix(params) * out.transform.transpose();
  out.occupation_a = out.diagonal(0, 1).real() - 0.5;
  out.occupation_b = out.diagonal(2, 3).real() - 0.5;
  return out;
}

double PhotonSectorDecomposition::truncation_deficit() const {
  return 1.0 - (p00 + one_photon.weight + two_photon.weight);
}

PhotonSectorDecomposition fock_expansion(const SourceParams& params) {
  params.validate();
  if (params.epsilon >= kMaxFockEpsilon) {
    throw std::domain_error("Fock expansion truncated at two photons needs epsilon < 0.1");
  }
  PhotonSectorDecomposition out;
  out.n_a = 0.5 * (params.epsilon + params.gamma * params.epsilon);
  out.n_b = 0.5 * (params.epsilon - params.gamma * params.epsilon);
  out.p00 = 1.0 / ((out.n_a + 1.0) * (out.n_b + 1.0));
  const double xa = out.n_a / (out.n_a + 1.0);
  const double xb = out.n_b / (out.n_b + 1.0);

  out.one_photon.weight = out.p00 * (xa + xb);
  if (out.one_photon.weight > 0.0) {
    out.one_photon.plus_fraction = xa / (xa + xb);
    out.one_photon.minus_fraction = xb / (xa + xb);
  }
  const double w0 = xa * xb;
  const double wp = xa * xa;
  const double wm = xb * xb;
  out.two_photon.weight = out.p00 * (w0 + wp + wm);
  if (out.two_photon.weight > 0.0) {
    const double total = w0 + wp + wm;
    out.two_photon.zero_fraction = w0 / total;
    out.two_photon.plus_fraction = wp / total;
    out.two_photon.minus_fraction = wm / total;
  }
  return out;
}

ComplexVector two_photon_state_zero(double phi) {
  ComplexVector v = ComplexVector::Zero(9);
  v(fock(2, 0)) = kInvSqrt2;
  v(fock(0, 2)) = -kInvSqrt2 * std::exp(2.0 * kI * phi);
  return v;
}

ComplexVector two_photon_state_plus(double phi) {
  ComplexVector v = ComplexVector::Zero(9);
  v(fock(2, 0)) = 0.5;
  v(fock(1, 1)) = kInvSqrt2 * std::exp(kI * phi);
  v(fock(0, 2)) = 0.5 * std::exp(2.0 * kI * phi);
  return v;
}

ComplexVector two_photon_state_minus(double phi) {
  ComplexVector v = two_photon_state_plus(phi);
  v(fock(1, 1)) = -v(fock(1, 1));
  return v;
}

ComplexMatrix truncated_fock_state(const SourceParams& params) {
  const auto sectors = fock_expansion(params);
  ComplexMatrix rho = ComplexMatrix::Zero(9, 9);
  rho(fock(0, 0), fock(0, 0)) = sectors.p00;

  // one photon: |10> ± e^{iφ}|01> embedded in the Fock space
  auto embed_one = [&](const ComplexVector& q) {
    ComplexVector v = ComplexVector::Zero(9);
    v(fock(1, 0)) = q(2);
    v(fock(0, 1)) = q(1);
    return v;
  };
  const auto& one = sectors.one_photon;
  rho += one.weight * one.plus_fraction * outer(embed_one(psi_plus(params.phi)),
                                                embed_one(psi_plus(params.phi)));
  rho += one.weight * one.minus_fraction * outer(embed_one(psi_minus(params.phi)),
                                                 embed_one(psi_minus(params.phi)));
  const auto& two = sectors.two_photon;
  const ComplexVector z = two_photon_state_zero(params.phi);
  const ComplexVector p = two_photon_state_plus(params.phi);
  const ComplexVector m = two_photon_state_minus(params.phi);
  rho += two.weight * (two.zero_fraction * outer(z, z) + two.plus_fraction * outer(p, p) +
                       two.minus_fraction * outer(m, m));
  return rho;
}

ParamDerivativeFamily conditioned_state(const SourceParams& params) {
  params.validate();
  const double wp = 0.5 * (1.0 + params.gamma);
  const double wm = 0.5 * (1.0 - params.gamma);
  const ComplexVector plus = psi_plus(params.phi);
  const ComplexVector minus = psi_minus(params.phi);
  // ∂φ psi_± = ±i e^{iφ}|01>/√2
  ComplexVector dplus = ComplexVector::Zero(4);
  dplus(1) = kI * kInvSqrt2 * std::exp(kI * params.phi);
  const ComplexVector dminus = -dplus;

  const ComplexMatrix pp = outer(plus, plus);
  const ComplexMatrix mm = outer(minus, minus);
  ComplexMatrix rho = wp * pp + wm * mm;
  rho = (0.5 * (rho + rho.adjoint())).eval();
  ComplexMatrix d_phi = wp * (outer(dplus, plus) + outer(plus, dplus)) +
                        wm * (outer(dminus, minus) + outer(minus, dminus));
  ComplexMatrix d_gamma = 0.5 * (pp - mm);
  return {qcore::DensityMatrix(std::move(rho), {2, 2}), std::move(d_phi), std::move(d_gamma)};
}

qcore::DensityMatrix rho_star(const SourceParams& params) {
  return rho_star_family(params).state;
}

ParamDerivativeFamily rho_star_family(const SourceParams& params) {
  params.validate();
  if (params.epsilon > 1.0) throw std::domain_error("rho_star needs epsilon <= 1");
  const auto photon = conditioned_state(params);
  ComplexMatrix rho = params.epsilon * photon.state.matrix();
  rho(0, 0) += 1.0 - params.epsilon;
  return {qcore::DensityMatrix(std::move(rho), {2, 2}), params.epsilon * photon.d_phi,
          params.epsilon * photon.d_gamma};
}

}  // namespace starqec::source
